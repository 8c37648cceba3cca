#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracpq {

// Uniform periodic 1D grid together with its conjugate momentum lattice.
// Position nodes: x_i = x_min + i*dx, i in [0, n). Momentum nodes follow
// the discrete-transform layout: k_i = 2*pi*j/(n*dx) with j = i for
// i < n/2 and j = i - n otherwise, so j runs over [-n/2, n/2).
class GridSpec {
public:
    GridSpec(int n_points, double x_min, double x_max)
        : n_(n_points), x_min_(x_min), x_max_(x_max) {
        if (n_points < 8)
            throw std::invalid_argument("grid: n_points must be >= 8, got " +
                                        std::to_string(n_points));
        if (!(x_max > x_min))
            throw std::invalid_argument("grid: x_max must exceed x_min");
        dx_ = (x_max_ - x_min_) / n_;
    }

    int n() const { return n_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double dx() const { return dx_; }
    double dk() const { return 2.0 * std::numbers::pi / (n_ * dx_); }

    double x(int i) const { return x_min_ + i * dx_; }

    double k(int i) const {
        const int j = (i < n_ / 2) ? i : i - n_;
        return j * dk();
    }

    std::vector<double> momentum_nodes() const {
        std::vector<double> nodes(n_);
        for (int i = 0; i < n_; ++i) nodes[i] = k(i);
        return nodes;
    }

    bool operator==(const GridSpec&) const = default;

private:
    int n_;
    double x_min_, x_max_, dx_;
};

inline GridSpec make_grid(int n_points, double x_min, double x_max) {
    return GridSpec(n_points, x_min, x_max);
}

}  // namespace diracpq
