#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "diracpq/spectral.hpp"

namespace diracpq {

// Mass, light speed and charge in hbar = 1 units. The 1D representation
// fixes alpha -> sigma_x and beta -> sigma_z.
struct PhysicsParams {
    double m = 1.0;  // mass, >= 0
    double c = 1.0;  // light speed, > 0
    double e = 1.0;  // charge
};

inline void validate(const PhysicsParams& p) {
    if (p.m < 0.0) throw std::invalid_argument("physics: mass must be >= 0");
    if (!(p.c > 0.0)) throw std::invalid_argument("physics: light speed must be > 0");
}

inline double rest_energy(const PhysicsParams& p) { return p.m * p.c * p.c; }

// Relativistic dispersion: sqrt(p^2 c^2 + m^2 c^4).
inline double lambda_of(double p, const PhysicsParams& par) {
    return std::hypot(p * par.c, rest_energy(par));
}

// Static scalar potential phi(x) with analytic zero/linear variants and a
// grid-tabulated variant whose derivatives are taken spectrally. The
// particle charge multiplies phi wherever it enters a Hamiltonian; the
// potential itself carries no charge factor.
class PotentialSpec {
public:
    enum class Kind { Zero, Linear, Tabulated };

    static PotentialSpec zero() { return PotentialSpec(Kind::Zero, 0.0, {}, {}); }

    static PotentialSpec linear(double slope) {
        return PotentialSpec(Kind::Linear, slope, {}, {});
    }

    static PotentialSpec tabulated(const GridSpec& grid, std::vector<double> values) {
        if (static_cast<int>(values.size()) != grid.n())
            throw std::invalid_argument("potential: table length must match the grid");
        return PotentialSpec(Kind::Tabulated, 0.0, grid, std::move(values));
    }

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero; }
    double slope() const { return slope_; }

    // phi, phi', phi'' at every node of the given grid.
    struct Table {
        std::vector<double> phi, dphi, d2phi;
        bool zero = false;
    };

    Table sample(const GridSpec& grid) const {
        const std::size_t n = static_cast<std::size_t>(grid.n());
        Table t;
        switch (kind_) {
            case Kind::Zero:
                t.phi.assign(n, 0.0);
                t.dphi.assign(n, 0.0);
                t.d2phi.assign(n, 0.0);
                t.zero = true;
                break;
            case Kind::Linear:
                t.phi.resize(n);
                for (int i = 0; i < grid.n(); ++i) t.phi[i] = slope_ * grid.x(i);
                t.dphi.assign(n, slope_);
                t.d2phi.assign(n, 0.0);
                break;
            case Kind::Tabulated: {
                if (!(grid == *table_grid_))
                    throw std::invalid_argument("potential: table was built on a different grid");
                t.phi = table_;
                // Spectral derivatives; the table is assumed band-limited
                // and periodic on the grid.
                SpectralOps ops(grid);
                std::vector<cplx> c(n);
                for (std::size_t i = 0; i < n; ++i) c[i] = table_[i];
                std::vector<cplx> ck = ops.fwd_raw(c);
                std::vector<cplx> c1(ck), c2(ck);
                for (int i = 0; i < grid.n(); ++i) {
                    const cplx ik(0.0, grid.k(i));
                    c1[i] *= ik;
                    c2[i] *= ik * ik;
                }
                std::vector<cplx> d1 = ops.inv_raw(c1);
                std::vector<cplx> d2 = ops.inv_raw(c2);
                t.dphi.resize(n);
                t.d2phi.resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    t.dphi[i] = d1[i].real();
                    t.d2phi[i] = d2[i].real();
                }
                break;
            }
        }
        return t;
    }

private:
    PotentialSpec(Kind kind, double slope, std::optional<GridSpec> grid,
                  std::vector<double> table)
        : kind_(kind), slope_(slope), table_grid_(std::move(grid)), table_(std::move(table)) {}

    Kind kind_;
    double slope_;
    std::optional<GridSpec> table_grid_;
    std::vector<double> table_;
};

// Free-particle eigenvectors of c p sigma_x + m c^2 sigma_z with
// eigenvalues +lambda (u_plus) and -lambda (u_minus). Degenerate input
// m = p = 0 returns the canonical basis with lambda = 0 by convention.
struct FreeEigenbasis {
    std::array<double, 2> u_plus;
    std::array<double, 2> u_minus;
    double lambda;
};

inline FreeEigenbasis free_eigenbasis(double p, const PhysicsParams& par) {
    validate(par);
    const double mc2 = rest_energy(par);
    const double lam = lambda_of(p, par);
    if (lam == 0.0) return {{1.0, 0.0}, {0.0, 1.0}, 0.0};
    const double head = std::sqrt((lam + mc2) / (2.0 * lam));
    const double ratio = p * par.c / (lam + mc2);
    return {{head, head * ratio}, {-head * ratio, head}, lam};
}

// P/Q block partition of a dense Hamiltonian ordered as (all upper nodes,
// then all lower nodes): h = PHP, R = PHQ, W = QHP, D = QHQ.
struct BlockPartition {
    Eigen::MatrixXcd h, R, W, D;
};

inline BlockPartition block_partition(const Eigen::MatrixXcd& H) {
    if (H.rows() != H.cols() || H.rows() % 2 != 0)
        throw std::invalid_argument("block partition: matrix must be square with even dimension");
    const Eigen::Index n = H.rows() / 2;
    return {H.topLeftCorner(n, n), H.topRightCorner(n, n),
            H.bottomLeftCorner(n, n), H.bottomRightCorner(n, n)};
}

inline Eigen::MatrixXcd reassemble(const BlockPartition& b) {
    const Eigen::Index n = b.h.rows();
    Eigen::MatrixXcd H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = b.h;
    H.topRightCorner(n, n) = b.R;
    H.bottomLeftCorner(n, n) = b.W;
    H.bottomRightCorner(n, n) = b.D;
    return H;
}

}  // namespace diracpq
