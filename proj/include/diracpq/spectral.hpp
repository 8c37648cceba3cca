#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "diracpq/field.hpp"

namespace diracpq {

// Spectral position <-> momentum maps on one grid. The pair is normalized
// as the discretized continuum transform,
//   c_k   = dx/sqrt(2 pi) * sum_i u(x_i) exp(-i k x_i)
//   u(x_i) = dk/sqrt(2 pi) * sum_k c_k  exp(+i k x_i)
// so Parseval holds with the physical measures:
//   sum_k |c_k|^2 dk = sum_i |u_i|^2 dx.
// One instance caches the transform plan and the phase tables; reuse it
// across steps of a propagation run.
class SpectralOps {
public:
    explicit SpectralOps(const GridSpec& grid) : grid_(grid), k_(grid.momentum_nodes()) {
        const int n = grid.n();
        const double root = std::sqrt(2.0 * std::numbers::pi);
        fwd_scale_.resize(n);
        inv_scale_.resize(n);
        for (int i = 0; i < n; ++i) {
            // exp(-i k x_min) carries the grid offset so coefficients match
            // the continuum transform, not just the index-space DFT.
            const cplx offset = std::polar(1.0, -k_[i] * grid.x_min());
            fwd_scale_[i] = offset * (grid.dx() / root);
            inv_scale_[i] = std::conj(offset) * (root / grid.dx());
        }
    }

    const GridSpec& grid() const { return grid_; }
    const std::vector<double>& k() const { return k_; }

    // Unscaled index-space DFT pair (inverse carries the usual 1/n).
    std::vector<cplx> fwd_raw(const std::vector<cplx>& v) const {
        std::vector<cplx> out;
        fft_.fwd(out, v);
        return out;
    }
    std::vector<cplx> inv_raw(const std::vector<cplx>& v) const {
        std::vector<cplx> out;
        fft_.inv(out, v);
        return out;
    }

    std::vector<cplx> to_momentum(const UpperField& f) const {
        check(f);
        std::vector<cplx> c = fwd_raw(f.values);
        for (int i = 0; i < grid_.n(); ++i) c[i] *= fwd_scale_[i];
        return c;
    }

    UpperField to_position(const std::vector<cplx>& coeffs) const {
        if (static_cast<int>(coeffs.size()) != grid_.n())
            throw std::invalid_argument("spectral: coefficient length mismatch");
        std::vector<cplx> tmp(coeffs);
        for (int i = 0; i < grid_.n(); ++i) tmp[i] *= inv_scale_[i];
        return {grid_, inv_raw(tmp)};
    }

    // Momentum operator p = -i d/dx, applied spectrally. The offset phases
    // cancel, so the raw DFT pair suffices.
    UpperField apply_p(const UpperField& f) const {
        check(f);
        std::vector<cplx> c = fwd_raw(f.values);
        for (int i = 0; i < grid_.n(); ++i) c[i] *= k_[i];
        return {grid_, inv_raw(c)};
    }

    // p f and p^2 f from a single forward transform.
    void derivatives(const UpperField& f, UpperField& pf, UpperField& p2f) const {
        check(f);
        std::vector<cplx> c = fwd_raw(f.values);
        std::vector<cplx> c2(c);
        for (int i = 0; i < grid_.n(); ++i) {
            c[i] *= k_[i];
            c2[i] *= k_[i] * k_[i];
        }
        pf = {grid_, inv_raw(c)};
        p2f = {grid_, inv_raw(c2)};
    }

private:
    void check(const UpperField& f) const {
        if (!(f.grid == grid_) || static_cast<int>(f.values.size()) != grid_.n())
            throw std::invalid_argument("spectral: field/grid mismatch");
    }

    GridSpec grid_;
    std::vector<double> k_;
    std::vector<cplx> fwd_scale_, inv_scale_;
    mutable Eigen::FFT<double> fft_;
};

inline std::vector<cplx> to_momentum(const UpperField& f) {
    return SpectralOps(f.grid).to_momentum(f);
}

inline UpperField to_position(const GridSpec& grid, const std::vector<cplx>& coeffs) {
    return SpectralOps(grid).to_position(coeffs);
}

inline UpperField apply_p(const UpperField& f) {
    return SpectralOps(f.grid).apply_p(f);
}

// Momentum-space norm squared, sum |c_k|^2 dk.
inline double momentum_norm_sq(const GridSpec& grid, const std::vector<cplx>& coeffs) {
    double acc = 0.0;
    for (const cplx& c : coeffs) acc += std::norm(c);
    return acc * grid.dk();
}

// <p> by momentum-space quadrature.
inline double momentum_expectation(const GridSpec& grid, const std::vector<cplx>& coeffs) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        const double w = std::norm(coeffs[i]);
        num += grid.k(i) * w;
        den += w;
    }
    return num / den;
}

}  // namespace diracpq
