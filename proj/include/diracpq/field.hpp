#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "diracpq/common.hpp"
#include "diracpq/grid.hpp"

namespace diracpq {

// One complex component sampled on a grid. Used both for the upper spinor
// (the projected two-component state, one component in 1D) and for
// reconstructed lower components.
struct UpperField {
    GridSpec grid;
    std::vector<cplx> values;
};

inline UpperField zero_field(const GridSpec& grid) {
    return {grid, std::vector<cplx>(static_cast<std::size_t>(grid.n()))};
}

// Full Dirac state: upper and lower components on one shared grid.
struct SpinorField {
    UpperField upper;
    UpperField lower;
};

inline SpinorField make_spinor(UpperField upper, UpperField lower) {
    if (!(upper.grid == lower.grid))
        throw std::invalid_argument("spinor: components must share one grid");
    return {std::move(upper), std::move(lower)};
}

inline SpinorField upper_only(UpperField upper) {
    UpperField lower = zero_field(upper.grid);
    return {std::move(upper), std::move(lower)};
}

// Discrete L2 norm squared, sum |u_i|^2 dx.
inline double norm_sq(const UpperField& f) {
    double acc = 0.0;
    for (const cplx& v : f.values) acc += std::norm(v);
    return acc * f.grid.dx();
}

inline double norm_sq(const SpinorField& s) {
    return norm_sq(s.upper) + norm_sq(s.lower);
}

inline cplx inner_product(const UpperField& a, const UpperField& b) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        acc += std::conj(a.values[i]) * b.values[i];
    return acc * a.grid.dx();
}

inline double l2_distance(const UpperField& a, const UpperField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        acc += std::norm(a.values[i] - b.values[i]);
    return std::sqrt(acc * a.grid.dx());
}

inline double l2_distance(const SpinorField& a, const SpinorField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.upper.values.size(); ++i) {
        acc += std::norm(a.upper.values[i] - b.upper.values[i]);
        acc += std::norm(a.lower.values[i] - b.lower.values[i]);
    }
    return std::sqrt(acc * a.upper.grid.dx());
}

// Largest component amplitude on the two edge nodes; the tail-clearance
// quantity checked against boundary-contact guards.
inline double boundary_amplitude(const UpperField& f) {
    const std::size_t n = f.values.size();
    return std::max(std::abs(f.values[0]), std::abs(f.values[n - 1]));
}

inline double boundary_amplitude(const SpinorField& s) {
    return std::max(boundary_amplitude(s.upper), boundary_amplitude(s.lower));
}

}  // namespace diracpq
