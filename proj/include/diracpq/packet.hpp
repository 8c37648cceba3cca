#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "diracpq/field.hpp"

namespace diracpq {

// Normalized Gaussian packet
//   f(x) = (2/(x0 pi))^{1/4} exp[-(x - xc)^2 / x0 + i p0 (x - xc)],
// width parameter x0 (sigma_x = sqrt(x0)/2), mean momentum p0. Rejects
// packets whose tails touch the periodic boundary: the support window
// xc +- 4 sqrt(x0) must lie inside the grid and the amplitude at the edge
// nodes must not exceed 1e-8.
inline UpperField gaussian_packet(const GridSpec& grid, double x0, double p0,
                                  double x_center = 0.0) {
    if (!(x0 > 0.0)) throw std::invalid_argument("packet: x0 must be positive");

    const double support = 4.0 * std::sqrt(x0);
    if (x_center - support < grid.x_min() || x_center + support > grid.x_max())
        throw std::invalid_argument(
            "packet: support window xc +- 4 sqrt(x0) exceeds the grid extent");

    const double amp = std::pow(2.0 / (x0 * std::numbers::pi), 0.25);
    const double edge = std::min(std::abs(grid.x_min() - x_center),
                                 std::abs(grid.x_max() - x_center));
    if (amp * std::exp(-edge * edge / x0) > 1e-8)
        throw std::invalid_argument("packet: tail amplitude at the boundary exceeds 1e-8");

    UpperField f = zero_field(grid);
    for (int i = 0; i < grid.n(); ++i) {
        const double d = grid.x(i) - x_center;
        f.values[i] = amp * std::exp(-d * d / x0) * std::polar(1.0, p0 * d);
    }
    return f;
}

}  // namespace diracpq
