// Density records, leakage and record-to-record comparison metrics.

#include <doctest.h>

#include <cmath>

#include "diracpq/diagnostics.hpp"
#include "diracpq/dirac.hpp"
#include "diracpq/packet.hpp"
#include "test_helpers.hpp"

using namespace diracpq;
using doctest::Approx;

TEST_CASE("q_density: zero lower component gives the zero array") {
    const GridSpec grid = make_grid(64, -8.0, 8.0);
    const SpinorField psi = upper_only(gaussian_packet(grid, 2.0, 0.0));
    for (double v : q_density(psi)) CHECK(v == 0.0);
}

TEST_CASE("q_density: nonnegative and integrates to the lower norm") {
    const GridSpec grid = make_grid(128, -20.0, 20.0);
    const PhysicsParams par{1.0, 1.0, 1.0};
    const SpinorField psi =
        propagate_exact_free(upper_only(gaussian_packet(grid, 6.0, 0.0)), 2.0, par);
    const std::vector<double> q = q_density(psi);
    double total = 0.0;
    for (double v : q) {
        CHECK(v >= 0.0);
        total += v;
    }
    CHECK(total * grid.dx() == Approx(norm_sq(psi.lower)).epsilon(1e-12));
}

namespace {

DensityRecord tiny_record(const GridSpec& grid, double scale) {
    DensityRecord rec;
    rec.grid = grid;
    rec.times = {0.0, 0.5, 1.0};
    const std::size_t n = static_cast<std::size_t>(grid.n());
    rec.q_density.assign(3 * n, 0.0);
    rec.p_density.assign(3 * n, 0.0);
    for (std::size_t it = 0; it < 3; ++it)
        for (std::size_t ix = 0; ix < n; ++ix)
            rec.q_density[it * n + ix] = scale * std::sin(0.1 * (it + 1) * ix);
    rec.p_norm = {1.0, 0.9, 0.8};
    rec.q_norm = {0.0, 0.1, 0.2};
    rec.leakage = {0.0, 0.1, 0.2};
    return rec;
}

}  // namespace

TEST_CASE("total_leakage: reads the stored series") {
    const DensityRecord rec = tiny_record(make_grid(16, 0.0, 1.0), 1.0);
    CHECK(total_leakage(rec, 0) == 0.0);
    CHECK(total_leakage(rec, 2) == Approx(0.2));
    CHECK(leakage_from_p_norm(0.75) == Approx(0.25));
}

TEST_CASE("compare_densities: identical records give zero metrics") {
    const GridSpec grid = make_grid(16, 0.0, 1.0);
    const DensityRecord rec = tiny_record(grid, 1.0);
    const CompareMetrics m = compare_densities(rec, rec);
    CHECK(m.l2_normalized == 0.0);
    CHECK(m.max_abs == 0.0);
    for (double v : m.per_time) CHECK(v == 0.0);
}

TEST_CASE("compare_densities: doubling the record gives unit normalized discrepancy") {
    const GridSpec grid = make_grid(16, 0.0, 1.0);
    const DensityRecord a = tiny_record(grid, 1.0);
    const DensityRecord b = tiny_record(grid, 2.0);
    const CompareMetrics m = compare_densities(a, b);
    CHECK(m.l2_normalized == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("compare_densities: rejects mismatched shapes") {
    const DensityRecord a = tiny_record(make_grid(16, 0.0, 1.0), 1.0);
    DensityRecord b = tiny_record(make_grid(32, 0.0, 1.0), 1.0);
    CHECK_THROWS_AS(compare_densities(a, b), std::invalid_argument);

    DensityRecord c = a;
    c.times[1] = 0.6;
    CHECK_THROWS_AS(compare_densities(a, c), std::invalid_argument);
}
