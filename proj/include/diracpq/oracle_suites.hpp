#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "diracpq/dirac.hpp"
#include "diracpq/packet.hpp"
#include "diracpq/pauli.hpp"
#include "diracpq/smallmass.hpp"
#include "diracpq/tcl.hpp"

namespace diracpq {

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

struct CheckReporter {
    std::ostream& out;
    bool all_pass = true;

    void check(const std::string& name, double measured, bool pass, const std::string& bound) {
        out << (pass ? "[PASS] " : "[FAIL] ") << name << ": measured=" << sci(measured)
            << ", bound=" << bound << "\n";
        all_pass = all_pass && pass;
    }

    void leq(const std::string& name, double measured, double bound) {
        check(name, measured, measured <= bound, "<= " + sci(bound));
    }

    void in_range(const std::string& name, double measured, double lo, double hi) {
        check(name, measured, measured >= lo && measured <= hi,
              "[" + sci(lo) + ", " + sci(hi) + "]");
    }

    void info(const std::string& line) { out << "[INFO] " << line << "\n"; }
};

// Momentum-diagonal factors of a field-to-field linear map, estimated from
// one application on a broadband field. Modes with negligible weight are
// skipped.
inline double max_factor_error(const UpperField& input, const UpperField& output,
                               const std::function<cplx(double)>& expected) {
    SpectralOps ops(input.grid);
    const std::vector<cplx> cin = ops.to_momentum(input);
    const std::vector<cplx> cout = ops.to_momentum(output);
    double weight_max = 0.0;
    for (const cplx& c : cin) weight_max = std::max(weight_max, std::abs(c));
    double err = 0.0;
    for (int i = 0; i < input.grid.n(); ++i) {
        if (std::abs(cin[i]) < 1e-6 * weight_max) continue;
        const cplx factor = cout[i] / cin[i];
        const cplx want = expected(input.grid.k(i));
        err = std::max(err, std::abs(factor - want) / std::max(1.0, std::abs(want)));
    }
    return err;
}

}  // namespace detail

// Free-field cross checks: split stepping against the closed-form mode
// propagator, and the closed form against the dense eigendecomposition.
inline bool oracle_free_exactness(std::ostream& out) {
    detail::CheckReporter rep{out};
    const PhysicsParams par{1.0, 1.0, 1.0};

    {
        const GridSpec grid = make_grid(256, -15.0, 15.0);
        SpinorField psi0 = upper_only(gaussian_packet(grid, 4.0, 0.0));
        const double norm0 = norm_sq(psi0);
        const double t = 2.0;
        const int steps = 2000;
        const SpinorField split =
            propagate_strang(psi0, t / steps, steps, PotentialSpec::zero(), par);
        const SpinorField exact = propagate_exact_free(psi0, t, par);
        rep.leq("strang vs exact (phi=0, t=2) L2 error", l2_distance(split, exact), 1e-8);
        rep.leq("strang norm drift", std::abs(norm_sq(split) - norm0), 1e-10);
    }
    {
        const GridSpec grid = make_grid(64, -8.0, 8.0);
        SpinorField psi0 = upper_only(gaussian_packet(grid, 2.0, 0.0));
        const double t = 2.0;
        const SpinorField exact = propagate_exact_free(psi0, t, par);
        const SpinorField dense = dense_oracle(psi0, t, PotentialSpec::zero(), par);
        rep.leq("exact vs dense oracle (64 pts) L2 error", l2_distance(exact, dense), 1e-10);
    }
    return rep.all_pass;
}

// The closed-form generator against the interaction-picture s-quadrature.
inline bool oracle_kernel_quadrature(std::ostream& out) {
    detail::CheckReporter rep{out};
    const PhysicsParams par{1.0, 1.0, 1.0};
    const GridSpec grid = make_grid(64, -8.0, 8.0);
    const UpperField u = gaussian_packet(grid, 2.0, 0.3);

    {
        const double t = 1.5;
        const UpperField oracle =
            kernel_quadrature_oracle(u, t, PotentialSpec::zero(), par, 600);
        const cplx mod = tcl_modulations(t, par).kinetic;
        const double err = detail::max_factor_error(
            u, oracle, [&](double k) { return -imag_unit * (k * k / (2.0 * par.m)) * mod; });
        rep.leq("phi=0 kernel vs closed form, per mode", err, 1e-8);
    }
    {
        const PotentialSpec pot = PotentialSpec::linear(0.1);
        const double t = 1.5;
        const UpperField coarse = kernel_quadrature_oracle(u, t, pot, par, 600);
        const UpperField fine = kernel_quadrature_oracle(u, t, pot, par, 1200);
        const double rel = l2_distance(coarse, fine) / std::sqrt(norm_sq(fine));
        rep.leq("quadrature convergence (n_quad doubling)", rel, 1e-6);

        double worst = 0.0;
        out << "[INFO] generator vs oracle relative discrepancy (linear a=0.1):\n";
        for (double tc : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0}) {
            const UpperField gen = apply_tcl_generator(u, tc, pot, par);
            const UpperField orc = kernel_quadrature_oracle(
                u, tc, pot, par, std::max(600, static_cast<int>(200 * tc) + 1));
            const double rel_t = l2_distance(gen, orc) / std::sqrt(norm_sq(orc));
            worst = std::max(worst, rel_t);
            out << "[INFO]   t=" << tc << "  rel=" << detail::sci(rel_t) << "\n";
        }
        // Target, not a gate: a systematic excess would point at the
        // operator-ordering ambiguity and must be reported, not hidden.
        rep.check("generator vs oracle discrepancy target", worst, true,
                  "report; target <= 1.000e-03");
        if (worst > 1e-3)
            rep.info("discrepancy exceeds 1e-3: operator-ordering mismatch against the "
                     "second-order kernel; see compare output above");
    }
    return rep.all_pass;
}

// O(m^2) agreement of the small-mass phase with the exact mode evolution
// expressed in the same interaction picture.
inline bool oracle_smallmass_scaling(std::ostream& out) {
    detail::CheckReporter rep{out};
    const double t = 5.0;
    auto phase_error = [&](double m) {
        const PhysicsParams par{m, 1.0, 1.0};
        const cplx global = std::polar(1.0, rest_energy(par) * t);
        double worst = 0.0;
        for (double p = -2.0; p <= 2.0 + 1e-12; p += 0.05) {
            const cplx approx = smallmass_phase(p, t, par) * global;
            const cplx exact = exact_interaction_upper_amplitude(p, t, par);
            worst = std::max(worst, std::abs(approx - exact));
        }
        return worst;
    };
    const double e_m = phase_error(0.05);
    const double e_half = phase_error(0.025);
    rep.in_range("phase error ratio E(m)/E(m/2), m=0.05", e_m / e_half, 3.2, 4.8);

    const GridSpec grid = make_grid(128, -12.0, 12.0);
    const UpperField u0 = gaussian_packet(grid, 3.0, 0.5);
    const UpperField ut = propagate_smallmass(u0, 7.0, PhysicsParams{0.05, 1.0, 1.0});
    rep.leq("smallmass norm preservation", std::abs(norm_sq(ut) - norm_sq(u0)), 1e-12);
    return rep.all_pass;
}

// Convergence-order spot checks for the two stepping schemes.
inline bool oracle_order_tests(std::ostream& out) {
    detail::CheckReporter rep{out};
    const PhysicsParams par{1.0, 1.0, 1.0};

    {
        const GridSpec grid = make_grid(128, -8.0, 8.0);
        const PotentialSpec pot = PotentialSpec::linear(0.1);
        SpinorField psi0 = upper_only(gaussian_packet(grid, 2.0, 0.2));
        const double t = 1.0;
        const SpinorField ref = dense_oracle(psi0, t, pot, par);
        auto err_at = [&](double dt) {
            const int steps = static_cast<int>(std::lround(t / dt));
            return l2_distance(propagate_strang(psi0, t / steps, steps, pot, par), ref);
        };
        const double ratio = err_at(4e-3) / err_at(2e-3);
        rep.in_range("strang dt-halving error ratio", ratio, 3.4, 4.6);
    }
    {
        // momentum extent kept small: RK4 stability needs dt k_max^2/m < 2.8
        const GridSpec grid = make_grid(32, -16.0, 16.0);
        const UpperField u0 = gaussian_packet(grid, 4.0, 0.0);
        SpectralOps ops(grid);
        const std::vector<cplx> c0 = ops.to_momentum(u0);
        const double t = 2.0;
        auto err_at = [&](double dt) {
            const int steps = static_cast<int>(std::lround(t / dt));
            TclStepper stepper(u0, 0.0, t / steps, PotentialSpec::zero(), par);
            for (int s = 0; s < steps; ++s) stepper.step();
            const UpperField ref =
                ops.to_position(tcl_free_solution(grid, c0, stepper.time(), par));
            return l2_distance(stepper.state(), ref);
        };
        const double ratio = err_at(0.04) / err_at(0.02);
        rep.in_range("rk4 dt-halving error ratio", ratio, 12.0, 20.0);
    }
    return rep.all_pass;
}

inline bool run_oracle_suite(const std::string& name, std::ostream& out) {
    if (name == "free-exactness") return oracle_free_exactness(out);
    if (name == "kernel-quadrature") return oracle_kernel_quadrature(out);
    if (name == "smallmass-scaling") return oracle_smallmass_scaling(out);
    if (name == "order-tests") return oracle_order_tests(out);
    throw std::invalid_argument(
        "oracle: unknown suite '" + name +
        "' (expected free-exactness, kernel-quadrature, smallmass-scaling, order-tests)");
}

}  // namespace diracpq
