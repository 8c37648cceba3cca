#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "diracpq/config.hpp"
#include "diracpq/diagnostics.hpp"
#include "diracpq/dirac.hpp"
#include "diracpq/pauli.hpp"
#include "diracpq/smallmass.hpp"
#include "diracpq/tcl.hpp"

namespace diracpq {

struct RunDiagnostics {
    // NaN when the solver does not conserve the recorded norm (tcl).
    double norm_drift_max = 0.0;
    double boundary_tail_max = 0.0;
    double resolved_dt = 0.0;
    long n_steps = 0;
    std::vector<std::string> warnings;
};

struct RunResult {
    DensityRecord record;
    RunDiagnostics diag;
};

namespace detail {

inline void guard_boundary(double amplitude, double threshold, double t) {
    if (amplitude > threshold)
        throw guard_error("boundary contact at t = " + format_warn(t) + ": edge amplitude " +
                          format_warn(amplitude) + " exceeds " + format_warn(threshold));
}

inline void append_snapshot(DensityRecord& rec, double t, const std::vector<double>& q,
                            const std::vector<double>& p, double p_norm, double q_norm,
                            double leak) {
    rec.times.push_back(t);
    rec.q_density.insert(rec.q_density.end(), q.begin(), q.end());
    rec.p_density.insert(rec.p_density.end(), p.begin(), p.end());
    rec.p_norm.push_back(p_norm);
    rec.q_norm.push_back(q_norm);
    rec.leakage.push_back(leak);
}

}  // namespace detail

// Runs one configured simulation and collects the density history.
// Boundary tail clearance is checked at every snapshot; contact aborts
// with a guard_error.
inline RunResult run_simulation(const RunConfig& cfg) {
    RunResult result;
    result.diag.warnings = validate_config(cfg);

    const GridSpec grid = grid_of(cfg);
    const PotentialSpec potential = potential_of(cfg);
    const PhysicsParams& par = cfg.physics;
    const TimeGrid tg = resolve_time_grid(cfg);
    result.diag.resolved_dt = tg.resolved_dt;

    UpperField u0 = gaussian_packet(grid, cfg.x0, cfg.p0, cfg.x_center);
    result.record.grid = grid;

    auto track = [&](double t, double tail) {
        result.diag.boundary_tail_max = std::max(result.diag.boundary_tail_max, tail);
        detail::guard_boundary(tail, cfg.boundary_guard, t);
    };

    switch (cfg.solver) {
        case SolverKind::DiracExact: {
            SpinorField state0 = upper_only(std::move(u0));
            const double norm0 = norm_sq(state0);
            SpectralOps ops(grid);
            const std::vector<cplx> cu0 = ops.fwd_raw(state0.upper.values);
            std::vector<cplx> cu(grid.n()), cl(grid.n());
            for (double t : tg.times) {
                for (int i = 0; i < grid.n(); ++i) {
                    const Mat2c m = free_mode_propagator(grid.k(i), t, par);
                    cu[i] = m.m00 * cu0[i];
                    cl[i] = m.m10 * cu0[i];
                }
                SpinorField state{{grid, ops.inv_raw(cu)}, {grid, ops.inv_raw(cl)}};
                track(t, boundary_amplitude(state));
                const double pn = norm_sq(state.upper), qn = norm_sq(state.lower);
                result.diag.norm_drift_max =
                    std::max(result.diag.norm_drift_max, std::abs(pn + qn - norm0));
                detail::append_snapshot(result.record, t, q_density(state),
                                        density(state.upper), pn, qn,
                                        leakage_from_p_norm(pn));
            }
            break;
        }
        case SolverKind::DiracSplit: {
            SpinorField state0 = upper_only(std::move(u0));
            const double norm0 = norm_sq(state0);
            StrangStepper stepper(std::move(state0), tg.resolved_dt, potential, par);
            bool first = true;
            for (double t : tg.times) {
                if (!first)
                    for (int s = 0; s < tg.steps_per_interval; ++s) {
                        stepper.step();
                        ++result.diag.n_steps;
                    }
                first = false;
                const SpinorField& state = stepper.state();
                track(t, boundary_amplitude(state));
                const double pn = norm_sq(state.upper), qn = norm_sq(state.lower);
                result.diag.norm_drift_max =
                    std::max(result.diag.norm_drift_max, std::abs(pn + qn - norm0));
                detail::append_snapshot(result.record, t, q_density(state),
                                        density(state.upper), pn, qn,
                                        leakage_from_p_norm(pn));
            }
            break;
        }
        case SolverKind::Tcl: {
            TclStepper stepper(std::move(u0), 0.0, tg.resolved_dt, potential, par,
                               !cfg.allow_coarse_dt);
            result.diag.norm_drift_max = std::numeric_limits<double>::quiet_NaN();
            bool first = true;
            for (double t : tg.times) {
                if (!first)
                    for (int s = 0; s < tg.steps_per_interval; ++s) {
                        stepper.step();
                        ++result.diag.n_steps;
                    }
                first = false;
                const UpperField& u = stepper.state();
                const UpperField q = reconstruct_q(u, stepper.time(), potential, par);
                track(t, std::max(boundary_amplitude(u), boundary_amplitude(q)));
                const double pn = norm_sq(u), qn = norm_sq(q);
                detail::append_snapshot(result.record, t, density(q), density(u), pn, qn,
                                        leakage_from_p_norm(pn));
            }
            break;
        }
        case SolverKind::Pauli: {
            const double norm0 = norm_sq(u0);
            PauliStepper stepper(std::move(u0), tg.resolved_dt, potential, par);
            const std::vector<double> zeros(static_cast<std::size_t>(grid.n()), 0.0);
            bool first = true;
            for (double t : tg.times) {
                if (!first)
                    for (int s = 0; s < tg.steps_per_interval; ++s) {
                        stepper.step();
                        ++result.diag.n_steps;
                    }
                first = false;
                const UpperField& u = stepper.state();
                track(t, boundary_amplitude(u));
                const double pn = norm_sq(u);
                result.diag.norm_drift_max =
                    std::max(result.diag.norm_drift_max, std::abs(pn - norm0));
                // No lower component exists in this model: leakage is
                // identically zero, not 1 - p_norm.
                detail::append_snapshot(result.record, t, zeros, density(u), pn, 0.0, 0.0);
            }
            break;
        }
        case SolverKind::SmallMass: {
            const double norm0 = norm_sq(u0);
            SpectralOps ops(grid);
            const std::vector<cplx> c0 = ops.fwd_raw(u0.values);
            std::vector<cplx> c(grid.n());
            const std::vector<double> zeros(static_cast<std::size_t>(grid.n()), 0.0);
            for (double t : tg.times) {
                for (int i = 0; i < grid.n(); ++i)
                    c[i] = c0[i] * smallmass_phase(grid.k(i), t, par);
                UpperField u{grid, ops.inv_raw(c)};
                track(t, boundary_amplitude(u));
                const double pn = norm_sq(u);
                result.diag.norm_drift_max =
                    std::max(result.diag.norm_drift_max, std::abs(pn - norm0));
                // Leading order in mass: the state stays in the P space.
                detail::append_snapshot(result.record, t, zeros, density(u), pn, 0.0, 0.0);
            }
            break;
        }
    }
    return result;
}

}  // namespace diracpq
