#pragma once

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "diracpq/physics.hpp"

namespace diracpq {

// Time-local generator of the leading-order two-component reduction, in
// the frame with the rest-energy phase exp(-i m c^2 t) rotated out:
//
//   du/dt = -i [ e phi
//              + (p^2 / 2m) f_kin(t)
//              + (e / 4 m^2 c^2) (phi'' + i phi' p) f_corr(t) ] u,
//
//   f_kin(t)  = 1 - exp(2 i m c^2 t)
//   f_corr(t) = 1 - exp(2 i m c^2 t) (1 - 2 i m c^2 t).
//
// Both modulation factors vanish identically at t = 0; their long-time
// averages are 1, which recovers the static (Pauli-plus-correction)
// generator. The generator is non-Hermitian: the upper-component norm is
// not conserved, which is exactly the leakage the reduction tracks.
struct TclModulations {
    cplx kinetic;
    cplx correction;
};

inline TclModulations tcl_modulations(double t, const PhysicsParams& par) {
    const double w = 2.0 * rest_energy(par) * t;
    const cplx osc = std::polar(1.0, w);
    return {1.0 - osc, 1.0 - osc * (1.0 - cplx(0.0, w))};
}

namespace detail {

// Static operator pieces of the generator: T_phi = e phi u,
// T_kin = p^2 u / 2m, T_corr = (e / 4 m^2 c^2)(phi'' u + i phi' (p u)).
struct TclTerms {
    std::vector<cplx> potential, kinetic, correction;
};

inline TclTerms tcl_static_terms(const SpectralOps& ops, const std::vector<cplx>& u,
                                 const PotentialSpec::Table& table,
                                 const PhysicsParams& par) {
    const int n = ops.grid().n();
    TclTerms terms;
    terms.kinetic.resize(n);

    if (table.zero) {
        // Only p^2 is needed; the potential and correction terms vanish.
        std::vector<cplx> c = ops.fwd_raw(u);
        for (int i = 0; i < n; ++i) c[i] *= ops.k()[i] * ops.k()[i];
        std::vector<cplx> p2u = ops.inv_raw(c);
        for (int i = 0; i < n; ++i) terms.kinetic[i] = p2u[i] / (2.0 * par.m);
        terms.potential.assign(n, cplx(0.0));
        terms.correction.assign(n, cplx(0.0));
        return terms;
    }

    UpperField uf{ops.grid(), u};
    UpperField pu = zero_field(ops.grid()), p2u = zero_field(ops.grid());
    ops.derivatives(uf, pu, p2u);
    terms.potential.resize(n);
    terms.correction.resize(n);
    const double coef = par.e / (4.0 * par.m * par.m * par.c * par.c);
    for (int i = 0; i < n; ++i) {
        terms.potential[i] = par.e * table.phi[i] * u[i];
        terms.kinetic[i] = p2u.values[i] / (2.0 * par.m);
        terms.correction[i] =
            coef * (table.d2phi[i] * u[i] + imag_unit * table.dphi[i] * pu.values[i]);
    }
    return terms;
}

inline void combine_tcl_terms(const TclTerms& terms, const TclModulations& mod,
                              std::vector<cplx>& out) {
    const std::size_t n = terms.potential.size();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = -imag_unit * (terms.potential[i] + mod.kinetic * terms.kinetic[i] +
                               mod.correction * terms.correction[i]);
}

}  // namespace detail

// du/dt at time t. Requires m > 0 (weak-relativistic reduction).
inline UpperField apply_tcl_generator(const UpperField& u, double t,
                                      const PotentialSpec& potential,
                                      const PhysicsParams& par) {
    validate(par);
    if (!(par.m > 0.0)) throw std::invalid_argument("tcl: mass must be positive");
    SpectralOps ops(u.grid);
    const PotentialSpec::Table table = potential.sample(u.grid);
    const detail::TclTerms terms = detail::tcl_static_terms(ops, u.values, table, par);
    UpperField out = zero_field(u.grid);
    detail::combine_tcl_terms(terms, tcl_modulations(t, par), out.values);
    return out;
}

// Classical RK4 on the time-dependent generator. dt must resolve the
// exp(2 i m c^2 t) oscillation: dt * 2 m c^2 <= 0.1.
class TclStepper {
public:
    TclStepper(UpperField initial, double t0, double dt, const PotentialSpec& potential,
               const PhysicsParams& par, bool refuse_coarse_dt = true)
        : ops_(initial.grid),
          table_(potential.sample(initial.grid)),
          par_(par),
          state_(std::move(initial)),
          t_(t0),
          dt_(dt) {
        validate(par);
        if (!(par.m > 0.0)) throw std::invalid_argument("tcl: mass must be positive");
        if (!(dt > 0.0)) throw std::invalid_argument("tcl: dt must be positive");
        const double osc = dt * 2.0 * rest_energy(par);
        if (osc > 0.1) {
            if (refuse_coarse_dt)
                throw std::invalid_argument(
                    "tcl: dt * 2 m c^2 = " + std::to_string(osc) +
                    " > 0.1 does not resolve the generator oscillation");
            std::cerr << "warning: tcl: dt * 2 m c^2 = " << osc
                      << " > 0.1, oscillation under-resolved\n";
        }
    }

    void step() {
        const std::size_t n = state_.values.size();
        generator(state_.values, t_, k1_);
        stage_.resize(n);
        for (std::size_t i = 0; i < n; ++i) stage_[i] = state_.values[i] + 0.5 * dt_ * k1_[i];
        generator(stage_, t_ + 0.5 * dt_, k2_);
        for (std::size_t i = 0; i < n; ++i) stage_[i] = state_.values[i] + 0.5 * dt_ * k2_[i];
        generator(stage_, t_ + 0.5 * dt_, k3_);
        for (std::size_t i = 0; i < n; ++i) stage_[i] = state_.values[i] + dt_ * k3_[i];
        generator(stage_, t_ + dt_, k4_);
        for (std::size_t i = 0; i < n; ++i)
            state_.values[i] += (dt_ / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        t_ += dt_;
    }

    const UpperField& state() const { return state_; }
    double time() const { return t_; }

    void generator(const std::vector<cplx>& u, double t, std::vector<cplx>& out) const {
        const detail::TclTerms terms = detail::tcl_static_terms(ops_, u, table_, par_);
        detail::combine_tcl_terms(terms, tcl_modulations(t, par_), out);
    }

private:
    SpectralOps ops_;
    PotentialSpec::Table table_;
    PhysicsParams par_;
    UpperField state_;
    double t_, dt_;
    std::vector<cplx> k1_, k2_, k3_, k4_, stage_;
};

// One RK4 step from time t.
inline UpperField step_tcl(const UpperField& u, double t, double dt,
                           const PotentialSpec& potential, const PhysicsParams& par) {
    TclStepper stepper(u, t, dt, potential, par);
    stepper.step();
    return stepper.state();
}

// Analytic free-field solution: every momentum coefficient is multiplied by
//   exp[ (p^2 / 4 m^2 c^2) (exp(2 i m c^2 t) - 2 i m c^2 t - 1) ].
// The factor's modulus is exp[-(p^2 / 2 m^2 c^2) sin^2(m c^2 t)] <= 1 and
// returns to 1 at every multiple of t = pi / (m c^2).
inline std::vector<cplx> tcl_free_solution(const GridSpec& grid,
                                           const std::vector<cplx>& coeffs0, double t,
                                           const PhysicsParams& par) {
    validate(par);
    if (!(par.m > 0.0)) throw std::invalid_argument("tcl: mass must be positive");
    if (static_cast<int>(coeffs0.size()) != grid.n())
        throw std::invalid_argument("tcl: coefficient length mismatch");
    const double w = 2.0 * rest_energy(par) * t;
    const cplx time_part = std::polar(1.0, w) - cplx(0.0, w) - 1.0;
    const double denom = 4.0 * par.m * par.m * par.c * par.c;
    std::vector<cplx> out(coeffs0.size());
    for (int i = 0; i < grid.n(); ++i) {
        const double k = grid.k(i);
        out[i] = coeffs0[i] * std::exp((k * k / denom) * time_part);
    }
    return out;
}

// Lower component reconstructed from the evolved upper field:
//   Q(t) = (-i / 4 m^2 c^3) [ (2 i m c^2 p - e phi')(1 - E)
//                             - 2 i m c^2 t E e phi' ] u(t),   E = exp(2 i m c^2 t).
// Identically zero at t = 0. Densities built from it are insensitive to the
// global-phase convention of u.
inline UpperField reconstruct_q(const UpperField& u, double t,
                                const PotentialSpec& potential, const PhysicsParams& par) {
    validate(par);
    if (!(par.m > 0.0)) throw std::invalid_argument("tcl: mass must be positive");
    SpectralOps ops(u.grid);
    const double mc2 = rest_energy(par);
    const cplx E = std::polar(1.0, 2.0 * mc2 * t);
    const cplx one_minus_E = 1.0 - E;
    const cplx front = -imag_unit / (4.0 * par.m * par.m * par.c * par.c * par.c);
    const cplx p_coef = front * cplx(0.0, 2.0 * mc2) * one_minus_E;

    UpperField pu = ops.apply_p(u);
    UpperField out = zero_field(u.grid);
    if (potential.is_zero()) {
        for (int i = 0; i < u.grid.n(); ++i) out.values[i] = p_coef * pu.values[i];
        return out;
    }
    const PotentialSpec::Table table = potential.sample(u.grid);
    const cplx grad_coef = front * (one_minus_E + cplx(0.0, 2.0 * mc2 * t) * E);
    for (int i = 0; i < u.grid.n(); ++i)
        out.values[i] =
            p_coef * pu.values[i] - grad_coef * par.e * table.dphi[i] * u.values[i];
    return out;
}

// Second-order kernel by direct s-quadrature with the exact
// interaction-picture conjugation
//   H_I(tau)_PQ = c exp(2 i m c^2 tau) [e^{i e phi tau} p e^{-i e phi tau}],
// mapped back to the original frame (rest-energy phase removed):
//   G(t) u = -i e phi u - e^{-i e phi t} K(t) [e^{+i e phi t} u],
//   K(t)   = c^2 [e^{i e phi t} p e^{-i e phi t}]
//            * Int_0^t ds e^{2 i m c^2 (t-s)} [e^{i e phi s} p e^{-i e phi s}].
// Composite Simpson in s with a fixed summation order. Ground truth for
// apply_tcl_generator, independent of the commutator algebra behind it.
inline UpperField kernel_quadrature_oracle(const UpperField& u, double t,
                                           const PotentialSpec& potential,
                                           const PhysicsParams& par, int n_quad) {
    validate(par);
    if (!(par.m > 0.0)) throw std::invalid_argument("tcl: mass must be positive");
    if (u.grid.n() > 512) throw guard_error("kernel oracle: grid larger than 512 points");
    const double mc2 = rest_energy(par);
    if (t < 0.0) throw std::invalid_argument("kernel oracle: t must be >= 0");
    const int required = static_cast<int>(std::ceil(200.0 * mc2 * t));
    if (n_quad < required)
        throw std::invalid_argument("kernel oracle: n_quad must be >= 200 per unit of m c^2 t");

    SpectralOps ops(u.grid);
    const PotentialSpec::Table table = potential.sample(u.grid);
    const int n = u.grid.n();
    std::vector<double> ephi(n);
    for (int i = 0; i < n; ++i) ephi[i] = par.e * table.phi[i];

    UpperField out = zero_field(u.grid);
    for (int i = 0; i < n; ++i)
        out.values[i] = -imag_unit * ephi[i] * u.values[i];
    if (t == 0.0) return out;  // empty integral: bare potential term only

    // w = e^{+i e phi t} u, the kernel input in the rotated frame.
    std::vector<cplx> w(u.values);
    for (int i = 0; i < n; ++i) w[i] *= std::polar(1.0, ephi[i] * t);

    int panels = n_quad;
    if (panels % 2 != 0) ++panels;  // Simpson needs an even interval count
    const double h = t / panels;

    std::vector<cplx> acc(n, cplx(0.0));
    std::vector<cplx> tmp(n);
    UpperField scratch = zero_field(u.grid);
    for (int j = 0; j <= panels; ++j) {
        const double s = h * j;
        const double simpson = (j == 0 || j == panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        const cplx weight = (h / 3.0) * simpson * std::polar(1.0, 2.0 * mc2 * (t - s));
        for (int i = 0; i < n; ++i)
            scratch.values[i] = std::polar(1.0, -ephi[i] * s) * w[i];
        UpperField ps = ops.apply_p(scratch);
        for (int i = 0; i < n; ++i)
            acc[i] += weight * std::polar(1.0, ephi[i] * s) * ps.values[i];
    }

    // Left factor of the kernel is e^{i e phi t} p e^{-i e phi t}; its outer
    // phase cancels against the frame map e^{-i e phi t}, leaving c^2 p
    // applied to the de-phased inner integral.
    for (int i = 0; i < n; ++i) scratch.values[i] = std::polar(1.0, -ephi[i] * t) * acc[i];
    UpperField pk = ops.apply_p(scratch);
    const double c2 = par.c * par.c;
    for (int i = 0; i < n; ++i) out.values[i] -= c2 * pk.values[i];
    return out;
}

}  // namespace diracpq
