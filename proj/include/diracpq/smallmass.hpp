#pragma once

#include <cmath>
#include <vector>

#include "diracpq/spectral.hpp"
#include "diracpq/physics.hpp"

namespace diracpq {

// sin(x)/x with sinc(0) = 1; series branch below |x| = 1e-4.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// Leading-order-in-mass phase for a free momentum mode,
//   exp(-i m c^2 t [1 + sinc(2 c p t)]),
// whose logarithmic derivative is -2 i m c^2 cos^2(c p t). Unit modulus:
// the small-mass evolution is unitary on the upper component.
inline cplx smallmass_phase(double p, double t, const PhysicsParams& par) {
    return std::polar(1.0, -rest_energy(par) * t * (1.0 + sinc(2.0 * par.c * p * t)));
}

// Per-mode phase multiplication; free field only. Norm is preserved
// exactly up to roundoff.
inline UpperField propagate_smallmass(const UpperField& u, double t,
                                      const PhysicsParams& par) {
    validate(par);
    SpectralOps ops(u.grid);
    std::vector<cplx> c = ops.fwd_raw(u.values);
    for (int i = 0; i < u.grid.n(); ++i) c[i] *= smallmass_phase(u.grid.k(i), t, par);
    return {u.grid, ops.inv_raw(c)};
}

// Frame co-rotating with the massless free Hamiltonian c p sigma_x:
// psi = U0^dagger(t) Psi with U0(t) = exp(-i c k t sigma_x) per mode, so
// the map applies cos(c k t) I + i sin(c k t) sigma_x. Free field only.
inline SpinorField to_interaction_picture(const SpinorField& state, double t,
                                          const PhysicsParams& par) {
    validate(par);
    const GridSpec& grid = state.upper.grid;
    SpectralOps ops(grid);
    std::vector<cplx> up = ops.fwd_raw(state.upper.values);
    std::vector<cplx> lo = ops.fwd_raw(state.lower.values);
    for (int i = 0; i < grid.n(); ++i) {
        const double theta = par.c * grid.k(i) * t;
        const double cv = std::cos(theta);
        const cplx sv(0.0, std::sin(theta));
        const cplx u2 = cv * up[i] + sv * lo[i];
        const cplx l2 = sv * up[i] + cv * lo[i];
        up[i] = u2;
        lo[i] = l2;
    }
    return {{grid, ops.inv_raw(up)}, {grid, ops.inv_raw(lo)}};
}

inline SpinorField from_interaction_picture(const SpinorField& state, double t,
                                            const PhysicsParams& par) {
    return to_interaction_picture(state, -t, par);
}

// Exact upper-component amplitude of a mode started as [1, 0], expressed in
// the same interaction picture: [exp(+i c p t sigma_x) exp(-i H(p) t)]_{00}.
// Comparison target for smallmass_phase after the p-independent global
// phase exp(-i m c^2 t) is quotiented out.
inline cplx exact_interaction_upper_amplitude(double p, double t,
                                              const PhysicsParams& par) {
    const double mc2 = rest_energy(par);
    const double lam = lambda_of(p, par);
    const double theta = par.c * p * t;
    const double s = (lam > 0.0) ? std::sin(lam * t) / lam : t;
    // (cos(theta) I + i sin(theta) sigma_x)(cos(lam t) I - i s (c p sigma_x + m c^2 sigma_z))
    return std::cos(theta) * cplx(std::cos(lam * t), -s * mc2) +
           std::sin(theta) * s * par.c * p;
}

}  // namespace diracpq
