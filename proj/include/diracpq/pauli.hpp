#pragma once

#include <cmath>
#include <vector>

#include "diracpq/physics.hpp"

namespace diracpq {

// Non-relativistic baseline: H = e phi(x) + p^2 / 2m, one component, no
// lower spinor. Same Strang splitting and spectral kinetic step as the
// Dirac solver so that numerical differences isolate the physics.
class PauliStepper {
public:
    PauliStepper(UpperField initial, double dt, const PotentialSpec& potential,
                 const PhysicsParams& par)
        : ops_(initial.grid), state_(std::move(initial)), dt_(dt) {
        validate(par);
        if (!(par.m > 0.0)) throw std::invalid_argument("pauli: mass must be positive");
        if (!(dt > 0.0)) throw std::invalid_argument("pauli: dt must be positive");
        const GridSpec& grid = state_.grid;
        const PotentialSpec::Table table = potential.sample(grid);
        has_potential_ = !table.zero;
        half_phase_.resize(grid.n());
        kinetic_phase_.resize(grid.n());
        for (int i = 0; i < grid.n(); ++i) {
            half_phase_[i] = std::polar(1.0, -0.5 * par.e * table.phi[i] * dt);
            const double k = grid.k(i);
            kinetic_phase_[i] = std::polar(1.0, -k * k * dt / (2.0 * par.m));
        }
    }

    void step() {
        auto& v = state_.values;
        const int n = state_.grid.n();
        if (has_potential_)
            for (int i = 0; i < n; ++i) v[i] *= half_phase_[i];
        std::vector<cplx> c = ops_.fwd_raw(v);
        for (int i = 0; i < n; ++i) c[i] *= kinetic_phase_[i];
        v = ops_.inv_raw(c);
        if (has_potential_)
            for (int i = 0; i < n; ++i) v[i] *= half_phase_[i];
        t_ += dt_;
    }

    const UpperField& state() const { return state_; }
    double time() const { return t_; }

private:
    SpectralOps ops_;
    UpperField state_;
    double dt_;
    double t_ = 0.0;
    bool has_potential_;
    std::vector<cplx> half_phase_, kinetic_phase_;
};

inline UpperField step_pauli(const UpperField& u, double dt,
                             const PotentialSpec& potential, const PhysicsParams& par) {
    PauliStepper stepper(u, dt, potential, par);
    stepper.step();
    return stepper.state();
}

}  // namespace diracpq
