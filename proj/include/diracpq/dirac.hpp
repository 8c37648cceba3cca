#pragma once

#include <array>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diracpq/physics.hpp"

namespace diracpq {

// 2x2 complex matrix, flat layout [[m00, m01], [m10, m11]].
struct Mat2c {
    cplx m00, m01, m10, m11;

    std::array<cplx, 2> apply(cplx up, cplx lo) const {
        return {m00 * up + m01 * lo, m10 * up + m11 * lo};
    }
    cplx det() const { return m00 * m11 - m01 * m10; }
};

// Closed-form momentum-mode propagator exp(-i t (c p sigma_x + m c^2 sigma_z))
//   = cos(lambda t) I - i sin(lambda t) (c p sigma_x + m c^2 sigma_z)/lambda.
// lambda = 0 (m = p = 0) degenerates to the identity via sin(lambda t)/lambda -> t.
inline Mat2c free_mode_propagator(double p, double t, const PhysicsParams& par) {
    const double lam = lambda_of(p, par);
    const double cosv = std::cos(lam * t);
    const double s = (lam > 0.0) ? std::sin(lam * t) / lam : t;
    const cplx diag(0.0, -s * rest_energy(par));
    const cplx off(0.0, -s * par.c * p);
    return {cosv + diag, off, off, cosv - diag};
}

// Exact free evolution: every momentum mode rotated by its closed-form 2x2.
inline SpinorField propagate_exact_free(const SpinorField& state, double t,
                                        const PhysicsParams& par) {
    validate(par);
    const GridSpec& grid = state.upper.grid;
    SpectralOps ops(grid);
    std::vector<cplx> up = ops.fwd_raw(state.upper.values);
    std::vector<cplx> lo = ops.fwd_raw(state.lower.values);
    for (int i = 0; i < grid.n(); ++i) {
        const Mat2c u = free_mode_propagator(grid.k(i), t, par);
        const auto out = u.apply(up[i], lo[i]);
        up[i] = out[0];
        lo[i] = out[1];
    }
    return {{grid, ops.inv_raw(up)}, {grid, ops.inv_raw(lo)}};
}

// Symmetric splitting of H = e phi(x) + (c p sigma_x + m c^2 sigma_z):
// half potential phase, closed-form kinetic mode rotation, half potential
// phase. Second order in dt; the kinetic sub-step is exact per mode.
class StrangStepper {
public:
    StrangStepper(SpinorField initial, double dt, const PotentialSpec& potential,
                  const PhysicsParams& par)
        : ops_(initial.upper.grid), state_(std::move(initial)), dt_(dt) {
        validate(par);
        if (!(dt > 0.0)) throw std::invalid_argument("strang: dt must be positive");
        const GridSpec& grid = state_.upper.grid;
        const PotentialSpec::Table table = potential.sample(grid);
        has_potential_ = !table.zero;

        double max_ephi = 0.0;
        half_phase_.resize(grid.n());
        for (int i = 0; i < grid.n(); ++i) {
            const double ephi = par.e * table.phi[i];
            max_ephi = std::max(max_ephi, std::abs(ephi));
            half_phase_[i] = std::polar(1.0, -0.5 * ephi * dt);
        }
        if (dt * max_ephi > 1.0)
            std::cerr << "warning: strang: dt * max|e phi| = " << dt * max_ephi
                      << " > 1, accuracy degraded\n";

        kinetic_.resize(grid.n());
        for (int i = 0; i < grid.n(); ++i)
            kinetic_[i] = free_mode_propagator(grid.k(i), dt, par);
    }

    void step() {
        auto& up = state_.upper.values;
        auto& lo = state_.lower.values;
        const int n = state_.upper.grid.n();
        if (has_potential_) {
            for (int i = 0; i < n; ++i) {
                up[i] *= half_phase_[i];
                lo[i] *= half_phase_[i];
            }
        }
        std::vector<cplx> cu = ops_.fwd_raw(up);
        std::vector<cplx> cl = ops_.fwd_raw(lo);
        for (int i = 0; i < n; ++i) {
            const auto out = kinetic_[i].apply(cu[i], cl[i]);
            cu[i] = out[0];
            cl[i] = out[1];
        }
        up = ops_.inv_raw(cu);
        lo = ops_.inv_raw(cl);
        if (has_potential_) {
            for (int i = 0; i < n; ++i) {
                up[i] *= half_phase_[i];
                lo[i] *= half_phase_[i];
            }
        }
        t_ += dt_;
    }

    const SpinorField& state() const { return state_; }
    double time() const { return t_; }

private:
    SpectralOps ops_;
    SpinorField state_;
    double dt_;
    double t_ = 0.0;
    bool has_potential_;
    std::vector<cplx> half_phase_;
    std::vector<Mat2c> kinetic_;
};

inline SpinorField propagate_strang(const SpinorField& state, double dt, int n_steps,
                                    const PotentialSpec& potential,
                                    const PhysicsParams& par) {
    StrangStepper stepper(state, dt, potential, par);
    for (int s = 0; s < n_steps; ++s) stepper.step();
    return stepper.state();
}

// Dense spectral momentum operator, P_il = (1/n) sum_m k_m exp(i k_m (x_i - x_l)).
// Represents exactly the same operator as the per-mode spectral multiply;
// assembled Hermitian by construction (g(-d) = conj(g(d))).
inline Eigen::MatrixXcd dense_momentum_matrix(const GridSpec& grid) {
    const int n = grid.n();
    std::vector<cplx> g(n);
    for (int d = 0; d < n; ++d) {
        cplx acc = 0.0;
        for (int m = 0; m < n; ++m) acc += grid.k(m) * std::polar(1.0, grid.k(m) * d * grid.dx());
        g[d] = acc / static_cast<double>(n);
    }
    Eigen::MatrixXcd P(n, n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            const int d = i - l;
            P(i, l) = (d >= 0) ? g[d] : std::conj(g[-d]);
        }
    return P;
}

// Full 2n x 2n Hamiltonian in (upper nodes, lower nodes) ordering:
//   [ m c^2 I + e phi      c P           ]
//   [ c P                 -m c^2 I + e phi ].
inline Eigen::MatrixXcd dense_hamiltonian(const GridSpec& grid,
                                          const PotentialSpec& potential,
                                          const PhysicsParams& par) {
    validate(par);
    const int n = grid.n();
    const PotentialSpec::Table table = potential.sample(grid);
    const Eigen::MatrixXcd P = dense_momentum_matrix(grid);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    H.topRightCorner(n, n) = par.c * P;
    H.bottomLeftCorner(n, n) = par.c * P;
    const double mc2 = rest_energy(par);
    for (int i = 0; i < n; ++i) {
        const double ephi = par.e * table.phi[i];
        H(i, i) = mc2 + ephi;
        H(n + i, n + i) = -mc2 + ephi;
    }
    return H;
}

// Brute-force reference: apply exp(-i H t) through a Hermitian
// eigendecomposition of the assembled dense Hamiltonian.
inline SpinorField dense_oracle(const SpinorField& state, double t,
                                const PotentialSpec& potential,
                                const PhysicsParams& par) {
    const GridSpec& grid = state.upper.grid;
    const int n = grid.n();
    if (n > 256) throw guard_error("dense oracle: grid larger than 256 points");

    const Eigen::MatrixXcd H = dense_hamiltonian(grid, potential, par);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw guard_error("dense oracle: eigendecomposition failed");

    Eigen::VectorXcd psi(2 * n);
    for (int i = 0; i < n; ++i) {
        psi(i) = state.upper.values[i];
        psi(n + i) = state.lower.values[i];
    }
    Eigen::VectorXcd modal = es.eigenvectors().adjoint() * psi;
    for (int i = 0; i < 2 * n; ++i)
        modal(i) *= std::polar(1.0, -es.eigenvalues()(i) * t);
    psi = es.eigenvectors() * modal;

    SpinorField out{zero_field(grid), zero_field(grid)};
    for (int i = 0; i < n; ++i) {
        out.upper.values[i] = psi(i);
        out.lower.values[i] = psi(n + i);
    }
    return out;
}

}  // namespace diracpq
