#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "diracpq/field.hpp"

namespace diracpq {

// Time-stamped density history of one run: |Q Psi(x,t)|^2 and |P Psi(x,t)|^2
// stored time-major ([it * n + ix]), plus the per-time norms and the leakage
// series (probability of finding the lower-spinor state).
struct DensityRecord {
    GridSpec grid{8, 0.0, 1.0};
    std::vector<double> times;
    std::vector<double> q_density;
    std::vector<double> p_density;
    std::vector<double> p_norm;
    std::vector<double> q_norm;
    std::vector<double> leakage;

    std::size_t n_times() const { return times.size(); }
    double q_at(std::size_t it, std::size_t ix) const {
        return q_density[it * static_cast<std::size_t>(grid.n()) + ix];
    }
};

// Pointwise |component|^2.
inline std::vector<double> density(const UpperField& f) {
    std::vector<double> d(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) d[i] = std::norm(f.values[i]);
    return d;
}

// Lower-spinor probability density of a full Dirac state.
inline std::vector<double> q_density(const SpinorField& state) {
    return density(state.lower);
}

inline double total_leakage(const DensityRecord& record, std::size_t time_index) {
    return record.leakage.at(time_index);
}

// Probability of the lower-spinor state from the upper-component norm,
// 1 - |P Psi|^2_total.
inline double leakage_from_p_norm(double p_norm) { return 1.0 - p_norm; }

// Solver-to-solver discrepancy of the lower-spinor density histories:
// normalized L2 over the full (x,t) window, maximum pointwise difference,
// and a per-time series (RMS normalized by the global reference norm to
// stay finite at times where the reference vanishes).
struct CompareMetrics {
    double l2_normalized = 0.0;
    double max_abs = 0.0;
    std::vector<double> per_time;
};

inline CompareMetrics compare_densities(const DensityRecord& a, const DensityRecord& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("compare: grids differ");
    if (a.times.size() != b.times.size())
        throw std::invalid_argument("compare: snapshot counts differ");
    for (std::size_t i = 0; i < a.times.size(); ++i)
        if (std::abs(a.times[i] - b.times[i]) > 1e-12)
            throw std::invalid_argument("compare: time stamps differ");

    CompareMetrics m;
    const std::size_t n_x = static_cast<std::size_t>(a.grid.n());
    double ref_sq = 0.0, diff_sq = 0.0;
    std::vector<double> per_time_sq(a.times.size(), 0.0);
    for (std::size_t it = 0; it < a.times.size(); ++it) {
        for (std::size_t ix = 0; ix < n_x; ++ix) {
            const double av = a.q_density[it * n_x + ix];
            const double bv = b.q_density[it * n_x + ix];
            const double d = av - bv;
            ref_sq += av * av;
            per_time_sq[it] += d * d;
            m.max_abs = std::max(m.max_abs, std::abs(d));
        }
        diff_sq += per_time_sq[it];
    }
    const double ref = std::sqrt(ref_sq);
    m.l2_normalized = (ref > 0.0) ? std::sqrt(diff_sq) / ref : std::sqrt(diff_sq);
    m.per_time.resize(a.times.size());
    for (std::size_t it = 0; it < a.times.size(); ++it)
        m.per_time[it] = (ref > 0.0) ? std::sqrt(per_time_sq[it]) / ref : std::sqrt(per_time_sq[it]);
    return m;
}

}  // namespace diracpq
