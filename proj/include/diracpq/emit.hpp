#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include "diracpq/io.hpp"
#include "diracpq/run.hpp"
#include "diracpq/sha256.hpp"
#include "diracpq/version.hpp"

namespace diracpq {

struct FileEntry {
    std::string name;
    std::string sha256;
    std::uint64_t bytes = 0;
    double pgm_scale = -1.0;  // < 0 when not a heatmap
};

namespace detail {

inline FileEntry write_output(const std::filesystem::path& dir, const std::string& name,
                              const std::string& content, double pgm_scale = -1.0) {
    atomic_write_file(dir / name, content);
    return {name, sha256_hex(content), content.size(), pgm_scale};
}

inline std::string density_csv(const DensityRecord& rec) {
    CsvBuilder csv({"t", "x", "q_density", "p_density"});
    const std::size_t n_x = static_cast<std::size_t>(rec.grid.n());
    for (std::size_t it = 0; it < rec.n_times(); ++it)
        for (std::size_t ix = 0; ix < n_x; ++ix)
            csv.row({rec.times[it], rec.grid.x(static_cast<int>(ix)),
                     rec.q_density[it * n_x + ix], rec.p_density[it * n_x + ix]});
    return csv.str();
}

inline std::string norms_csv(const DensityRecord& rec) {
    CsvBuilder csv({"t", "p_norm", "q_norm", "leakage"});
    for (std::size_t it = 0; it < rec.n_times(); ++it)
        csv.row({rec.times[it], rec.p_norm[it], rec.q_norm[it], rec.leakage[it]});
    return csv.str();
}

// Heatmap with time running down the rows, position across the columns.
inline std::string density_pgm(const DensityRecord& rec, const std::vector<double>& values,
                               double scale) {
    return pgm_image(values, rec.grid.n(), static_cast<int>(rec.n_times()), scale);
}

inline std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json diagnostics_json(const RunDiagnostics& diag) {
    nlohmann::json j{{"boundary_tail_max", diag.boundary_tail_max},
                     {"resolved_dt", diag.resolved_dt},
                     {"n_steps", diag.n_steps},
                     {"warnings", diag.warnings}};
    if (std::isnan(diag.norm_drift_max))
        j["norm_drift_max"] = nullptr;  // norm not conserved by this solver
    else
        j["norm_drift_max"] = diag.norm_drift_max;
    return j;
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& name,
                           nlohmann::json body, const std::vector<FileEntry>& files,
                           double wall_seconds) {
    nlohmann::json entries = nlohmann::json::array();
    for (const FileEntry& f : files) {
        nlohmann::json e{{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}};
        if (f.pgm_scale >= 0.0) e["pgm_scale"] = f.pgm_scale;
        entries.push_back(e);
    }
    body["tool"] = {{"name", "dirac1d"}, {"version", version}};
    body["created_utc"] = utc_now();
    body["wall_seconds"] = wall_seconds;
    body["outputs"] = entries;
    atomic_write_file(dir / name, body.dump(2) + "\n");
}

class WallClock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

// simulate: density + norms CSV (and optional heatmaps), plus a manifest
// listing every emitted file with its checksum.
inline std::vector<FileEntry> emit_simulation(const RunConfig& cfg, const RunResult& result,
                                              double wall_seconds) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    std::vector<FileEntry> files;
    if (cfg.write_csv) {
        files.push_back(detail::write_output(dir, "density.csv", detail::density_csv(result.record)));
        files.push_back(detail::write_output(dir, "norms.csv", detail::norms_csv(result.record)));
    }
    if (cfg.write_pgm) {
        const auto& rec = result.record;
        double q_scale = 0.0, p_scale = 0.0;
        for (double v : rec.q_density) q_scale = std::max(q_scale, v);
        for (double v : rec.p_density) p_scale = std::max(p_scale, v);
        files.push_back(detail::write_output(dir, "q_density.pgm",
                                             detail::density_pgm(rec, rec.q_density, q_scale),
                                             q_scale));
        files.push_back(detail::write_output(dir, "p_density.pgm",
                                             detail::density_pgm(rec, rec.p_density, p_scale),
                                             p_scale));
    }
    nlohmann::json body{{"config", config_json(cfg)},
                        {"diagnostics", detail::diagnostics_json(result.diag)}};
    detail::write_manifest(dir, "manifest.json", std::move(body), files, wall_seconds);
    return files;
}

struct ComparisonOutput {
    CompareMetrics metrics;
    std::vector<FileEntry> files;
};

namespace detail {

inline std::string metrics_csv(const CompareMetrics& m) {
    std::string out = "metric,value\n";
    out += "l2_discrepancy," + format_double(m.l2_normalized) + "\n";
    out += "max_abs_diff," + format_double(m.max_abs) + "\n";
    return out;
}

inline std::string series_csv(const DensityRecord& rec, const CompareMetrics& m) {
    CsvBuilder csv({"t", "discrepancy"});
    for (std::size_t it = 0; it < rec.n_times(); ++it) csv.row({rec.times[it], m.per_time[it]});
    return csv.str();
}

// Shared pair emission used by both `figure` and `compare`. Heatmaps use
// one common scale so the pair stays visually comparable.
inline ComparisonOutput emit_pair(const std::filesystem::path& dir, const std::string& prefix,
                                  const std::string& label_a, const std::string& label_b,
                                  const RunConfig& cfg_a, const RunConfig& cfg_b,
                                  const RunResult& a, const RunResult& b, bool write_pgm,
                                  double wall_seconds) {
    std::filesystem::create_directories(dir);
    ComparisonOutput out;
    out.metrics = compare_densities(a.record, b.record);

    out.files.push_back(
        write_output(dir, prefix + "_" + label_a + "_density.csv", density_csv(a.record)));
    out.files.push_back(
        write_output(dir, prefix + "_" + label_b + "_density.csv", density_csv(b.record)));
    out.files.push_back(
        write_output(dir, prefix + "_" + label_a + "_norms.csv", norms_csv(a.record)));
    out.files.push_back(
        write_output(dir, prefix + "_" + label_b + "_norms.csv", norms_csv(b.record)));
    if (write_pgm) {
        double scale = 0.0;
        for (double v : a.record.q_density) scale = std::max(scale, v);
        for (double v : b.record.q_density) scale = std::max(scale, v);
        out.files.push_back(write_output(dir, prefix + "_" + label_a + "_qdensity.pgm",
                                         density_pgm(a.record, a.record.q_density, scale),
                                         scale));
        out.files.push_back(write_output(dir, prefix + "_" + label_b + "_qdensity.pgm",
                                         density_pgm(b.record, b.record.q_density, scale),
                                         scale));
    }
    out.files.push_back(write_output(dir, prefix + "_metrics.csv", metrics_csv(out.metrics)));
    out.files.push_back(
        write_output(dir, prefix + "_compare_series.csv", series_csv(a.record, out.metrics)));

    nlohmann::json body{
        {"config_a", config_json(cfg_a)},
        {"config_b", config_json(cfg_b)},
        {"diagnostics_a", diagnostics_json(a.diag)},
        {"diagnostics_b", diagnostics_json(b.diag)},
        {"metrics",
         {{"l2_discrepancy", out.metrics.l2_normalized}, {"max_abs_diff", out.metrics.max_abs}}}};
    write_manifest(dir, prefix + "_manifest.json", std::move(body), out.files, wall_seconds);
    return out;
}

}  // namespace detail

// figure fig1|fig2: runs the full-Dirac / TCL preset pair and emits the
// heatmap data (CSV + PGM), the norms, the discrepancy metrics and the
// manifest under `dir` with a fig1_/fig2_ file prefix.
inline ComparisonOutput emit_figure(int which, const std::filesystem::path& dir) {
    detail::WallClock clock;
    const SolverKind dirac_side =
        (which == 1) ? SolverKind::DiracExact : SolverKind::DiracSplit;
    RunConfig cfg_a = figure_preset(which, dirac_side);
    RunConfig cfg_b = figure_preset(which, SolverKind::Tcl);
    cfg_a.out_dir = dir.string();
    cfg_b.out_dir = dir.string();
    const RunResult a = run_simulation(cfg_a);
    const RunResult b = run_simulation(cfg_b);
    const std::string prefix = "fig" + std::to_string(which);
    return detail::emit_pair(dir, prefix, "dirac", "tcl", cfg_a, cfg_b, a, b, true,
                             clock.seconds());
}

// compare: two arbitrary configs on matching grid/time windows.
inline ComparisonOutput emit_compare(const RunConfig& cfg_a, const RunConfig& cfg_b,
                                     const std::filesystem::path& dir) {
    detail::WallClock clock;
    const RunResult a = run_simulation(cfg_a);
    const RunResult b = run_simulation(cfg_b);
    return detail::emit_pair(dir, "compare", "a", "b", cfg_a, cfg_b, a, b,
                             cfg_a.write_pgm || cfg_b.write_pgm, clock.seconds());
}

}  // namespace diracpq
