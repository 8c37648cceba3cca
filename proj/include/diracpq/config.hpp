#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "diracpq/packet.hpp"
#include "diracpq/physics.hpp"

namespace diracpq {

enum class SolverKind { DiracExact, DiracSplit, Tcl, Pauli, SmallMass };

inline std::string solver_name(SolverKind s) {
    switch (s) {
        case SolverKind::DiracExact: return "dirac-exact";
        case SolverKind::DiracSplit: return "dirac-split";
        case SolverKind::Tcl: return "tcl";
        case SolverKind::Pauli: return "pauli";
        case SolverKind::SmallMass: return "smallmass";
    }
    return "unknown";
}

inline SolverKind solver_from_name(const std::string& name) {
    if (name == "dirac-exact") return SolverKind::DiracExact;
    if (name == "dirac-split") return SolverKind::DiracSplit;
    if (name == "tcl") return SolverKind::Tcl;
    if (name == "pauli") return SolverKind::Pauli;
    if (name == "smallmass") return SolverKind::SmallMass;
    throw std::invalid_argument("config: unknown solver '" + name + "'");
}

// One fully resolved run: solver, grid, physics, potential, initial packet,
// time window and outputs. All numbers are dimensionless (hbar = 1).
struct RunConfig {
    SolverKind solver = SolverKind::DiracExact;

    int n_points = 1024;
    double x_min = -30.0, x_max = 30.0;

    PhysicsParams physics{};

    PotentialSpec::Kind pot_kind = PotentialSpec::Kind::Zero;
    double pot_slope = 0.0;
    std::string pot_file;               // tabulated variant: one value per line
    std::vector<double> pot_values;     // loaded table

    double x0 = 10.0, p0 = 0.0, x_center = 0.0;

    double t_final = 10.0;
    double dt = 1e-3;
    int n_snapshots = 200;

    std::string out_dir = "out";
    bool write_csv = true;
    bool write_pgm = false;

    // Runtime tail-clearance abort threshold (edge-node amplitude). The
    // stricter 1e-8 admission bound applies to the initial packet only.
    double boundary_guard = 1e-6;
    bool allow_coarse_dt = false;
};

inline GridSpec grid_of(const RunConfig& cfg) {
    return make_grid(cfg.n_points, cfg.x_min, cfg.x_max);
}

inline PotentialSpec potential_of(const RunConfig& cfg) {
    switch (cfg.pot_kind) {
        case PotentialSpec::Kind::Zero: return PotentialSpec::zero();
        case PotentialSpec::Kind::Linear: return PotentialSpec::linear(cfg.pot_slope);
        case PotentialSpec::Kind::Tabulated:
            return PotentialSpec::tabulated(grid_of(cfg), cfg.pot_values);
    }
    throw std::invalid_argument("config: bad potential kind");
}

inline bool is_stepping_solver(SolverKind s) {
    return s == SolverKind::DiracSplit || s == SolverKind::Tcl || s == SolverKind::Pauli;
}

// Snapshot times and, for stepping solvers, the step size adjusted so that
// an integer number of steps lands exactly on every snapshot.
struct TimeGrid {
    std::vector<double> times;
    int steps_per_interval = 0;
    double resolved_dt = 0.0;
};

inline TimeGrid resolve_time_grid(const RunConfig& cfg) {
    TimeGrid tg;
    if (cfg.t_final == 0.0 || cfg.n_snapshots == 1) {
        tg.times = {cfg.t_final};
        if (cfg.t_final == 0.0) {
            tg.resolved_dt = cfg.dt;
            return tg;
        }
    } else {
        tg.times.resize(cfg.n_snapshots);
        for (int i = 0; i < cfg.n_snapshots; ++i)
            tg.times[i] = cfg.t_final * i / (cfg.n_snapshots - 1);
    }
    if (is_stepping_solver(cfg.solver)) {
        const double interval =
            (tg.times.size() > 1) ? tg.times[1] - tg.times[0] : cfg.t_final;
        tg.steps_per_interval = std::max(1, static_cast<int>(std::lround(interval / cfg.dt)));
        tg.resolved_dt = interval / tg.steps_per_interval;
    } else {
        tg.resolved_dt = cfg.dt;
    }
    return tg;
}

inline std::string format_warn(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::vector<double> load_potential_table(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("config: cannot open potential table '" + file + "'");
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        try {
            values.push_back(std::stod(line));
        } catch (const std::exception&) {
            if (values.empty() && line.find_first_not_of(
                                      " \t\r") != std::string::npos) {
                continue;  // header line
            }
            throw std::invalid_argument("config: bad number in potential table: '" + line + "'");
        }
    }
    return values;
}

// Full cross-module validation; returns accuracy warnings (non-fatal).
inline std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> warnings;
    const GridSpec grid = grid_of(cfg);
    validate(cfg.physics);
    if ((cfg.solver == SolverKind::Tcl || cfg.solver == SolverKind::Pauli) &&
        !(cfg.physics.m > 0.0))
        throw std::invalid_argument("config: solver '" + solver_name(cfg.solver) +
                                    "' requires positive mass");
    if ((cfg.solver == SolverKind::DiracExact || cfg.solver == SolverKind::SmallMass) &&
        cfg.pot_kind != PotentialSpec::Kind::Zero)
        throw std::invalid_argument("config: solver '" + solver_name(cfg.solver) +
                                    "' supports only the zero potential");
    const PotentialSpec potential = potential_of(cfg);  // validates table length
    gaussian_packet(grid, cfg.x0, cfg.p0, cfg.x_center);  // validates tail clearance
    if (cfg.t_final < 0.0) throw std::invalid_argument("config: t_final must be >= 0");
    if (cfg.n_snapshots < 1) throw std::invalid_argument("config: n_snapshots must be >= 1");
    if (is_stepping_solver(cfg.solver) && !(cfg.dt > 0.0))
        throw std::invalid_argument("config: dt must be positive for stepping solvers");
    if (!(cfg.boundary_guard > 0.0))
        throw std::invalid_argument("config: boundary guard must be positive");

    const TimeGrid tg = resolve_time_grid(cfg);
    if (cfg.solver == SolverKind::Tcl && cfg.t_final > 0.0) {
        const double osc = tg.resolved_dt * 2.0 * rest_energy(cfg.physics);
        if (osc > 0.1) {
            if (!cfg.allow_coarse_dt)
                throw std::invalid_argument(
                    "config: tcl requires dt * 2 m c^2 <= 0.1 (got " + format_warn(osc) +
                    "); set guards.allow_coarse_dt to override");
            warnings.push_back("tcl oscillation under-resolved: dt * 2 m c^2 = " +
                               format_warn(osc));
        }
        // Explicit RK4 stability: the generator magnitude peaks at
        // k_max^2 / m (plus the potential), and the RK4 region ends at
        // |lambda| dt = 2 sqrt(2) on the imaginary axis.
        const double k_max = (grid.n() / 2) * grid.dk();
        double max_ephi = 0.0;
        if (cfg.pot_kind != PotentialSpec::Kind::Zero) {
            const PotentialSpec::Table table = potential.sample(grid);
            for (double phi : table.phi)
                max_ephi = std::max(max_ephi, std::abs(cfg.physics.e * phi));
        }
        const double stability = tg.resolved_dt * (k_max * k_max / cfg.physics.m + max_ephi);
        if (stability > 2.5) {
            if (!cfg.allow_coarse_dt)
                throw std::invalid_argument(
                    "config: tcl RK4 unstable: dt * (k_max^2/m + max|e phi|) = " +
                    format_warn(stability) +
                    " > 2.5; reduce dt or n_points (set guards.allow_coarse_dt to override)");
            warnings.push_back("tcl RK4 stability bound exceeded: " + format_warn(stability));
        }
        // Grid modes with k_max^2/(2 m^2 c^2) deep below machine precision
        // decay and revive through roundoff noise once t passes the trough
        // at pi/(2 m c^2); such momenta are outside the weak-relativistic
        // regime anyway, so the grid should not carry them.
        const double mc2 = rest_energy(cfg.physics);
        const double depth = k_max * k_max / (2.0 * cfg.physics.m * cfg.physics.m *
                                              cfg.physics.c * cfg.physics.c);
        if (depth > 25.0 && cfg.t_final > 0.5 * std::numbers::pi / mc2)
            warnings.push_back(
                "tcl revival noise: k_max^2/(2 m^2 c^2) = " + format_warn(depth) +
                " amplifies roundoff by exp(depth) across norm revivals; use a grid with "
                "smaller momentum extent");
    }
    if (is_stepping_solver(cfg.solver) && cfg.pot_kind != PotentialSpec::Kind::Zero) {
        const PotentialSpec::Table table = potential.sample(grid);
        double max_ephi = 0.0;
        for (double phi : table.phi)
            max_ephi = std::max(max_ephi, std::abs(cfg.physics.e * phi));
        if (tg.resolved_dt * max_ephi > 1.0)
            warnings.push_back("dt * max|e phi| = " + format_warn(tg.resolved_dt * max_ephi) +
                               " > 1: potential phase under-resolved");
    }
    return warnings;
}

namespace detail {
inline double get_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw std::invalid_argument(std::string("config: missing numeric key '") + key + "'");
    return j.at(key).get<double>();
}
}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig cfg;
    if (!j.contains("solver") || !j.at("solver").is_string())
        throw std::invalid_argument("config: missing string key 'solver'");
    cfg.solver = solver_from_name(j.at("solver").get<std::string>());

    const auto& grid = j.at("grid");
    cfg.n_points = static_cast<int>(detail::get_number(grid, "n_points"));
    cfg.x_min = detail::get_number(grid, "x_min");
    cfg.x_max = detail::get_number(grid, "x_max");

    const auto& phys = j.at("physics");
    cfg.physics.m = detail::get_number(phys, "m");
    cfg.physics.c = detail::get_number(phys, "c");
    cfg.physics.e = detail::get_number(phys, "e");

    const auto& pot = j.at("potential");
    const std::string type = pot.at("type").get<std::string>();
    if (type == "zero") {
        cfg.pot_kind = PotentialSpec::Kind::Zero;
    } else if (type == "linear") {
        cfg.pot_kind = PotentialSpec::Kind::Linear;
        cfg.pot_slope = detail::get_number(pot, "a");
    } else if (type == "tabulated") {
        cfg.pot_kind = PotentialSpec::Kind::Tabulated;
        if (pot.contains("values")) {
            cfg.pot_values = pot.at("values").get<std::vector<double>>();
        } else if (pot.contains("file")) {
            cfg.pot_file = pot.at("file").get<std::string>();
            cfg.pot_values = load_potential_table(cfg.pot_file);
        } else {
            throw std::invalid_argument("config: tabulated potential needs 'values' or 'file'");
        }
    } else {
        throw std::invalid_argument("config: unknown potential type '" + type + "'");
    }

    const auto& packet = j.at("packet");
    cfg.x0 = detail::get_number(packet, "x0");
    cfg.p0 = detail::get_number(packet, "p0");
    cfg.x_center = packet.contains("x_center") ? detail::get_number(packet, "x_center") : 0.0;

    const auto& time = j.at("time");
    cfg.t_final = detail::get_number(time, "t_final");
    cfg.dt = time.contains("dt") ? detail::get_number(time, "dt") : 1e-3;
    cfg.n_snapshots =
        time.contains("n_snapshots") ? static_cast<int>(detail::get_number(time, "n_snapshots")) : 200;

    if (j.contains("outputs")) {
        const auto& out = j.at("outputs");
        if (out.contains("directory")) cfg.out_dir = out.at("directory").get<std::string>();
        if (out.contains("formats")) {
            cfg.write_csv = false;
            cfg.write_pgm = false;
            for (const auto& f : out.at("formats")) {
                const std::string name = f.get<std::string>();
                if (name == "csv") cfg.write_csv = true;
                else if (name == "pgm") cfg.write_pgm = true;
                else throw std::invalid_argument("config: unknown output format '" + name + "'");
            }
        }
    }
    if (j.contains("guards")) {
        const auto& g = j.at("guards");
        if (g.contains("boundary_amplitude"))
            cfg.boundary_guard = detail::get_number(g, "boundary_amplitude");
        if (g.contains("allow_coarse_dt")) cfg.allow_coarse_dt = g.at("allow_coarse_dt").get<bool>();
    }
    validate_config(cfg);
    return cfg;
}

inline RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config: JSON parse failure in '" + path.string() +
                                    "': " + e.what());
    }
    return parse_config(j);
}

// Resolved configuration as recorded in the manifest.
inline nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json pot;
    switch (cfg.pot_kind) {
        case PotentialSpec::Kind::Zero: pot = {{"type", "zero"}}; break;
        case PotentialSpec::Kind::Linear:
            pot = {{"type", "linear"}, {"a", cfg.pot_slope}};
            break;
        case PotentialSpec::Kind::Tabulated:
            pot = {{"type", "tabulated"}, {"n_values", cfg.pot_values.size()}};
            if (!cfg.pot_file.empty()) pot["file"] = cfg.pot_file;
            break;
    }
    std::vector<std::string> formats;
    if (cfg.write_csv) formats.push_back("csv");
    if (cfg.write_pgm) formats.push_back("pgm");
    return {
        {"solver", solver_name(cfg.solver)},
        {"grid", {{"n_points", cfg.n_points}, {"x_min", cfg.x_min}, {"x_max", cfg.x_max}}},
        {"physics", {{"m", cfg.physics.m}, {"c", cfg.physics.c}, {"e", cfg.physics.e}}},
        {"potential", pot},
        {"packet", {{"x0", cfg.x0}, {"p0", cfg.p0}, {"x_center", cfg.x_center}}},
        {"time",
         {{"t_final", cfg.t_final}, {"dt", cfg.dt}, {"n_snapshots", cfg.n_snapshots}}},
        {"outputs", {{"directory", cfg.out_dir}, {"formats", formats}}},
        {"guards",
         {{"boundary_amplitude", cfg.boundary_guard}, {"allow_coarse_dt", cfg.allow_coarse_dt}}},
    };
}

// Parameter presets behind the `figure` subcommand: free packet at rest
// (fig1) and a drifting packet in a linear potential (fig2), each run as a
// full-Dirac / TCL pair on one shared grid.
//
// The grid keeps the momentum extent modest (k_max ~ 5 at 96 points over
// [-30, 30], 16 sigma above the packet's momentum content): the TCL norm
// revival multiplies roundoff in mode k by exp(k^2/(2 m^2 c^2)), which
// rules out finely resolved momentum grids for this solver. Both panels
// share the grid so the densities compare point by point.
inline RunConfig figure_preset(int which, SolverKind solver) {
    RunConfig cfg;
    cfg.solver = solver;
    cfg.n_points = 96;
    cfg.x_min = -30.0;
    cfg.x_max = 30.0;
    cfg.physics = {1.0, 1.0, 1.0};
    cfg.x0 = 10.0;
    cfg.t_final = 10.0;
    cfg.dt = 1e-3;
    cfg.n_snapshots = 200;
    if (which == 1) {
        cfg.pot_kind = PotentialSpec::Kind::Zero;
        cfg.p0 = 0.0;
    } else if (which == 2) {
        cfg.pot_kind = PotentialSpec::Kind::Linear;
        cfg.pot_slope = 0.1;
        cfg.p0 = 0.2;
    } else {
        throw std::invalid_argument("figure: preset must be fig1 or fig2");
    }
    return cfg;
}

}  // namespace diracpq
