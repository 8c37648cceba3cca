// dirac1d: 1D Dirac wave-packet dynamics and its two-component reductions.
//
// Subcommands:
//   simulate --config <file>                  one solver run from a JSON config
//   compare  --config-a <a> --config-b <b>    two runs plus discrepancy metrics
//   figure   <fig1|fig2> [--out <dir>]        full-Dirac vs TCL preset pair
//   oracle   <suite>                          numerical verification suites
//
// Exit codes: 0 success, 1 config error, 2 numerical-guard violation,
// 3 oracle-suite failure.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "diracpq/emit.hpp"
#include "diracpq/oracle_suites.hpp"
#include "diracpq/version.hpp"

namespace {

int cmd_simulate(const std::string& config_path) {
    const diracpq::RunConfig cfg = diracpq::load_config_file(config_path);
    diracpq::detail::WallClock clock;
    const diracpq::RunResult result = diracpq::run_simulation(cfg);
    for (const std::string& w : result.diag.warnings) std::cerr << "warning: " << w << "\n";
    const auto files = diracpq::emit_simulation(cfg, result, clock.seconds());
    std::cout << "simulate: solver=" << diracpq::solver_name(cfg.solver) << " snapshots="
              << result.record.n_times() << " outputs=" << cfg.out_dir << " files="
              << files.size() + 1 << "\n";
    return 0;
}

int cmd_compare(const std::string& config_a, const std::string& config_b,
                const std::string& out_dir) {
    const diracpq::RunConfig cfg_a = diracpq::load_config_file(config_a);
    const diracpq::RunConfig cfg_b = diracpq::load_config_file(config_b);
    const diracpq::ComparisonOutput out = diracpq::emit_compare(cfg_a, cfg_b, out_dir);
    std::cout << "compare: l2_discrepancy=" << diracpq::format_double(out.metrics.l2_normalized)
              << " max_abs_diff=" << diracpq::format_double(out.metrics.max_abs)
              << " outputs=" << out_dir << "\n";
    return 0;
}

int cmd_figure(const std::string& name, const std::string& out_dir) {
    int which = 0;
    if (name == "fig1") which = 1;
    else if (name == "fig2") which = 2;
    else throw std::invalid_argument("figure: expected fig1 or fig2, got '" + name + "'");
    const diracpq::ComparisonOutput out = diracpq::emit_figure(which, out_dir);
    std::cout << name << ": l2_discrepancy=" << diracpq::format_double(out.metrics.l2_normalized)
              << " max_abs_diff=" << diracpq::format_double(out.metrics.max_abs)
              << " outputs=" << out_dir << "\n";
    return 0;
}

int cmd_oracle(const std::string& suite) {
    const bool pass = diracpq::run_oracle_suite(suite, std::cout);
    std::cout << "oracle " << suite << ": " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D Dirac spinor dynamics and two-component reductions"};
    app.set_version_flag("--version", std::string(diracpq::version));
    app.require_subcommand(1);

    std::string config_path, config_a, config_b, figure_name, oracle_name;
    std::string compare_out = ".", figure_out = ".";

    CLI::App* sim = app.add_subcommand("simulate", "Run one solver from a JSON config");
    sim->set_version_flag("--version", std::string(diracpq::version));
    sim->add_option("--config", config_path, "JSON run configuration")->required();

    CLI::App* cmp = app.add_subcommand("compare", "Run two configs and compare densities");
    cmp->set_version_flag("--version", std::string(diracpq::version));
    cmp->add_option("--config-a", config_a, "first JSON run configuration")->required();
    cmp->add_option("--config-b", config_b, "second JSON run configuration")->required();
    cmp->add_option("--out", compare_out, "output directory (default: .)");

    CLI::App* fig = app.add_subcommand("figure", "Run a full-Dirac vs TCL preset pair");
    fig->set_version_flag("--version", std::string(diracpq::version));
    fig->add_option("name", figure_name, "fig1 or fig2")->required();
    fig->add_option("--out", figure_out, "output directory (default: .)");

    CLI::App* orc = app.add_subcommand("oracle", "Run a verification suite");
    orc->set_version_flag("--version", std::string(diracpq::version));
    orc->add_option("suite", oracle_name,
                    "free-exactness | kernel-quadrature | smallmass-scaling | order-tests")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_path);
        if (cmp->parsed()) return cmd_compare(config_a, config_b, compare_out);
        if (fig->parsed()) return cmd_figure(figure_name, figure_out);
        if (orc->parsed()) return cmd_oracle(oracle_name);
    } catch (const diracpq::guard_error& e) {
        std::cerr << "error: guard: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
