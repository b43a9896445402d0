#include "surfcalc/cli/catalog.hpp"
#include "surfcalc/cli/scenario.hpp"
#include "surfcalc/cli/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int exit_config = 2;

int run_command(const std::string& scenario_path, const std::string& out_override, std::optional<int> threads) {
    using namespace surfcalc::cli;
    const Scenario sc = load_scenario(scenario_path);
    const std::string out = out_override.empty() ? sc.output : out_override;
    const RunSummary summary = run_suite(sc, out, resolve_threads(threads), &std::cerr);
    if (summary.files.empty()) std::cerr << sc.name << ": no suites selected, nothing written\n";
    for (const auto& f : summary.files) std::cout << out << '/' << f << '\n';
    return summary.exit_code;
}

int orders_command(const std::string& report) {
    std::ifstream in(report, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open " << report << '\n';
        return exit_config;
    }
    surfcalc::cli::print_orders(std::cout, surfcalc::read_check_csv(in));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface calculus checks, solvers and convergence studies"};
    app.require_subcommand(1);

    std::string scenario, out;
    int threads = 0;
    auto* run = app.add_subcommand("run", "run the suites selected by a scenario file");
    run->add_option("--scenario", scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory (overrides the scenario's output)");
    run->add_option("--threads", threads, "worker threads (default: SURFCALC_THREADS, else 1)")->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("list", "list surfaces, fields, constitutive sets and suites");

    std::string report;
    auto* orders = app.add_subcommand("orders", "print a convergence table from a check CSV");
    orders->add_option("--report", report, "check CSV written by run")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return run_command(scenario, out, threads > 0 ? std::optional<int>(threads) : std::nullopt);
        if (*list) {
            surfcalc::cli::list_catalog(std::cout);
            return 0;
        }
        if (*orders) return orders_command(report);
    } catch (const surfcalc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config + 1;
    }
    return 0;
}
