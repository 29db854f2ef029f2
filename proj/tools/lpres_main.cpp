#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lpres/runner.hpp"
#include "lpres/scenario.hpp"

namespace {

struct Globals {
    std::optional<std::string> out;
    std::optional<unsigned long long> seed;
    int threads = 1;

    lpres::RunOptions options() const { return {out, seed, threads}; }
};

lpres::Scenario full_line_scenario(int n, double e_max, const std::string& suite) {
    lpres::Scenario sc;
    sc.mode = lpres::Mode::FullLineLimit;
    sc.n = n;
    sc.e_max = e_max;
    sc.suites = {suite};
    return sc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance and Lyapunov operator checks on energy grids"};
    app.set_version_flag("--version", std::string(lpres::kToolVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out", g.out, "Output directory (overrides the scenario)");
    app.add_option("--seed", g.seed, "Seed for random probe states");
    app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

    std::string scenario_path;
    auto* run = app.add_subcommand("run", "Run the suites of a scenario");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();

    std::string axis;
    std::vector<std::string> values;
    auto* sweep = app.add_subcommand("sweep", "Run a scenario over one parameter axis");
    sweep->add_option("--scenario", scenario_path, "Scenario file")->required();
    sweep->add_option("--axis", axis, "gamma_ratio, n, e_max or model")->required();
    sweep->add_option("--values", values, "Comma separated axis values")->required()->delimiter(',');

    int n = 0;
    double e_max = 0.0;
    std::string grid_scheme = "cayley";
    auto* verify = app.add_subcommand("verify-hardy", "Hardy projection oracle on a full-line grid");
    verify->add_option("--n", n, "Full-line node count")->required();
    verify->add_option("--emax", e_max, "Energy cutoff")->required();
    verify->add_option("--scheme", grid_scheme, "Grid scheme: uniform or cayley");

    double lp_emax = 50.0;
    auto* lp = app.add_subcommand("lp-limit", "Full-line limit checks");
    lp->add_option("--n", n, "Full-line node count")->required();
    lp->add_option("--emax", lp_emax, "Energy cutoff");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? lpres::kExitOk : lpres::kExitConfig;
    }

    try {
        if (*run) {
            return lpres::run_scenario(lpres::load_scenario(scenario_path), g.options(), std::cout);
        }
        if (*sweep) {
            return lpres::run_sweep(lpres::load_scenario(scenario_path), axis, values, g.options(), std::cout);
        }
        if (*verify) {
            lpres::Scenario sc = full_line_scenario(n, e_max, "hardy-oracle");
            sc.scheme = lpres::parse_scheme(grid_scheme);
            return lpres::run_scenario(sc, g.options(), std::cout);
        }
        return lpres::run_scenario(full_line_scenario(n, lp_emax, "lp-limit"), g.options(), std::cout);
    } catch (...) {
        return lpres::report_exception(std::cerr);
    }
}
