// pklap: check conditions, solve, or sweep discrete p(k)-Laplacian problems.
//
// Exit codes: 0 success, 1 usage or config error, 2 conditions failed,
// 3 solver stage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pklap.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_gradient, tol_residual, tol_quadrature, tol_positivity;

    void add_to(CLI::App* app) {
        app->add_option("--seed", seed, "Random seed for the multistart minimizer");
        app->add_option("--tol-gradient", tol_gradient, "Gradient tolerance");
        app->add_option("--tol-residual", tol_residual, "Residual tolerance");
        app->add_option("--tol-quadrature", tol_quadrature, "Quadrature tolerance");
        app->add_option("--tol-positivity", tol_positivity, "Positivity margin");
    }
    void apply(pklap::ProblemConfig& c) const {
        if (seed) c.solver.seed = *seed;
        if (tol_gradient) c.tolerances.gradient = *tol_gradient;
        if (tol_residual) c.tolerances.residual = *tol_residual;
        if (tol_quadrature) c.tolerances.quadrature = *tol_quadrature;
        if (tol_positivity) c.tolerances.positivity = *tol_positivity;
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw pklap::ConfigError("cannot write '" + path + "'");
    out << text;
}

void print_diagnostics(const pklap::RunReport& r) {
    for (const auto& c : r.conditions) {
        std::cerr << pklap::to_string(c.id) << ": " << (c.holds ? "holds" : "FAILS") << " (lhs "
                  << pklap::format_double(c.lhs) << ", rhs " << pklap::format_double(c.rhs) << ")";
        if (c.witness) std::cerr << " witness k=" << c.witness->k << " y=" << pklap::format_double(c.witness->y);
        std::cerr << "\n";
    }
    if (r.error) std::cerr << "error [" << r.error->stage << "]: " << r.error->message << "\n";
    if (r.result) {
        std::cerr << "J(y0) = " << pklap::format_double(r.result->local_min.energy)
                  << ", c = J(y*) = " << pklap::format_double(r.result->mountain_pass_solution.energy)
                  << ", certified " << r.certified_count() << "/2\n";
        if (!r.result->mountain_pass.hypothesis_verified) {
            std::cerr << "note: mountain-pass barrier hypothesis could not be verified\n";
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive solutions of discrete anisotropic p(k)-Laplacian boundary value problems"};
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path, solution_prefix;
    bool timing = false;
    int jobs = 1;
    bool sweep_check_only = false;
    std::vector<std::string> axis_specs;
    Overrides ov;

    auto* check = app.add_subcommand("check", "Evaluate the growth and smallness conditions and the sphere bound");
    auto* solve = app.add_subcommand("solve", "Compute and certify two positive solutions");
    auto* sweep = app.add_subcommand("sweep", "Solve over a grid of one or two parameter axes");
    for (auto* sub : {check, solve, sweep}) {
        sub->add_option("--config", config_path, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "Report path (default: standard output)");
        sub->add_flag("--timing", timing, "Record wall time in the report");
        ov.add_to(sub);
    }
    solve->add_option("--solutions", solution_prefix,
                      "Write PREFIX.min.csv and PREFIX.mp.csv with columns k,y");
    sweep->add_option("--axis", axis_specs, "NAME=lo:hi:n or NAME=v1,v2,... with NAME in T, m, scale, p")
        ->required()
        ->expected(1, 2);
    sweep->add_option("--jobs", jobs, "Parallel sweep cells")->check(CLI::PositiveNumber);
    sweep->add_option("--csv", csv_path, "Summary CSV path (default: standard output when --out is set)");
    sweep->add_flag("--check-only", sweep_check_only, "Evaluate conditions only, no solves");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        auto config = pklap::load_config(config_path);
        ov.apply(config);
        const pklap::RunOptions opts{timing};

        if (*check || *solve) {
            const auto report = *check ? pklap::run_check(config, opts) : pklap::run_solve(config, opts);
            print_diagnostics(report);
            write_text(out_path, pklap::dump_report(report));
            if (*solve && report.result && !solution_prefix.empty()) {
                write_text(solution_prefix + ".min.csv", pklap::solution_csv(report.result->local_min.solution));
                write_text(solution_prefix + ".mp.csv",
                           pklap::solution_csv(report.result->mountain_pass_solution.solution));
            }
            return report.exit_code();
        }

        std::vector<pklap::SweepAxis> axes;
        for (const auto& s : axis_specs) axes.push_back(pklap::parse_sweep_axis(s));
        const auto result = pklap::run_sweep(config, axes, jobs, !sweep_check_only, opts);
        for (const auto& cell : result.cells) {
            if (cell.report.error) {
                std::cerr << "cell";
                for (double v : cell.coords) std::cerr << " " << pklap::format_double(v);
                std::cerr << ": [" << cell.report.error->stage << "] " << cell.report.error->message << "\n";
            }
        }
        if (!out_path.empty()) write_text(out_path, pklap::sweep_json(result).dump(2) + "\n");
        if (!csv_path.empty() || out_path.empty()) write_text(csv_path, pklap::sweep_csv(result));
        return 0;
    } catch (const pklap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
