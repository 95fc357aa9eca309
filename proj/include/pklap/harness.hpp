#pragma once

// check / solve / sweep runs over a ProblemConfig, producing RunReports and
// CSV summaries.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pklap/config.hpp"
#include "pklap/report.hpp"

namespace pklap {

struct RunOptions {
    bool timing = false;  // off by default: wall time would break byte-identical reports
};

namespace detail {

inline RunReport start_report(const char* command, const ProblemConfig& config) {
    RunReport r;
    r.command = command;
    r.config = config_to_json(config);
    return r;
}

/// Fills C1, C2 and L; returns the problem when the config is valid.
inline std::optional<ProblemSpec> check_into(RunReport& r, const ProblemConfig& config) {
    std::optional<ProblemSpec> problem;
    try {
        problem = build_problem(config);
    } catch (const ConfigError& e) {
        r.status = "config_error";
        r.error = ErrorInfo{"config", e.what(), std::nullopt};
        return std::nullopt;
    }
    const auto grid = sample_grid(config.c1_grid.lo, config.c1_grid.hi, config.c1_grid.step);
    r.conditions.push_back(check_C1(*problem, grid));
    r.conditions.push_back(check_C2(*problem));
    r.sphere_bound = sphere_energy_lower_bound(*problem);
    const bool ok = std::all_of(r.conditions.begin(), r.conditions.end(), [](const auto& c) { return c.holds; });
    r.status = ok ? "ok" : "conditions_failed";
    return problem;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// C1 over the configured sample grid, C2 and the sphere bound L.
inline RunReport run_check(const ProblemConfig& config, RunOptions opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = detail::start_report("check", config);
    detail::check_into(r, config);
    if (opts.timing) r.elapsed_seconds = detail::seconds_since(t0);
    return r;
}

/// Conditions first; when both hold, the full two-solution pipeline.
inline RunReport run_solve(const ProblemConfig& config, RunOptions opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = detail::start_report("solve", config);
    auto problem = detail::check_into(r, config);
    if (problem && r.status == "ok") {
        try {
            r.result = solve_two(*problem);
        } catch (const ConditionRefusal& e) {
            r.status = "conditions_failed";
            r.error = ErrorInfo{"solve_two", e.what(), std::nullopt};
        } catch (const SolverError& e) {
            r.status = "solver_error";
            r.error = ErrorInfo{e.stage(), e.what(), e.best_iterate()};
        } catch (const QuadratureError& e) {
            r.status = "solver_error";
            r.error = ErrorInfo{"quadrature", e.what(), std::nullopt};
        }
    } else if (problem) {
        r.error = ErrorInfo{"conditions", "growth or smallness condition does not hold; not solving", std::nullopt};
    }
    if (opts.timing) r.elapsed_seconds = detail::seconds_since(t0);
    return r;
}

// ---- sweeps ----

struct SweepAxis {
    std::string name;  // "T", "m", "scale" or "p"
    std::vector<double> values;
};

/// "lo:hi:n" (n evenly spaced values, endpoints included) or "v1,v2,...".
inline SweepAxis parse_sweep_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep axis '" + text + "': expected NAME=RANGE");
    SweepAxis ax;
    ax.name = text.substr(0, eq);
    if (ax.name != "T" && ax.name != "m" && ax.name != "scale" && ax.name != "p") {
        throw ConfigError("sweep axis '" + ax.name + "': expected one of T, m, scale, p");
    }
    const std::string range = text.substr(eq + 1);
    auto to_double = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("sweep axis '" + ax.name + "': cannot parse '" + s + "' as a number");
        }
    };
    if (std::count(range.begin(), range.end(), ':') == 2) {
        const auto c1 = range.find(':');
        const auto c2 = range.find(':', c1 + 1);
        const double lo = to_double(range.substr(0, c1));
        const double hi = to_double(range.substr(c1 + 1, c2 - c1 - 1));
        const double n = to_double(range.substr(c2 + 1));
        if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("sweep axis '" + ax.name + "': count must be a positive integer");
        const int count = static_cast<int>(n);
        for (int i = 0; i < count; ++i) {
            ax.values.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
        }
    } else {
        std::stringstream ss(range);
        std::string item;
        while (std::getline(ss, item, ',')) ax.values.push_back(to_double(item));
    }
    if (ax.values.empty()) throw ConfigError("sweep axis '" + ax.name + "': no values");
    if (ax.name == "T") {
        for (double v : ax.values) {
            if (v != std::floor(v)) throw ConfigError("sweep axis 'T': values must be integers");
        }
    }
    return ax;
}

inline ProblemConfig apply_axis(ProblemConfig c, const std::string& name, double v) {
    if (name == "T") {
        const int T = static_cast<int>(v);
        if (c.p.kind == ExponentSpec::Kind::Explicit) throw ConfigError("sweep over T needs a constant or periodic p");
        if (c.family == "power" && static_cast<int>(c.a.size()) != T) {
            if (c.a.empty() || c.b.empty()) throw ConfigError("sweep over T: power family coefficients missing");
            c.a.assign(static_cast<std::size_t>(T), c.a.front());
            c.b.assign(static_cast<std::size_t>(T), c.b.front());
        }
        if (c.envelope) throw ConfigError("sweep over T needs envelope \"auto\"");
        c.T = T;
    } else if (name == "m") {
        c.m = v;
    } else if (name == "scale") {
        c.scale = v;
    } else if (name == "p") {
        c.p.kind = ExponentSpec::Kind::Constant;
        c.p.constant = v;
        c.p.values.clear();
    }
    return c;
}

struct SweepCell {
    std::vector<double> coords;  // one per axis
    RunReport report;
};

struct SweepResult {
    std::vector<SweepAxis> axes;
    std::vector<SweepCell> cells;  // sorted by coords
};

/// Runs every cell of the axis grid independently on `jobs` worker threads.
/// A failing cell records its error and does not stop the sweep.
inline SweepResult run_sweep(const ProblemConfig& base, const std::vector<SweepAxis>& axes, int jobs = 1,
                             bool solve = true, RunOptions opts = {}) {
    if (axes.empty() || axes.size() > 2) throw ConfigError("sweep: expected one or two axes");
    SweepResult out;
    out.axes = axes;
    if (axes.size() == 1) {
        for (double v : axes[0].values) out.cells.push_back({{v}, {}});
    } else {
        for (double v : axes[0].values) {
            for (double w : axes[1].values) out.cells.push_back({{v, w}, {}});
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < out.cells.size(); i = next++) {
            auto& cell = out.cells[i];
            ProblemConfig c = base;
            try {
                for (std::size_t a = 0; a < axes.size(); ++a) c = apply_axis(c, axes[a].name, cell.coords[a]);
            } catch (const ConfigError& e) {
                cell.report = detail::start_report(solve ? "solve" : "check", c);
                cell.report.status = "config_error";
                cell.report.error = ErrorInfo{"config", e.what(), std::nullopt};
                continue;
            }
            cell.report = solve ? run_solve(c, opts) : run_check(c, opts);
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(out.cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::stable_sort(out.cells.begin(), out.cells.end(),
                     [](const SweepCell& a, const SweepCell& b) { return a.coords < b.coords; });
    return out;
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Header axis1,axis2,c2_lhs,c2_rhs,c2_pass,n_certified,J_min,J_mp; fields
/// without a value are left empty.
inline std::string sweep_csv(const SweepResult& s) {
    std::string out = "axis1,axis2,c2_lhs,c2_rhs,c2_pass,n_certified,J_min,J_mp\n";
    for (const auto& cell : s.cells) {
        std::vector<std::string> row;
        row.push_back(format_double(cell.coords[0]));
        row.push_back(cell.coords.size() > 1 ? format_double(cell.coords[1]) : "");
        const ConditionReport* c2 = nullptr;
        for (const auto& c : cell.report.conditions) {
            if (c.id == ConditionId::C2) c2 = &c;
        }
        row.push_back(c2 ? format_double(c2->lhs) : "");
        row.push_back(c2 ? format_double(c2->rhs) : "");
        row.push_back(c2 ? (c2->holds ? "1" : "0") : "");
        row.push_back(std::to_string(cell.report.certified_count()));
        const auto& res = cell.report.result;
        row.push_back(res ? format_double(res->local_min.energy) : "");
        row.push_back(res ? format_double(res->mountain_pass_solution.energy) : "");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

inline nlohmann::json sweep_json(const SweepResult& s) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : s.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : s.cells) cells.push_back({{"coords", c.coords}, {"report", c.report}});
    return {{"schema_version", report_schema_version}, {"version", library_version}, {"axes", axes}, {"cells", cells}};
}

/// Columns k, y(k) for k = 0..T+1, 17 significant digits.
inline std::string solution_csv(const GridFunction& y) {
    std::string out = "k,y\n";
    for (int k = 0; k <= y.T() + 1; ++k) out += std::to_string(k) + "," + format_double(y(k)) + "\n";
    return out;
}

}  // namespace pklap
