#pragma once

// JSON problem configuration: parsing, validation and ProblemSpec assembly.
//
// {
//   "T": 10,
//   "p": 2 | [p(0), ..., p(T+1)] | {"periodic": [2, 3]},
//   "family": "example1" | "power",
//   "m": 4,
//   "scale": 1.0,                      // multiplies f and its envelope
//   "a": 1.0 | [...], "b": 1.0 | [...],  // power family: f = a(k)|y|^{m-2}y + b(k)
//   "envelope": "auto" | {"phi1": ..., "phi2": ..., "psi1": ..., "psi2": ...},
//   "tolerances": {"gradient": 1e-9, "residual": 1e-10, "quadrature": 1e-12, "positivity": 1e-12},
//   "solver": {"path_nodes": 64, "random_starts": 8, "max_descent_iterations": 20000,
//              "max_path_iterations": 20000, "max_newton_iterations": 100},
//   "c1_grid": {"lo": 0, "hi": 100, "step": 0.01},
//   "seed": 0
// }

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pklap/problem.hpp"

namespace pklap {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExponentSpec {
    enum class Kind { Constant, Explicit, Periodic };
    Kind kind = Kind::Constant;
    double constant = 2.0;
    std::vector<double> values;  // explicit list or periodic pattern
};

struct EnvelopeSpec {
    std::vector<double> phi1, phi2, psi1, psi2;
};

struct C1Grid {
    double lo = 0.0;
    double hi = 100.0;
    double step = 0.01;
};

struct ProblemConfig {
    int T = 2;
    ExponentSpec p;
    std::string family = "example1";
    double m = 4.0;
    double scale = 1.0;
    std::vector<double> a;  // power family, length T
    std::vector<double> b;
    std::optional<EnvelopeSpec> envelope;  // nullopt = derived from the family
    ToleranceSet tolerances;
    SolverOptions solver;
    C1Grid c1_grid;
};

namespace detail {

using nlohmann::json;

inline double number_at(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError("field '" + field + "': expected a number");
    return j.get<double>();
}

/// A number (broadcast to length n) or a list of exactly n numbers.
inline std::vector<double> sequence_at(const json& j, const std::string& field, int n) {
    if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(n), j.get<double>());
    if (!j.is_array()) throw ConfigError("field '" + field + "': expected a number or a list");
    if (static_cast<int>(j.size()) != n) {
        throw ConfigError("field '" + field + "': expected " + std::to_string(n) + " entries, got " +
                          std::to_string(j.size()));
    }
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number_at(j[i], field + "[" + std::to_string(i) + "]"));
    return v;
}

inline void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw ConfigError(where + "unknown field '" + it.key() + "'");
    }
}

}  // namespace detail

inline ProblemConfig parse_config(const nlohmann::json& j) {
    using detail::number_at;
    using detail::sequence_at;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    detail::reject_unknown(j, "config: ",
                           {"T", "p", "family", "m", "scale", "a", "b", "envelope", "tolerances", "solver", "c1_grid",
                            "seed"});
    ProblemConfig c;
    if (!j.contains("T") || !j["T"].is_number_integer()) throw ConfigError("field 'T': required integer");
    c.T = j["T"].get<int>();
    if (c.T < 2) throw ConfigError("field 'T': must be >= 2");

    if (!j.contains("p")) throw ConfigError("field 'p': required");
    const auto& p = j["p"];
    if (p.is_number()) {
        c.p.kind = ExponentSpec::Kind::Constant;
        c.p.constant = p.get<double>();
        if (c.p.constant < 2.0) throw ConfigError("field 'p': exponent below 2");
    } else if (p.is_array()) {
        c.p.kind = ExponentSpec::Kind::Explicit;
        c.p.values = sequence_at(p, "p", c.T + 2);
    } else if (p.is_object() && p.contains("periodic")) {
        detail::reject_unknown(p, "field 'p': ", {"periodic"});
        c.p.kind = ExponentSpec::Kind::Periodic;
        const auto& pat = p["periodic"];
        if (!pat.is_array() || pat.empty()) throw ConfigError("field 'p.periodic': expected a non-empty list");
        c.p.values = sequence_at(pat, "p.periodic", static_cast<int>(pat.size()));
    } else {
        throw ConfigError("field 'p': expected a number, a list of T+2 numbers or {\"periodic\": [...]}");
    }
    for (std::size_t i = 0; i < c.p.values.size(); ++i) {
        if (c.p.values[i] < 2.0) throw ConfigError("field 'p[" + std::to_string(i) + "]': exponent below 2");
    }

    if (!j.contains("family") || !j["family"].is_string()) throw ConfigError("field 'family': required string");
    c.family = j["family"].get<std::string>();
    if (c.family != "example1" && c.family != "power") {
        throw ConfigError("field 'family': unknown family '" + c.family + "' (expected example1 or power)");
    }
    if (!j.contains("m")) throw ConfigError("field 'm': required");
    c.m = number_at(j["m"], "m");
    if (j.contains("scale")) c.scale = number_at(j["scale"], "scale");
    if (!(c.scale > 0.0)) throw ConfigError("field 'scale': must be positive");
    if (c.family == "power") {
        if (!j.contains("a") || !j.contains("b")) throw ConfigError("family 'power': fields 'a' and 'b' are required");
        c.a = sequence_at(j["a"], "a", c.T);
        c.b = sequence_at(j["b"], "b", c.T);
    } else if (j.contains("a") || j.contains("b")) {
        throw ConfigError("fields 'a'/'b' only apply to family 'power'");
    }

    if (j.contains("envelope")) {
        const auto& e = j["envelope"];
        if (e.is_string()) {
            if (e.get<std::string>() != "auto") throw ConfigError("field 'envelope': expected \"auto\" or an object");
        } else if (e.is_object()) {
            detail::reject_unknown(e, "field 'envelope': ", {"phi1", "phi2", "psi1", "psi2"});
            EnvelopeSpec s;
            for (const char* name : {"phi1", "phi2", "psi1", "psi2"}) {
                if (!e.contains(name)) throw ConfigError(std::string("field 'envelope.") + name + "': required");
            }
            s.phi1 = sequence_at(e["phi1"], "envelope.phi1", c.T);
            s.phi2 = sequence_at(e["phi2"], "envelope.phi2", c.T);
            s.psi1 = sequence_at(e["psi1"], "envelope.psi1", c.T);
            s.psi2 = sequence_at(e["psi2"], "envelope.psi2", c.T);
            c.envelope = s;
        } else {
            throw ConfigError("field 'envelope': expected \"auto\" or an object");
        }
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) throw ConfigError("field 'tolerances': expected an object");
        detail::reject_unknown(t, "field 'tolerances': ", {"gradient", "residual", "quadrature", "positivity"});
        if (t.contains("gradient")) c.tolerances.gradient = number_at(t["gradient"], "tolerances.gradient");
        if (t.contains("residual")) c.tolerances.residual = number_at(t["residual"], "tolerances.residual");
        if (t.contains("quadrature")) c.tolerances.quadrature = number_at(t["quadrature"], "tolerances.quadrature");
        if (t.contains("positivity")) c.tolerances.positivity = number_at(t["positivity"], "tolerances.positivity");
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        if (!s.is_object()) throw ConfigError("field 'solver': expected an object");
        detail::reject_unknown(s, "field 'solver': ",
                               {"path_nodes", "random_starts", "max_descent_iterations", "max_path_iterations",
                                "max_newton_iterations"});
        auto int_at = [&](const char* name, int& dst) {
            if (!s.contains(name)) return;
            if (!s[name].is_number_integer()) throw ConfigError(std::string("field 'solver.") + name + "': expected an integer");
            dst = s[name].get<int>();
        };
        int_at("path_nodes", c.solver.path_nodes);
        int_at("random_starts", c.solver.random_starts);
        int_at("max_descent_iterations", c.solver.max_descent_iterations);
        int_at("max_path_iterations", c.solver.max_path_iterations);
        int_at("max_newton_iterations", c.solver.max_newton_iterations);
    }
    if (j.contains("c1_grid")) {
        const auto& g = j["c1_grid"];
        if (!g.is_object()) throw ConfigError("field 'c1_grid': expected an object");
        detail::reject_unknown(g, "field 'c1_grid': ", {"lo", "hi", "step"});
        if (g.contains("lo")) c.c1_grid.lo = number_at(g["lo"], "c1_grid.lo");
        if (g.contains("hi")) c.c1_grid.hi = number_at(g["hi"], "c1_grid.hi");
        if (g.contains("step")) c.c1_grid.step = number_at(g["step"], "c1_grid.step");
        if (!(c.c1_grid.lo >= 0.0) || !(c.c1_grid.hi >= c.c1_grid.lo) || !(c.c1_grid.step > 0.0)) {
            throw ConfigError("field 'c1_grid': need 0 <= lo <= hi and step > 0");
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0) throw ConfigError("field 'seed': expected a non-negative integer");
        c.solver.seed = j["seed"].get<std::uint64_t>();
    }
    return c;
}

/// Normalized JSON form of a config; parse_config(config_to_json(c)) == c.
inline nlohmann::json config_to_json(const ProblemConfig& c) {
    nlohmann::json j;
    j["T"] = c.T;
    switch (c.p.kind) {
        case ExponentSpec::Kind::Constant: j["p"] = c.p.constant; break;
        case ExponentSpec::Kind::Explicit: j["p"] = c.p.values; break;
        case ExponentSpec::Kind::Periodic: j["p"] = {{"periodic", c.p.values}}; break;
    }
    j["family"] = c.family;
    j["m"] = c.m;
    j["scale"] = c.scale;
    if (c.family == "power") {
        j["a"] = c.a;
        j["b"] = c.b;
    }
    if (c.envelope) {
        j["envelope"] = {{"phi1", c.envelope->phi1},
                         {"phi2", c.envelope->phi2},
                         {"psi1", c.envelope->psi1},
                         {"psi2", c.envelope->psi2}};
    } else {
        j["envelope"] = "auto";
    }
    j["tolerances"] = {{"gradient", c.tolerances.gradient},
                       {"residual", c.tolerances.residual},
                       {"quadrature", c.tolerances.quadrature},
                       {"positivity", c.tolerances.positivity}};
    j["solver"] = {{"path_nodes", c.solver.path_nodes},
                   {"random_starts", c.solver.random_starts},
                   {"max_descent_iterations", c.solver.max_descent_iterations},
                   {"max_path_iterations", c.solver.max_path_iterations},
                   {"max_newton_iterations", c.solver.max_newton_iterations}};
    j["c1_grid"] = {{"lo", c.c1_grid.lo}, {"hi", c.c1_grid.hi}, {"step", c.c1_grid.step}};
    j["seed"] = c.solver.seed;
    return j;
}

inline ExponentMap build_exponents(const ProblemConfig& c) {
    switch (c.p.kind) {
        case ExponentSpec::Kind::Constant: return ExponentMap::constant(c.T, c.p.constant);
        case ExponentSpec::Kind::Explicit: return ExponentMap(c.p.values);
        case ExponentSpec::Kind::Periodic: return ExponentMap::periodic(c.T, c.p.values);
    }
    throw ConfigError("unreachable exponent kind");
}

/// Assembles and validates the ProblemSpec. Invariant violations from the
/// core types are rethrown as ConfigError.
inline ProblemSpec build_problem(const ProblemConfig& c) {
    try {
        auto exponents = build_exponents(c);
        Nonlinearity nl = [&] {
            if (c.family == "example1") return families::example1(c.T, c.m, c.scale);
            auto a = c.a, b = c.b;
            for (auto& x : a) x *= c.scale;
            for (auto& x : b) x *= c.scale;
            return families::power(a, b, c.m);
        }();
        if (c.envelope) {
            GrowthEnvelope env(c.m, c.envelope->phi1, c.envelope->phi2, c.envelope->psi1, c.envelope->psi2);
            nl = Nonlinearity(nl.name(), [nl](int k, double y) { return nl(k, y); }, env, nl.closed_form());
        }
        return ProblemSpec(c.T, std::move(exponents), std::move(nl), c.tolerances, c.solver);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

inline ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(j);
}

inline ProblemSpec load_problem(const std::string& path) { return build_problem(load_config(path)); }

}  // namespace pklap
