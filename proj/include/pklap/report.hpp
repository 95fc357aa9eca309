#pragma once

// JSON serialization of every report type. Doubles are written in shortest
// round-trip form, so parse(dump(r)) == r for finite values.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pklap/conditions.hpp"
#include "pklap/pipeline.hpp"

namespace pklap {

inline constexpr const char* library_version = "1.0.0";
inline constexpr int report_schema_version = 1;

struct ErrorInfo {
    std::string stage;
    std::string message;
    std::optional<GridFunction> best_iterate;

    bool operator==(const ErrorInfo&) const = default;
};

/// Outcome of one check or solve run.
struct RunReport {
    int schema_version = report_schema_version;
    std::string version = library_version;
    std::string command;  // "check" or "solve"
    nlohmann::json config;
    std::string status;  // "ok", "conditions_failed", "solver_error", "config_error"
    std::vector<ConditionReport> conditions;
    std::optional<double> sphere_bound;
    std::optional<TwoSolutionResult> result;
    std::optional<ErrorInfo> error;
    std::optional<double> elapsed_seconds;

    int exit_code() const {
        if (status == "ok") return 0;
        if (status == "conditions_failed") return 2;
        if (status == "solver_error") return 3;
        return 1;
    }
    int certified_count() const {
        if (!result) return 0;
        return static_cast<int>(result->local_min.certified) + static_cast<int>(result->mountain_pass_solution.certified);
    }

    bool operator==(const RunReport&) const = default;
};

namespace detail {

using nlohmann::json;

/// Non-finite values have no JSON literal; they are written as strings.
inline json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

inline double num_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("report: expected a number, got '" + s + "'");
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

}  // namespace detail

}  // namespace pklap

// GridFunction has no default state, so it gets a non-default-constructing serializer.
template <>
struct nlohmann::adl_serializer<pklap::GridFunction> {
    static void to_json(json& j, const pklap::GridFunction& y) {
        j = json::array();
        for (double v : y.values()) j.push_back(pklap::detail::num(v));
    }
    static pklap::GridFunction from_json(const json& j) {
        std::vector<double> v;
        for (const auto& e : j) v.push_back(pklap::detail::num_from(e));
        return pklap::GridFunction::from_full(v);
    }
};

namespace pklap {

inline void to_json(nlohmann::json& j, const SampleWitness& w) { j = {{"k", w.k}, {"y", detail::num(w.y)}}; }
inline void from_json(const nlohmann::json& j, SampleWitness& w) {
    w.k = j.at("k").get<int>();
    w.y = detail::num_from(j.at("y"));
}

inline void to_json(nlohmann::json& j, const ConditionReport& r) {
    j = {{"id", to_string(r.id)},
         {"lhs", detail::num(r.lhs)},
         {"rhs", detail::num(r.rhs)},
         {"holds", r.holds},
         {"sample_count", r.sample_count},
         {"note", r.note}};
    if (r.lower) j["lower"] = detail::num(*r.lower);
    detail::put_optional(j, "witness", r.witness);
}

inline void from_json(const nlohmann::json& j, ConditionReport& r) {
    r.id = condition_id_from_string(j.at("id").get<std::string>());
    r.lhs = detail::num_from(j.at("lhs"));
    r.rhs = detail::num_from(j.at("rhs"));
    r.holds = j.at("holds").get<bool>();
    r.sample_count = j.at("sample_count").get<int>();
    r.note = j.at("note").get<std::string>();
    r.lower = j.contains("lower") ? std::optional<double>(detail::num_from(j["lower"])) : std::nullopt;
    r.witness = j.contains("witness") ? std::optional<SampleWitness>(j["witness"].get<SampleWitness>()) : std::nullopt;
}

inline void to_json(nlohmann::json& j, const MinimizerReport& r) {
    j = {{"minimizer", r.minimizer},
         {"energy", detail::num(r.energy)},
         {"sigma", detail::num(r.sigma)},
         {"kkt_residual_norm", detail::num(r.kkt_residual_norm)},
         {"constraint_value", detail::num(r.constraint_value)},
         {"interior", r.interior},
         {"iterations", r.iterations},
         {"findings", r.findings}};
}

inline void from_json(const nlohmann::json& j, MinimizerReport& r) {
    r.minimizer = j.at("minimizer").get<GridFunction>();
    r.energy = detail::num_from(j.at("energy"));
    r.sigma = detail::num_from(j.at("sigma"));
    r.kkt_residual_norm = detail::num_from(j.at("kkt_residual_norm"));
    r.constraint_value = detail::num_from(j.at("constraint_value"));
    r.interior = j.at("interior").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    r.findings = j.at("findings").get<std::vector<std::string>>();
}

inline void to_json(nlohmann::json& j, const MountainPassReport& r) {
    auto hist = nlohmann::json::array();
    for (double e : r.path_energy_history) hist.push_back(detail::num(e));
    j = {{"critical_point", r.critical_point},
         {"critical_value", detail::num(r.critical_value)},
         {"critical_value_is_upper_estimate", true},
         {"path_energy_history", hist},
         {"endpoint_energy0", detail::num(r.endpoint_energy0)},
         {"endpoint_energy1", detail::num(r.endpoint_energy1)},
         {"grad_norm", detail::num(r.grad_norm)},
         {"iterations", r.iterations},
         {"hypothesis_verified", r.hypothesis_verified}};
}

inline void from_json(const nlohmann::json& j, MountainPassReport& r) {
    r.critical_point = j.at("critical_point").get<GridFunction>();
    r.critical_value = detail::num_from(j.at("critical_value"));
    r.path_energy_history.clear();
    for (const auto& e : j.at("path_energy_history")) r.path_energy_history.push_back(detail::num_from(e));
    r.endpoint_energy0 = detail::num_from(j.at("endpoint_energy0"));
    r.endpoint_energy1 = detail::num_from(j.at("endpoint_energy1"));
    r.grad_norm = detail::num_from(j.at("grad_norm"));
    r.iterations = j.at("iterations").get<int>();
    r.hypothesis_verified = j.at("hypothesis_verified").get<bool>();
}

inline void to_json(nlohmann::json& j, const SolutionCertificate& c) {
    j = {{"solution", c.solution},
         {"residual_sup_norm", detail::num(c.residual_sup_norm)},
         {"original_residual_sup_norm", detail::num(c.original_residual_sup_norm)},
         {"strictly_positive", c.strictly_positive},
         {"min_value", detail::num(c.min_value)},
         {"energy", detail::num(c.energy)},
         {"certified", c.certified},
         {"anomaly", c.anomaly}};
}

inline void from_json(const nlohmann::json& j, SolutionCertificate& c) {
    c.solution = j.at("solution").get<GridFunction>();
    c.residual_sup_norm = detail::num_from(j.at("residual_sup_norm"));
    c.original_residual_sup_norm = detail::num_from(j.at("original_residual_sup_norm"));
    c.strictly_positive = j.at("strictly_positive").get<bool>();
    c.min_value = detail::num_from(j.at("min_value"));
    c.energy = detail::num_from(j.at("energy"));
    c.certified = j.at("certified").get<bool>();
    c.anomaly = j.at("anomaly").get<bool>();
}

inline void to_json(nlohmann::json& j, const TwoSolutionResult& r) {
    j = {{"c2", r.c2},
         {"sphere_bound", detail::num(r.sphere_bound)},
         {"minimizer", r.minimizer},
         {"lambda0", detail::num(r.lambda0)},
         {"lambda0_energy", detail::num(r.lambda0_energy)},
         {"mountain_pass", r.mountain_pass},
         {"local_min", r.local_min},
         {"mountain_pass_solution", r.mountain_pass_solution},
         {"separation", detail::num(r.separation)}};
}

inline void from_json(const nlohmann::json& j, TwoSolutionResult& r) {
    r.c2 = j.at("c2").get<ConditionReport>();
    r.sphere_bound = detail::num_from(j.at("sphere_bound"));
    r.minimizer = j.at("minimizer").get<MinimizerReport>();
    r.lambda0 = detail::num_from(j.at("lambda0"));
    r.lambda0_energy = detail::num_from(j.at("lambda0_energy"));
    r.mountain_pass = j.at("mountain_pass").get<MountainPassReport>();
    r.local_min = j.at("local_min").get<SolutionCertificate>();
    r.mountain_pass_solution = j.at("mountain_pass_solution").get<SolutionCertificate>();
    r.separation = detail::num_from(j.at("separation"));
}

inline void to_json(nlohmann::json& j, const ErrorInfo& e) {
    j = {{"stage", e.stage}, {"message", e.message}};
    detail::put_optional(j, "best_iterate", e.best_iterate);
}

inline void from_json(const nlohmann::json& j, ErrorInfo& e) {
    e.stage = j.at("stage").get<std::string>();
    e.message = j.at("message").get<std::string>();
    e.best_iterate = j.contains("best_iterate") ? std::optional<GridFunction>(j["best_iterate"].get<GridFunction>())
                                                : std::nullopt;
}

inline void to_json(nlohmann::json& j, const RunReport& r) {
    j = {{"schema_version", r.schema_version},
         {"version", r.version},
         {"command", r.command},
         {"config", r.config},
         {"status", r.status},
         {"conditions", r.conditions}};
    if (r.sphere_bound) j["sphere_bound"] = detail::num(*r.sphere_bound);
    detail::put_optional(j, "result", r.result);
    detail::put_optional(j, "error", r.error);
    if (r.elapsed_seconds) j["timing"] = {{"elapsed_seconds", *r.elapsed_seconds}};
}

inline void from_json(const nlohmann::json& j, RunReport& r) {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != report_schema_version) {
        throw std::invalid_argument("report: unsupported schema_version " + std::to_string(r.schema_version));
    }
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    r.status = j.at("status").get<std::string>();
    r.conditions = j.at("conditions").get<std::vector<ConditionReport>>();
    r.sphere_bound = j.contains("sphere_bound") ? std::optional<double>(detail::num_from(j["sphere_bound"])) : std::nullopt;
    r.result = j.contains("result") ? std::optional<TwoSolutionResult>(j["result"].get<TwoSolutionResult>()) : std::nullopt;
    r.error = j.contains("error") ? std::optional<ErrorInfo>(j["error"].get<ErrorInfo>()) : std::nullopt;
    r.elapsed_seconds = j.contains("timing") ? std::optional<double>(j["timing"].at("elapsed_seconds").get<double>())
                                             : std::nullopt;
}

inline std::string dump_report(const RunReport& r) { return nlohmann::json(r).dump(2) + "\n"; }

}  // namespace pklap
