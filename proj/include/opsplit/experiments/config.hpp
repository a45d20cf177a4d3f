#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "opsplit/km/schedule.hpp"

namespace opsplit {

using Json = nlohmann::json;

enum class Algorithm { Prs, Drs, Fbs, Ppa, Admm, Dadmm, Feasibility };

inline constexpr std::string_view kAlgorithmNames[] = {"prs", "drs", "fbs", "ppa", "admm", "dadmm", "feasibility"};

inline std::string to_string(Algorithm a) { return std::string(kAlgorithmNames[static_cast<int>(a)]); }

inline std::string algorithm_choices() {
    std::string out;
    for (auto name : kAlgorithmNames) out += (out.empty() ? "" : ", ") + std::string(name);
    return out;
}

inline Algorithm parse_algorithm(const std::string& name) {
    for (int i = 0; i < int(std::size(kAlgorithmNames)); ++i)
        if (kAlgorithmNames[i] == name) return static_cast<Algorithm>(i);
    fail(ErrorKind::InvalidConfig, "unknown algorithm '" + name + "'; valid choices: " + algorithm_choices());
}

// constant lambda, an explicit list, or lambda_k = (k+1)^power
struct ScheduleSpec {
    RelaxationSchedule::Kind kind = RelaxationSchedule::Kind::Constant;
    double value = 0.5;
    std::vector<double> values;

    RelaxationSchedule build() const {
        switch (kind) {
        case RelaxationSchedule::Kind::Constant: return RelaxationSchedule::constant(value);
        case RelaxationSchedule::Kind::Explicit: return RelaxationSchedule::explicit_list(values);
        case RelaxationSchedule::Kind::Polynomial: return RelaxationSchedule::polynomial(value);
        }
        fail(ErrorKind::InvalidConfig, "unknown schedule kind");
    }

    bool is_constant(double lambda) const { return kind == RelaxationSchedule::Kind::Constant && value == lambda; }
    bool operator==(const ScheduleSpec&) const = default;
};

struct StartSpec {
    enum class Kind { ProblemDefault, Explicit, Random };
    Kind kind = Kind::ProblemDefault;
    std::vector<double> values;
    std::uint64_t seed = 0;
    double scale = 1.0;

    bool operator==(const StartSpec&) const = default;
};

struct ExperimentConfig {
    std::string name;
    std::string problem;
    Json params = Json::object();
    std::optional<Algorithm> algorithm; // filled from the problem default when absent
    double gamma = 1.0;
    ScheduleSpec schedule;
    StartSpec z0;
    std::optional<std::size_t> iters; // problem default, else 10^4
    std::uint64_t seed = 0;
    std::vector<std::string> checks;
    std::string output; // relative to the output root unless absolute

    Algorithm algo() const {
        require(algorithm.has_value(), ErrorKind::InvalidConfig, "config has no algorithm");
        return *algorithm;
    }
    std::size_t iterations() const {
        require(iters.has_value(), ErrorKind::InvalidConfig, "config has no iteration count");
        return *iters;
    }
    double param(const std::string& key) const { return params.at(key).get<double>(); }
    std::size_t count_param(const std::string& key) const { return params.at(key).get<std::size_t>(); }
    bool has_check(std::string_view c) const {
        for (const auto& x : checks)
            if (x == c) return true;
        return false;
    }
    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line, column = 1;
        else ++column;
    }
    return std::to_string(line) + ":" + std::to_string(column);
}

inline ScheduleSpec parse_schedule(const Json& j) {
    ScheduleSpec s;
    if (j.is_number()) {
        s.value = j.get<double>();
    } else if (j.is_array()) {
        s.kind = RelaxationSchedule::Kind::Explicit;
        s.values = j.get<std::vector<double>>();
    } else if (j.is_object() && j.size() == 1 && j.contains("constant")) {
        s.value = j["constant"].get<double>();
    } else if (j.is_object() && j.size() == 1 && j.contains("values")) {
        s.kind = RelaxationSchedule::Kind::Explicit;
        s.values = j["values"].get<std::vector<double>>();
    } else if (j.is_object() && j.size() == 1 && j.contains("polynomial")) {
        s.kind = RelaxationSchedule::Kind::Polynomial;
        s.value = j["polynomial"].get<double>();
    } else {
        fail(ErrorKind::InvalidConfig,
             "schedule must be a number, a list, or one of {constant: x}, {values: [...]}, {polynomial: p}");
    }
    s.build(); // range checks
    return s;
}

inline Json schedule_json(const ScheduleSpec& s) {
    switch (s.kind) {
    case RelaxationSchedule::Kind::Constant: return {{"constant", s.value}};
    case RelaxationSchedule::Kind::Explicit: return {{"values", s.values}};
    case RelaxationSchedule::Kind::Polynomial: return {{"polynomial", s.value}};
    }
    return nullptr;
}

inline StartSpec parse_start(const Json& j) {
    StartSpec s;
    if (j.is_null()) return s;
    if (j.is_array()) {
        s.kind = StartSpec::Kind::Explicit;
        s.values = j.get<std::vector<double>>();
        require(!s.values.empty(), ErrorKind::InvalidConfig, "explicit z0 must be nonempty");
        return s;
    }
    require(j.is_object() && j.contains("random"), ErrorKind::InvalidConfig,
            "z0 must be a list of numbers or {random: {seed, scale}}");
    const Json& r = j["random"];
    s.kind = StartSpec::Kind::Random;
    s.seed = r.value("seed", std::uint64_t(0));
    s.scale = r.value("scale", 1.0);
    require(s.scale > 0.0, ErrorKind::InvalidConfig, "random z0 scale must be positive");
    return s;
}

inline Json start_json(const StartSpec& s) {
    switch (s.kind) {
    case StartSpec::Kind::ProblemDefault: return nullptr;
    case StartSpec::Kind::Explicit: return s.values;
    case StartSpec::Kind::Random: return {{"random", {{"seed", s.seed}, {"scale", s.scale}}}};
    }
    return nullptr;
}

inline const std::vector<std::string>& reserved_keys() {
    static const std::vector<std::string> keys = {"name", "problem", "params", "algorithm", "gamma", "schedule",
                                                  "z0", "iters", "seed", "checks", "output"};
    return keys;
}

} // namespace detail

// Field-level parsing only; the problem catalog fills defaults and checks compatibility.
// Keys outside the reserved set are problem parameters, as are the members of an
// inline problem object {kind: ..., ...}.
inline ExperimentConfig parse_config_json(const Json& j) {
    require(j.is_object(), ErrorKind::InvalidConfig, "config must be a JSON object");
    ExperimentConfig c;
    try {
        require(j.contains("problem"), ErrorKind::InvalidConfig, "config needs a 'problem'");
        const Json& p = j["problem"];
        if (p.is_string()) {
            c.problem = p.get<std::string>();
        } else {
            require(p.is_object() && p.contains("kind") && p["kind"].is_string(), ErrorKind::InvalidConfig,
                    "problem must be a name or an object with a 'kind'");
            c.problem = p["kind"].get<std::string>();
            for (const auto& [key, value] : p.items())
                if (key != "kind") c.params[key] = value;
        }
        if (j.contains("params")) {
            require(j["params"].is_object(), ErrorKind::InvalidConfig, "params must be an object");
            for (const auto& [key, value] : j["params"].items()) c.params[key] = value;
        }
        const auto& reserved = detail::reserved_keys();
        for (const auto& [key, value] : j.items())
            if (std::find(reserved.begin(), reserved.end(), key) == reserved.end()) c.params[key] = value;

        c.name = j.value("name", c.problem);
        if (j.contains("algorithm")) c.algorithm = parse_algorithm(j["algorithm"].get<std::string>());
        c.gamma = j.value("gamma", 1.0);
        require(std::isfinite(c.gamma) && c.gamma > 0.0, ErrorKind::InvalidConfig, "gamma must be positive");
        if (j.contains("schedule")) c.schedule = detail::parse_schedule(j["schedule"]);
        if (j.contains("z0")) c.z0 = detail::parse_start(j["z0"]);
        if (j.contains("iters")) {
            const Json& n = j["iters"];
            const double v = n.is_number() ? n.get<double>() : 0.0;
            require(v >= 1.0 && v == std::floor(v) && v < 1e12, ErrorKind::InvalidConfig,
                    "iters must be an integer >= 1");
            c.iters = std::size_t(v);
        }
        c.seed = j.value("seed", std::uint64_t(0));
        if (j.contains("checks")) c.checks = j["checks"].get<std::vector<std::string>>();
        c.output = j.value("output", std::string());
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidConfig, std::string("malformed config field: ") + e.what());
    }
    return c;
}

inline Json config_to_json(const ExperimentConfig& c) {
    Json j;
    j["name"] = c.name;
    j["problem"] = c.problem;
    j["params"] = c.params;
    if (c.algorithm) j["algorithm"] = to_string(*c.algorithm);
    j["gamma"] = c.gamma;
    j["schedule"] = detail::schedule_json(c.schedule);
    j["z0"] = detail::start_json(c.z0);
    if (c.iters) j["iters"] = *c.iters;
    j["seed"] = c.seed;
    j["checks"] = c.checks;
    j["output"] = c.output;
    return j;
}

inline std::string serialize_config(const ExperimentConfig& c) { return config_to_json(c).dump(2) + "\n"; }

// Parses JSON text; `origin` names the source in error messages.
inline Json parse_json_text(const std::string& text, const std::string& origin = "<config>") {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        fail(ErrorKind::InvalidConfig, origin + ":" + detail::line_column(text, byte) + ": parse error: " + e.what());
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), ErrorKind::InvalidConfig, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace opsplit
