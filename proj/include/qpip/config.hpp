// config.hpp — JSON run configuration: schema, defaults, validation.
//
// A config file fully determines a run (together with CLI overrides).  Keys
// are checked strictly — an unknown key is an error, not a warning — because
// a silently ignored typo ("lamda") would change the physics of the run.
#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpip/info.hpp"
#include "qpip/model.hpp"

namespace qpip {

enum class OutputFormat { csv, json };

struct PipSettings {
    // One curve per requested convention ("both" expands to two).
    std::vector<Convention> conventions{Convention::paper};
    LogBase base{LogBase::base2};
    std::uint64_t enumeration_cap{kDefaultEnumerationCap};
    int batch_size{200};
    double stderr_tol{1e-3};
    std::uint64_t max_samples{100000};
};

struct OutputSettings {
    std::string prefix{"qpip_run"};
    OutputFormat format{OutputFormat::csv};
};

struct RunConfig {
    SystemParams params;
    std::vector<double> times;  // strictly ascending, non-negative
    int realizations{1};
    PipSettings pip;
    OutputSettings output;
    int threads{1};  // runtime knob (CLI only); never part of the run identity

    void validate() const {
        params.validate();
        if (times.empty()) throw std::invalid_argument("config: times must be non-empty");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!(times[i] >= 0.0) || !std::isfinite(times[i]))
                throw std::invalid_argument("config: times must be non-negative and finite");
            if (i > 0 && !(times[i] > times[i - 1]))
                throw std::invalid_argument("config: times must be strictly ascending");
        }
        if (realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
        if (pip.conventions.empty() || pip.conventions.size() > 2)
            throw std::invalid_argument("config: pip.convention must select 1 or 2 conventions");
        if (pip.enumeration_cap < 1)
            throw std::invalid_argument("config: pip.enumeration_cap must be >= 1");
        if (pip.batch_size < 1)
            throw std::invalid_argument("config: pip.batch_size must be >= 1");
        if (!(pip.stderr_tol > 0.0) || !std::isfinite(pip.stderr_tol))
            throw std::invalid_argument("config: pip.stderr_tol must be positive");
        if (pip.max_samples < 1)
            throw std::invalid_argument("config: pip.max_samples must be >= 1");
        if (output.prefix.empty())
            throw std::invalid_argument("config: output.prefix must be non-empty");
        if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    }
};

// Default trajectory grid: 201 uniform samples on [0, 20].
inline std::vector<double> default_time_grid() {
    std::vector<double> times(201);
    for (int i = 0; i <= 200; ++i) times[i] = 20.0 * static_cast<double>(i) / 200.0;
    return times;
}

// ---------------------------------------------------------------------------
// Name <-> enum mappings (shared by config parsing, CLI flags, and output)
// ---------------------------------------------------------------------------

inline const char* convention_name(Convention c) {
    return c == Convention::paper ? "paper" : "pure-bipartite";
}

inline std::vector<Convention> parse_conventions(const std::string& name) {
    if (name == "paper") return {Convention::paper};
    if (name == "pure-bipartite") return {Convention::pure_bipartite};
    if (name == "both") return {Convention::paper, Convention::pure_bipartite};
    throw std::invalid_argument("config: convention must be \"paper\", \"pure-bipartite\" or "
                                "\"both\", got \"" + name + "\"");
}

inline const char* base_name(LogBase base) { return base == LogBase::base2 ? "2" : "e"; }

inline LogBase parse_base(const std::string& name) {
    if (name == "2") return LogBase::base2;
    if (name == "e") return LogBase::natural;
    throw std::invalid_argument("config: base must be \"2\" or \"e\", got \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// JSON parsing
// ---------------------------------------------------------------------------

namespace detail {

inline void require_known_keys(const nlohmann::json& j, const char* where,
                               std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) { known = true; break; }
        if (!known)
            throw std::invalid_argument(std::string("config: unknown key \"") + it.key() +
                                        "\" in " + where);
    }
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key))
        throw std::invalid_argument(std::string("config: missing required key \"") + key + "\"");
    return j.at(key);
}

inline double as_double(const nlohmann::json& v, const char* key) {
    if (!v.is_number())
        throw std::invalid_argument(std::string("config: \"") + key + "\" must be a number");
    return v.get<double>();
}

inline int as_int(const nlohmann::json& v, const char* key) {
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string("config: \"") + key + "\" must be an integer");
    return v.get<int>();
}

inline std::uint64_t as_uint64(const nlohmann::json& v, const char* key) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw std::invalid_argument(std::string("config: \"") + key +
                                    "\" must be a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::string as_string(const nlohmann::json& v, const char* key) {
    if (!v.is_string())
        throw std::invalid_argument(std::string("config: \"") + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
    detail::require_known_keys(j, "top level",
                               {"n_levels", "delta_e", "delta_eps", "lambda", "seed", "times",
                                "realizations", "pip", "output"});

    RunConfig config;
    config.params.n_levels = detail::as_int(detail::require_field(j, "n_levels"), "n_levels");
    config.params.delta_e = detail::as_double(detail::require_field(j, "delta_e"), "delta_e");
    config.params.delta_eps =
        detail::as_double(detail::require_field(j, "delta_eps"), "delta_eps");
    config.params.lambda = detail::as_double(detail::require_field(j, "lambda"), "lambda");
    if (j.contains("seed")) config.params.seed = detail::as_uint64(j.at("seed"), "seed");

    if (j.contains("times")) {
        if (!j.at("times").is_array())
            throw std::invalid_argument("config: \"times\" must be an array of numbers");
        for (const auto& v : j.at("times"))
            config.times.push_back(detail::as_double(v, "times[]"));
    } else {
        config.times = default_time_grid();
    }

    if (j.contains("realizations"))
        config.realizations = detail::as_int(j.at("realizations"), "realizations");

    if (j.contains("pip")) {
        const nlohmann::json& p = j.at("pip");
        if (!p.is_object()) throw std::invalid_argument("config: \"pip\" must be an object");
        detail::require_known_keys(p, "\"pip\"",
                                   {"convention", "base", "enumeration_cap", "batch_size",
                                    "stderr_tol", "max_samples"});
        if (p.contains("convention"))
            config.pip.conventions =
                parse_conventions(detail::as_string(p.at("convention"), "pip.convention"));
        if (p.contains("base")) {
            const auto& b = p.at("base");
            config.pip.base = b.is_number() ? parse_base(std::to_string(detail::as_int(b, "pip.base")))
                                            : parse_base(detail::as_string(b, "pip.base"));
        }
        if (p.contains("enumeration_cap"))
            config.pip.enumeration_cap =
                detail::as_uint64(p.at("enumeration_cap"), "pip.enumeration_cap");
        if (p.contains("batch_size"))
            config.pip.batch_size = detail::as_int(p.at("batch_size"), "pip.batch_size");
        if (p.contains("stderr_tol"))
            config.pip.stderr_tol = detail::as_double(p.at("stderr_tol"), "pip.stderr_tol");
        if (p.contains("max_samples"))
            config.pip.max_samples = detail::as_uint64(p.at("max_samples"), "pip.max_samples");
    }

    if (j.contains("output")) {
        const nlohmann::json& o = j.at("output");
        if (!o.is_object()) throw std::invalid_argument("config: \"output\" must be an object");
        detail::require_known_keys(o, "\"output\"", {"prefix", "format"});
        if (o.contains("prefix"))
            config.output.prefix = detail::as_string(o.at("prefix"), "output.prefix");
        if (o.contains("format")) {
            const std::string fmt = detail::as_string(o.at("format"), "output.format");
            if (fmt == "csv") config.output.format = OutputFormat::csv;
            else if (fmt == "json") config.output.format = OutputFormat::json;
            else
                throw std::invalid_argument(
                    "config: output.format must be \"csv\" or \"json\", got \"" + fmt + "\"");
        }
    }

    config.validate();
    return config;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open \"" + path + "\"");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }
    return parse_config(j);
}

// Canonical run-defining document: everything that changes the numbers, and
// nothing that does not (output prefix/format and thread count excluded).
// nlohmann orders object keys lexicographically, so the dump is stable.
inline nlohmann::json canonical_run_json(const RunConfig& config) {
    nlohmann::json j;
    j["n_levels"] = config.params.n_levels;
    j["delta_e"] = config.params.delta_e;
    j["delta_eps"] = config.params.delta_eps;
    j["lambda"] = config.params.lambda;
    j["seed"] = config.params.seed;
    j["times"] = config.times;
    j["realizations"] = config.realizations;
    nlohmann::json p;
    std::vector<std::string> names;
    for (const Convention c : config.pip.conventions) names.emplace_back(convention_name(c));
    p["conventions"] = names;
    p["base"] = base_name(config.pip.base);
    p["enumeration_cap"] = config.pip.enumeration_cap;
    p["batch_size"] = config.pip.batch_size;
    p["stderr_tol"] = config.pip.stderr_tol;
    p["max_samples"] = config.pip.max_samples;
    j["pip"] = p;
    return j;
}

}  // namespace qpip
