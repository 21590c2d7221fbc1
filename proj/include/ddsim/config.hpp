#ifndef DDSIM_CONFIG_HPP
#define DDSIM_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddsim/coop.hpp"
#include "ddsim/detector.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/flow.hpp"
#include "ddsim/fsio.hpp"
#include "ddsim/simulator.hpp"
#include "ddsim/topology.hpp"

namespace ddsim {

/// Detector tuning: a uniform tolerance factor r, or explicit per-measure
/// factors (entries may be the string "inf" to disable a measure).
struct DetectorSettings {
    double r = 6.0;
    std::optional<std::vector<double>> tolerance_factors;

    DetectorConfig make(std::size_t measures) const {
        if (!tolerance_factors) return DetectorConfig::uniform(r, measures);
        if (tolerance_factors->size() != measures) {
            throw ConfigError("detector.tolerance_factors: expected " +
                              std::to_string(measures) + " entries, got " +
                              std::to_string(tolerance_factors->size()));
        }
        DetectorConfig cfg;
        cfg.tolerance_factors = *tolerance_factors;
        return cfg;
    }
};

/// One ROC suite entry: a named config patch applied on top of the base
/// config, simulated `runs` times with consecutive seeds.
struct RocVariant {
    std::string name;
    std::size_t runs = 1;
    nlohmann::json overrides = nlohmann::json::object();
};

struct RocSettings {
    std::vector<double> r_values{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::uint64_t base_seed = 1;
    std::vector<RocVariant> suite;
};

/// Everything a run needs, parsed from one JSON document.
struct FullConfig {
    TopologySpec topology;
    ScenarioSpec scenario;
    WindowingConfig windowing;
    DetectorSettings detector;
    CoopConfig coop;
    RocSettings roc;

    void validate(std::vector<std::string>* warnings = nullptr) const {
        topology.validate();
        scenario.validate(warnings);
        windowing.validate();
        if (!(detector.r > 0.0)) throw ConfigError("detector.r must be positive");
        if (detector.tolerance_factors) {
            for (double r : *detector.tolerance_factors) {
                if (!(r > 0.0)) {
                    throw ConfigError("detector.tolerance_factors must be positive");
                }
            }
        }
        coop.validate();
        if (roc.r_values.empty()) throw ConfigError("roc.r_values must not be empty");
        for (std::size_t i = 0; i < roc.r_values.size(); ++i) {
            if (!(roc.r_values[i] > 0.0)) {
                throw ConfigError("roc.r_values must be positive");
            }
            if (i > 0 && !(roc.r_values[i] > roc.r_values[i - 1])) {
                throw ConfigError("roc.r_values must be strictly ascending");
            }
        }
        for (const RocVariant& v : roc.suite) {
            if (v.name.empty()) throw ConfigError("roc.suite entries need a name");
            if (v.runs < 1) throw ConfigError("roc.suite runs must be >= 1");
        }
    }
};

namespace cfgdetail {

using nlohmann::json;

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(path.empty() ? "unknown config key '" + item.key() + "'"
                                           : path + ": unknown key '" + item.key() + "'");
        }
    }
}

inline double get_double(const json& obj, const std::string& path, const char* key,
                         double def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return v.get<double>();
}

inline std::int64_t get_int(const json& obj, const std::string& path, const char* key,
                            std::int64_t def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(path + "." + key + ": expected an integer");
    }
    return v.get<std::int64_t>();
}

inline std::size_t get_size(const json& obj, const std::string& path, const char* key,
                            std::size_t def) {
    const std::int64_t v = get_int(obj, path, key, static_cast<std::int64_t>(def));
    if (v < 0) throw ConfigError(path + "." + key + ": must be non-negative");
    return static_cast<std::size_t>(v);
}

inline bool get_bool(const json& obj, const std::string& path, const char* key,
                     bool def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(path + "." + key + ": expected a boolean");
    return v.get<bool>();
}

inline std::string get_string(const json& obj, const std::string& path, const char* key,
                              const std::string& def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return v.get<std::string>();
}

/// Tolerance entry: positive number or the string "inf".
inline double tolerance_entry(const json& v, const std::string& path) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "Infinity") return INFINITY;
        throw ConfigError(path + ": expected a number or \"inf\"");
    }
    if (!v.is_number()) throw ConfigError(path + ": expected a number or \"inf\"");
    return v.get<double>();
}

}  // namespace cfgdetail

/// Parse a full config document, rejecting unknown keys with their path.
/// Section defaults come from the corresponding struct defaults.
inline FullConfig parse_config(const nlohmann::json& root) {
    using namespace cfgdetail;
    require_object(root, "config");
    check_keys(root, "", {"topology", "scenario", "windowing", "detector", "coop", "roc"});

    FullConfig cfg;
    if (root.contains("topology")) {
        const auto& j = root.at("topology");
        require_object(j, "topology");
        check_keys(j, "topology",
                   {"transit_domains", "stub_domains_per_transit", "clients_total",
                    "zombies_total", "edge_routers", "victim_domain"});
        TopologySpec& t = cfg.topology;
        t.transit_domains = get_size(j, "topology", "transit_domains", t.transit_domains);
        t.stub_domains_per_transit =
            get_size(j, "topology", "stub_domains_per_transit", t.stub_domains_per_transit);
        t.clients_total = get_size(j, "topology", "clients_total", t.clients_total);
        t.zombies_total = get_size(j, "topology", "zombies_total", t.zombies_total);
        t.edge_routers = get_size(j, "topology", "edge_routers", t.edge_routers);
        t.victim_domain = get_size(j, "topology", "victim_domain", t.victim_domain);
    }
    if (root.contains("scenario")) {
        const auto& j = root.at("scenario");
        require_object(j, "scenario");
        check_keys(j, "scenario",
                   {"duration_s", "attack_start_s", "attack_end_s", "attack_mode",
                    "attack_rate_mbps", "client_request_rate", "client_flow_bytes",
                    "client_flow_rate_mbps", "victim_capacity_mbps", "warmup_s",
                    "client_patience_s", "packet_size_bytes",
                    "overwhelm_sustain_windows", "rng_seed"});
        ScenarioSpec& s = cfg.scenario;
        s.duration_s = get_double(j, "scenario", "duration_s", s.duration_s);
        s.attack_start_s = get_double(j, "scenario", "attack_start_s", s.attack_start_s);
        s.attack_end_s = get_double(j, "scenario", "attack_end_s", s.attack_end_s);
        s.attack_mode = attack_mode_from_string(
            get_string(j, "scenario", "attack_mode", to_string(s.attack_mode)));
        s.attack_rate_mbps = get_double(j, "scenario", "attack_rate_mbps", s.attack_rate_mbps);
        s.client_request_rate =
            get_double(j, "scenario", "client_request_rate", s.client_request_rate);
        s.client_flow_bytes = get_int(j, "scenario", "client_flow_bytes", s.client_flow_bytes);
        s.client_flow_rate_mbps =
            get_double(j, "scenario", "client_flow_rate_mbps", s.client_flow_rate_mbps);
        s.victim_capacity_mbps =
            get_double(j, "scenario", "victim_capacity_mbps", s.victim_capacity_mbps);
        s.warmup_s = get_double(j, "scenario", "warmup_s", s.warmup_s);
        s.client_patience_s =
            get_double(j, "scenario", "client_patience_s", s.client_patience_s);
        s.packet_size_bytes = get_int(j, "scenario", "packet_size_bytes", s.packet_size_bytes);
        s.overwhelm_sustain_windows = static_cast<int>(get_int(
            j, "scenario", "overwhelm_sustain_windows", s.overwhelm_sustain_windows));
        const std::int64_t seed = get_int(j, "scenario", "rng_seed",
                                          static_cast<std::int64_t>(s.rng_seed));
        if (seed < 0) throw ConfigError("scenario.rng_seed: must be non-negative");
        s.rng_seed = static_cast<std::uint64_t>(seed);
    }
    if (root.contains("windowing")) {
        const auto& j = root.at("windowing");
        require_object(j, "windowing");
        check_keys(j, "windowing", {"delta_ms", "measure_set"});
        cfg.windowing.delta_ms = get_int(j, "windowing", "delta_ms", cfg.windowing.delta_ms);
        if (j.contains("measure_set")) {
            const auto& m = j.at("measure_set");
            if (!m.is_array()) {
                throw ConfigError("windowing.measure_set: expected an array");
            }
            cfg.windowing.measure_set.clear();
            for (const auto& v : m) {
                if (!v.is_string()) {
                    throw ConfigError("windowing.measure_set: expected strings");
                }
                cfg.windowing.measure_set.push_back(v.get<std::string>());
            }
        }
    }
    if (root.contains("detector")) {
        const auto& j = root.at("detector");
        require_object(j, "detector");
        check_keys(j, "detector", {"r", "tolerance_factors"});
        cfg.detector.r = get_double(j, "detector", "r", cfg.detector.r);
        if (j.contains("tolerance_factors") && !j.at("tolerance_factors").is_null()) {
            const auto& arr = j.at("tolerance_factors");
            if (!arr.is_array()) {
                throw ConfigError("detector.tolerance_factors: expected an array");
            }
            std::vector<double> factors;
            for (std::size_t i = 0; i < arr.size(); ++i) {
                factors.push_back(tolerance_entry(
                    arr[i], "detector.tolerance_factors[" + std::to_string(i) + "]"));
            }
            cfg.detector.tolerance_factors = std::move(factors);
        }
    }
    if (root.contains("coop")) {
        const auto& j = root.at("coop");
        require_object(j, "coop");
        check_keys(j, "coop",
                   {"sa_threshold", "local_r", "central_r", "query_on",
                    "retention_windows"});
        CoopConfig& c = cfg.coop;
        c.sa_threshold = get_size(j, "coop", "sa_threshold", c.sa_threshold);
        c.local_r = get_double(j, "coop", "local_r", c.local_r);
        c.central_r = get_double(j, "coop", "central_r", c.central_r);
        c.query_on = get_bool(j, "coop", "query_on", c.query_on);
        c.retention_windows = get_size(j, "coop", "retention_windows", c.retention_windows);
    }
    if (root.contains("roc")) {
        const auto& j = root.at("roc");
        require_object(j, "roc");
        check_keys(j, "roc", {"r_values", "base_seed", "suite"});
        if (j.contains("r_values")) {
            const auto& arr = j.at("r_values");
            if (!arr.is_array()) throw ConfigError("roc.r_values: expected an array");
            cfg.roc.r_values.clear();
            for (const auto& v : arr) {
                if (!v.is_number()) throw ConfigError("roc.r_values: expected numbers");
                cfg.roc.r_values.push_back(v.get<double>());
            }
        }
        const std::int64_t seed = get_int(j, "roc", "base_seed",
                                          static_cast<std::int64_t>(cfg.roc.base_seed));
        if (seed < 0) throw ConfigError("roc.base_seed: must be non-negative");
        cfg.roc.base_seed = static_cast<std::uint64_t>(seed);
        if (j.contains("suite")) {
            const auto& arr = j.at("suite");
            if (!arr.is_array()) throw ConfigError("roc.suite: expected an array");
            cfg.roc.suite.clear();
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string path = "roc.suite[" + std::to_string(i) + "]";
                require_object(arr[i], path);
                check_keys(arr[i], path, {"name", "runs", "overrides"});
                RocVariant v;
                v.name = get_string(arr[i], path, "name", "");
                v.runs = get_size(arr[i], path, "runs", 1);
                if (arr[i].contains("overrides")) {
                    require_object(arr[i].at("overrides"), path + ".overrides");
                    v.overrides = arr[i].at("overrides");
                }
                cfg.roc.suite.push_back(std::move(v));
            }
        }
    }
    return cfg;
}

/// Built-in defaults: the desk-scale scenario (100 clients, 50 zombies,
/// 8 edges, 200 ms windows, r = 6) with no attack, plus a mixed
/// high/low/varied ROC suite totalling 40 runs.
inline nlohmann::json default_config_json() {
    using nlohmann::json;
    json j;
    j["topology"] = {{"transit_domains", 4},     {"stub_domains_per_transit", 2},
                     {"clients_total", 100},     {"zombies_total", 50},
                     {"edge_routers", 8},        {"victim_domain", 4}};
    j["scenario"] = {{"duration_s", 75.0},
                     {"attack_start_s", 25.0},
                     {"attack_end_s", 50.0},
                     {"attack_mode", "none"},
                     {"attack_rate_mbps", 3.0},
                     {"client_request_rate", 0.4},
                     {"client_flow_bytes", 125000},
                     {"client_flow_rate_mbps", 1.0},
                     {"victim_capacity_mbps", 100.0},
                     {"warmup_s", 5.0},
                     {"client_patience_s", 1.0},
                     {"packet_size_bytes", 1024},
                     {"overwhelm_sustain_windows", 3},
                     {"rng_seed", 1}};
    j["windowing"] = {{"delta_ms", 200}, {"measure_set", json::array({"volume", "flow"})}};
    j["detector"] = {{"r", 6.0}, {"tolerance_factors", nullptr}};
    j["coop"] = {{"sa_threshold", 0},
                 {"local_r", 6.0},
                 {"central_r", 6.0},
                 {"query_on", true},
                 {"retention_windows", 16}};
    // The sweep suite runs with ample capacity so legitimate traffic is
    // unaffected by the attack and normal windows stay clean for R_fp.
    json high = {{"name", "high_rate"},
                 {"runs", 14},
                 {"overrides",
                  {{"scenario",
                    {{"attack_mode", "constant_high"},
                     {"attack_rate_mbps", 3.0},
                     {"victim_capacity_mbps", 1000.0}}},
                   {"topology", {{"zombies_total", 50}}}}}};
    json low = {{"name", "low_rate"},
                {"runs", 13},
                {"overrides",
                 {{"scenario",
                   {{"attack_mode", "constant_low"},
                    {"attack_rate_mbps", 0.1},
                    {"victim_capacity_mbps", 1000.0}}},
                  {"topology", {{"zombies_total", 100}}}}}};
    json varied = {{"name", "varied"},
                   {"runs", 13},
                   {"overrides",
                    {{"scenario",
                      {{"attack_mode", "varied"}, {"victim_capacity_mbps", 1000.0}}},
                     {"topology", {{"zombies_total", 50}}}}}};
    j["roc"] = {{"r_values", json::array({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12})},
                {"base_seed", 1},
                {"suite", json::array({high, low, varied})}};
    return j;
}

/// Recursive object merge: override values win; nested objects merge
/// key-by-key; any non-object override replaces the base value.
inline nlohmann::json merge_overrides(nlohmann::json base, const nlohmann::json& overrides) {
    if (!base.is_object() || !overrides.is_object()) return overrides;
    for (const auto& item : overrides.items()) {
        if (base.contains(item.key())) {
            base[item.key()] = merge_overrides(base[item.key()], item.value());
        } else {
            base[item.key()] = item.value();
        }
    }
    return base;
}

/// Apply one `--set key=value` override: `key` is a dotted path; `value` is
/// parsed as JSON when possible and taken as a string otherwise.
inline void set_by_dotted_path(nlohmann::json& root, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects KEY=VALUE, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value_text = assignment.substr(eq + 1);
    nlohmann::json value = nlohmann::json::parse(value_text, nullptr, false);
    if (value.is_discarded()) value = value_text;

    nlohmann::json* node = &root;
    std::size_t begin = 0;
    while (true) {
        const std::size_t dot = key.find('.', begin);
        const std::string part = key.substr(begin, dot - begin);
        if (part.empty()) throw ConfigError("--set: empty path segment in '" + key + "'");
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        if (!node->contains(part)) (*node)[part] = nlohmann::json::object();
        node = &(*node)[part];
        if (!node->is_object()) {
            throw ConfigError("--set: '" + key.substr(0, dot) + "' is not an object");
        }
        begin = dot + 1;
    }
}

/// Load the effective config document: defaults, overlaid with the given
/// file (if any), then --set overrides in order.
inline nlohmann::json load_config_json(const std::optional<std::filesystem::path>& path,
                                       std::span<const std::string> set_overrides) {
    nlohmann::json doc = default_config_json();
    if (path) {
        nlohmann::json file = nlohmann::json::parse(read_file(*path), nullptr, false);
        if (file.is_discarded()) {
            throw ConfigError("config file is not valid JSON: " + path->string());
        }
        doc = merge_overrides(std::move(doc), file);
    }
    for (const std::string& assignment : set_overrides) {
        set_by_dotted_path(doc, assignment);
    }
    return doc;
}

/// Canonical config for manifests: the seed is lifted out so that two runs
/// of the same config at different seeds share a config hash.
inline nlohmann::json config_without_seed(nlohmann::json doc) {
    if (doc.contains("scenario") && doc["scenario"].is_object()) {
        doc["scenario"].erase("rng_seed");
    }
    if (doc.contains("roc") && doc["roc"].is_object()) {
        doc["roc"].erase("base_seed");
    }
    return doc;
}

}  // namespace ddsim

#endif  // DDSIM_CONFIG_HPP
