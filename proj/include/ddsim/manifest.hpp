#ifndef DDSIM_MANIFEST_HPP
#define DDSIM_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ddsim/config.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/fsio.hpp"

namespace ddsim {

inline constexpr const char* kArtifactVersion = "ddsim 1.0.0";
inline constexpr const char* kManifestFileName = "manifest.json";

/**
 * Provenance record written once per output directory. The embedded config
 * is seedless (the seed is its own field), so two runs differing only in
 * seed share a config hash, and a re-run of (config, seed) must reproduce
 * every output hash byte-for-byte.
 *
 * `timestamps` describes the simulated trace's time span (all derived from
 * config and input data, never from the wall clock, so manifests are as
 * reproducible as the data they describe).
 */
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::string config_hash;
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> inputs;   // given path -> content hash
    std::map<std::string, std::string> outputs;  // file name -> content hash
    nlohmann::json timestamps = nlohmann::json::object();
};

/// Start a manifest from the effective (seed-bearing) config document.
inline RunManifest make_manifest(const std::string& command,
                                 const nlohmann::json& effective_config,
                                 std::optional<std::uint64_t> seed) {
    RunManifest m;
    m.command = command;
    m.config = config_without_seed(effective_config);
    m.config_hash = to_hex(fnv1a64(m.config.dump()));
    m.seed = seed;
    return m;
}

inline void record_input(RunManifest& m, const std::filesystem::path& path) {
    m.inputs[path.string()] = hash_file(path);
}

/// Hash an already-written output file (named relative to the run dir).
inline void record_output(RunManifest& m, const std::filesystem::path& dir,
                          const std::string& name) {
    m.outputs[name] = hash_file(dir / name);
}

/// Simulated-time span facts for a simulate/coop run.
inline nlohmann::json trace_timestamps(const FullConfig& cfg) {
    nlohmann::json t;
    t["trace_start_ms"] = 0;
    t["trace_end_ms"] = seconds_to_ms(cfg.scenario.duration_s);
    t["delta_ms"] = cfg.windowing.delta_ms;
    if (cfg.scenario.attack_mode != AttackMode::none) {
        t["attack_start_ms"] = seconds_to_ms(cfg.scenario.attack_start_s);
        t["attack_end_ms"] = seconds_to_ms(cfg.scenario.attack_end_s);
    } else {
        t["attack_start_ms"] = nullptr;
        t["attack_end_ms"] = nullptr;
    }
    return t;
}

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json j;
    j["artifact_version"] = kArtifactVersion;
    j["command"] = m.command;
    j["config"] = m.config;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json();
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["timestamps"] = m.timestamps;
    return j;
}

inline void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
    write_file_atomic(dir / kManifestFileName, manifest_to_json(m).dump(2) + "\n");
}

}  // namespace ddsim

#endif  // DDSIM_MANIFEST_HPP
