#ifndef DDSIM_DETECTOR_HPP
#define DDSIM_DETECTOR_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddsim/errors.hpp"
#include "ddsim/flow.hpp"
#include "ddsim/fsio.hpp"

namespace ddsim {

/**
 * Learned normal traffic profile: per-measure mean and standard deviation
 * over l attack-free training windows. For the standard two-measure
 * configuration the means are the normal volume and flow values and the
 * deviations are sigma_V and sigma_F.
 */
struct NormalProfile {
    std::vector<std::string> measure_names;
    std::vector<double> means;
    std::vector<double> std_devs;
    std::size_t training_window_count = 0;
    std::int64_t delta_ms = 0;

    std::size_t size() const { return means.size(); }
};

/// Per-measure tolerance factors. Anomaly combination is fixed OR semantics:
/// any single measure exceeding its threshold flags the window.
struct DetectorConfig {
    std::vector<double> tolerance_factors;

    /// Single tolerance factor replicated across all measures (the standard
    /// configuration; defaults to r = 6).
    static DetectorConfig uniform(double r, std::size_t measures) {
        DetectorConfig cfg;
        cfg.tolerance_factors.assign(measures, r);
        return cfg;
    }

    void validate() const {
        if (tolerance_factors.empty()) {
            throw ConfigError("detector.tolerance_factors must not be empty");
        }
        for (double r : tolerance_factors) {
            if (!(r > 0.0)) {
                throw ConfigError("detector.tolerance_factors must be positive");
            }
        }
    }
};

/// Per-measure detection thresholds, xi[j] = r_j * sigma_j.
struct Thresholds {
    std::vector<double> xi;
};

/// Outcome of checking one window against the profile.
struct Verdict {
    bool is_attack = false;
    std::vector<std::string> triggered_measures;
    std::vector<double> deviations;  // signed observed - normal, per measure
};

/// Verdict stream plus the first detection, if any.
struct DetectionReport {
    std::vector<Verdict> verdicts;
    std::optional<std::uint64_t> first_detection_window;
    std::optional<std::int64_t> detection_time_ms;
};

/**
 * Learn the normal profile from attack-free training windows: per-measure
 * arithmetic mean and sample standard deviation (divisor l-1).
 *
 * measure_names may be left empty; two-measure input then gets the standard
 * volume/flow names, other arities get generic ones.
 */
inline NormalProfile build_profile(std::span<const WindowStats> training,
                                   std::vector<std::string> measure_names = {},
                                   std::int64_t delta_ms = 200) {
    const std::size_t l = training.size();
    if (l < 2) {
        throw InsufficientTrainingError(
            "need at least 2 training windows, got " + std::to_string(l) +
            " (standard deviation undefined)");
    }
    const std::size_t arity = training[0].measures.size();
    if (arity == 0) throw SchemaError("training windows carry no measures");
    for (const WindowStats& w : training) {
        if (w.measures.size() != arity) {
            throw SchemaError("mixed measure arity in training windows");
        }
    }
    if (measure_names.empty()) {
        if (arity == 2) {
            measure_names = {"volume", "flow"};
        } else {
            for (std::size_t j = 0; j < arity; ++j) {
                measure_names.push_back("measure_" + std::to_string(j));
            }
        }
    }
    if (measure_names.size() != arity) {
        throw SchemaError("measure name count does not match measure arity");
    }

    NormalProfile profile;
    profile.measure_names = std::move(measure_names);
    profile.training_window_count = l;
    profile.delta_ms = delta_ms;
    profile.means.assign(arity, 0.0);
    profile.std_devs.assign(arity, 0.0);

    for (std::size_t j = 0; j < arity; ++j) {
        double sum = 0.0;
        for (const WindowStats& w : training) sum += w.measures[j];
        const double mean = sum / static_cast<double>(l);
        double sq = 0.0;
        for (const WindowStats& w : training) {
            const double d = w.measures[j] - mean;
            sq += d * d;
        }
        profile.means[j] = mean;
        profile.std_devs[j] = std::sqrt(sq / static_cast<double>(l - 1));
    }
    return profile;
}

/// xi[j] = r_j * sigma_j, exactly. An infinite tolerance factor disables the
/// measure (threshold +inf even when sigma is 0).
inline Thresholds compute_thresholds(const NormalProfile& profile,
                                     const DetectorConfig& cfg) {
    cfg.validate();
    if (cfg.tolerance_factors.size() != profile.size()) {
        throw SchemaError("tolerance factor count " +
                          std::to_string(cfg.tolerance_factors.size()) +
                          " does not match profile arity " +
                          std::to_string(profile.size()));
    }
    Thresholds thr;
    thr.xi.reserve(profile.size());
    for (std::size_t j = 0; j < profile.size(); ++j) {
        const double r = cfg.tolerance_factors[j];
        thr.xi.push_back(std::isinf(r) ? r : r * profile.std_devs[j]);
    }
    return thr;
}

/**
 * Check one window: the window is anomalous iff any measure's deviation
 * observed - normal strictly exceeds its threshold. A deviation exactly
 * equal to the threshold does not trigger.
 */
inline Verdict detect_window(const WindowStats& stats, const NormalProfile& profile,
                             const Thresholds& thr) {
    if (stats.measures.size() != profile.size() || thr.xi.size() != profile.size()) {
        throw SchemaError("measure arity mismatch between window (" +
                          std::to_string(stats.measures.size()) + "), profile (" +
                          std::to_string(profile.size()) + ") and thresholds (" +
                          std::to_string(thr.xi.size()) + ")");
    }
    Verdict v;
    v.deviations.reserve(profile.size());
    for (std::size_t j = 0; j < profile.size(); ++j) {
        const double dev = stats.measures[j] - profile.means[j];
        v.deviations.push_back(dev);
        if (dev > thr.xi[j]) {
            v.triggered_measures.push_back(profile.measure_names[j]);
        }
    }
    v.is_attack = !v.triggered_measures.empty();
    return v;
}

/// Apply detect_window to every window in order and record the first attack
/// verdict's window and time (t_d = window_index * delta).
inline DetectionReport detect_stream(std::span<const WindowStats> windows,
                                     const NormalProfile& profile,
                                     const DetectorConfig& cfg) {
    const Thresholds thr = compute_thresholds(profile, cfg);
    DetectionReport report;
    report.verdicts.reserve(windows.size());
    for (const WindowStats& w : windows) {
        Verdict v = detect_window(w, profile, thr);
        if (v.is_attack && !report.first_detection_window) {
            report.first_detection_window = w.window_index;
            report.detection_time_ms =
                static_cast<std::int64_t>(w.window_index) * profile.delta_ms;
        }
        report.verdicts.push_back(std::move(v));
    }
    return report;
}

// --- profile persistence ----------------------------------------------------

inline nlohmann::json profile_to_json(const NormalProfile& profile) {
    nlohmann::json measures = nlohmann::json::array();
    for (std::size_t j = 0; j < profile.size(); ++j) {
        measures.push_back({{"name", profile.measure_names[j]},
                            {"mean", profile.means[j]},
                            {"std_dev", profile.std_devs[j]}});
    }
    return {{"delta_ms", profile.delta_ms},
            {"training_window_count", profile.training_window_count},
            {"measures", measures}};
}

inline NormalProfile profile_from_json(const nlohmann::json& j) {
    NormalProfile profile;
    try {
        profile.delta_ms = j.at("delta_ms").get<std::int64_t>();
        profile.training_window_count = j.at("training_window_count").get<std::size_t>();
        for (const auto& m : j.at("measures")) {
            profile.measure_names.push_back(m.at("name").get<std::string>());
            profile.means.push_back(m.at("mean").get<double>());
            profile.std_devs.push_back(m.at("std_dev").get<double>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed profile JSON: ") + e.what());
    }
    if (profile.means.empty()) throw SchemaError("profile has no measures");
    for (double s : profile.std_devs) {
        if (!(s >= 0.0)) throw SchemaError("profile std_dev must be non-negative");
    }
    return profile;
}

inline void save_profile(const std::filesystem::path& path, const NormalProfile& profile) {
    write_file_atomic(path, profile_to_json(profile).dump(2) + "\n");
}

inline NormalProfile load_profile(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("cannot parse profile " + path.string() + ": " + e.what());
    }
    return profile_from_json(j);
}

// --- verdict emission ---------------------------------------------------------

/// Verdict stream CSV for the standard two-measure configuration:
/// window_index,is_attack,volume_deviation,flow_deviation,triggered
/// (triggered measures joined by '|').
inline void write_verdicts_csv(std::ostream& out, std::span<const WindowStats> windows,
                               const DetectionReport& report) {
    if (windows.size() != report.verdicts.size()) {
        throw SchemaError("verdict count does not match window count");
    }
    out << "window_index,is_attack,volume_deviation,flow_deviation,triggered\n";
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const Verdict& v = report.verdicts[i];
        if (v.deviations.size() != 2) {
            throw SchemaError("verdict CSV requires the two-measure configuration");
        }
        out << windows[i].window_index << ',' << (v.is_attack ? 1 : 0) << ','
            << format_number(v.deviations[0]) << ',' << format_number(v.deviations[1])
            << ',';
        for (std::size_t k = 0; k < v.triggered_measures.size(); ++k) {
            if (k > 0) out << '|';
            out << v.triggered_measures[k];
        }
        out << '\n';
    }
}

inline void write_verdicts_csv_file(const std::filesystem::path& path,
                                    std::span<const WindowStats> windows,
                                    const DetectionReport& report) {
    std::ostringstream ss;
    write_verdicts_csv(ss, windows, report);
    write_file_atomic(path, ss.str());
}

}  // namespace ddsim

#endif  // DDSIM_DETECTOR_HPP
