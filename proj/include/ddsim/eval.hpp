#ifndef DDSIM_EVAL_HPP
#define DDSIM_EVAL_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddsim/detector.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/flow.hpp"
#include "ddsim/fsio.hpp"
#include "ddsim/simulator.hpp"

namespace ddsim {

/// Contiguous run of truth-true windows, 1-based inclusive window indices.
struct AttackInterval {
    std::uint64_t first_window = 0;
    std::uint64_t last_window = 0;
};

/// Maximal contiguous truth-true runs, in order.
inline std::vector<AttackInterval> intervals_from_truth(std::span<const std::uint8_t> truth) {
    std::vector<AttackInterval> intervals;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!truth[i]) continue;
        if (!intervals.empty() && intervals.back().last_window == i) {
            intervals.back().last_window = i + 1;
        } else {
            intervals.push_back({i + 1, i + 1});
        }
    }
    return intervals;
}

/// Per-attack scoring detail.
struct AttackOutcome {
    AttackInterval interval;
    bool detected = false;
    std::optional<std::uint64_t> detection_window;
    std::optional<std::int64_t> t_d_ms;
    std::optional<bool> met_deadline;  // t_d < t_b, when t_b is known
};

/**
 * Detection metrics for one run: R_d = d/n over attack intervals,
 * R_fp = f/m over normal windows. Empty denominators score as 0 (a run with
 * no attacks has nothing to detect; a run with no normal windows has nothing
 * to false-alarm on).
 */
struct EvalReport {
    std::size_t d = 0;  // attack intervals detected
    std::size_t n = 0;  // attack intervals present
    std::size_t f = 0;  // alarms on normal windows
    std::size_t m = 0;  // normal windows
    double R_d = 0.0;
    double R_fp = 0.0;
    std::vector<AttackOutcome> attacks;
};

/**
 * Score per-window alarms against truth. An attack interval counts as
 * detected iff at least one alarm falls inside it; every alarm outside all
 * intervals is a false positive. t_d for an interval is the end time of its
 * first alarmed window; when that interval has a t_b, met_deadline records
 * t_d < t_b (strict).
 */
inline EvalReport score_run(std::span<const std::uint8_t> alarms,
                            std::span<const std::uint8_t> truth,
                            std::span<const AttackInterval> intervals,
                            std::int64_t delta_ms,
                            std::span<const std::optional<std::int64_t>> t_b_ms = {}) {
    if (alarms.size() != truth.size()) {
        throw SchemaError("alarm count " + std::to_string(alarms.size()) +
                          " does not match truth count " + std::to_string(truth.size()));
    }
    if (!t_b_ms.empty() && t_b_ms.size() != intervals.size()) {
        throw SchemaError("t_b count does not match attack interval count");
    }
    if (delta_ms <= 0) throw ConfigError("delta_ms must be positive");

    EvalReport report;
    report.n = intervals.size();
    std::vector<std::uint8_t> inside(alarms.size(), 0);
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const AttackInterval& iv = intervals[k];
        if (iv.first_window < 1 || iv.last_window < iv.first_window ||
            iv.last_window > alarms.size()) {
            throw SchemaError("attack interval " + std::to_string(k + 1) +
                              " out of range");
        }
        AttackOutcome outcome;
        outcome.interval = iv;
        for (std::uint64_t w = iv.first_window; w <= iv.last_window; ++w) {
            inside[w - 1] = 1;
            if (!outcome.detected && alarms[w - 1]) {
                outcome.detected = true;
                outcome.detection_window = w;
                outcome.t_d_ms = static_cast<std::int64_t>(w) * delta_ms;
            }
        }
        if (outcome.detected) ++report.d;
        if (!t_b_ms.empty() && t_b_ms[k]) {
            outcome.met_deadline = outcome.detected && *outcome.t_d_ms < *t_b_ms[k];
        }
        report.attacks.push_back(outcome);
    }
    for (std::size_t i = 0; i < alarms.size(); ++i) {
        if (!truth[i]) ++report.m;
        if (alarms[i] && !inside[i]) ++report.f;
    }
    report.R_d = report.n ? static_cast<double>(report.d) / static_cast<double>(report.n)
                          : 0.0;
    report.R_fp = report.m ? static_cast<double>(report.f) / static_cast<double>(report.m)
                           : 0.0;
    return report;
}

/// Per-window alarm flags from a verdict sequence.
inline std::vector<std::uint8_t> alarm_flags(std::span<const Verdict> verdicts) {
    std::vector<std::uint8_t> flags;
    flags.reserve(verdicts.size());
    for (const Verdict& v : verdicts) flags.push_back(v.is_attack ? 1 : 0);
    return flags;
}

/// Standard per-window confusion tally (cross-check for the interval-level
/// metrics; attack granularity is intervals everywhere else).
struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
};

inline Confusion window_eval_mode(std::span<const std::uint8_t> alarms,
                                  std::span<const std::uint8_t> truth) {
    if (alarms.size() != truth.size()) {
        throw SchemaError("alarm count " + std::to_string(alarms.size()) +
                          " does not match truth count " + std::to_string(truth.size()));
    }
    Confusion c;
    for (std::size_t i = 0; i < alarms.size(); ++i) {
        if (truth[i]) {
            if (alarms[i]) ++c.tp; else ++c.fn;
        } else {
            if (alarms[i]) ++c.fp; else ++c.tn;
        }
    }
    return c;
}

/// One ROC sweep point at tolerance factor r, pooled over a run suite.
struct RocRow {
    double r = 0.0;
    double R_d = 0.0;
    double R_fp = 0.0;
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t f = 0;
    std::size_t m = 0;
};

/**
 * Everything the sweep needs from one run: the profile trained on the run's
 * paired attack-free trace, the attack-trace windows, and ground truth.
 */
struct RunData {
    NormalProfile profile;
    std::vector<WindowStats> windows;
    std::vector<std::uint8_t> truth;
    std::vector<AttackInterval> intervals;
    std::optional<std::int64_t> t_b_ms;
};

/// Assemble sweep input from a paired (normal, attack) trace: train on the
/// normal trace's victim stream, evaluate on the attack trace's.
inline RunData make_run_data(const LabeledTrace& normal, const LabeledTrace& attack) {
    RunData run;
    run.profile = build_profile(normal.victim_windows, normal.windowing.measure_set,
                                normal.windowing.delta_ms);
    run.windows = attack.victim_windows;
    run.truth = attack.truth;
    run.intervals = intervals_from_truth(attack.truth);
    run.t_b_ms = attack.t_b_ms;
    return run;
}

/**
 * Detection-rate / false-positive-rate trade-off: for each tolerance factor,
 * detect over every run and pool the counts (sum of d, n, f, m across runs),
 * so small per-run denominators cannot distort the rates.
 */
inline std::vector<RocRow> roc_sweep(std::span<const RunData> runs,
                                     std::span<const double> r_values) {
    if (r_values.empty()) throw ConfigError("roc.r_values must not be empty");
    for (std::size_t i = 1; i < r_values.size(); ++i) {
        if (!(r_values[i] > r_values[i - 1])) {
            throw ConfigError("roc.r_values must be strictly ascending");
        }
    }
    if (runs.empty()) throw ConfigError("roc sweep needs at least one run");

    std::vector<RocRow> rows;
    rows.reserve(r_values.size());
    for (double r : r_values) {
        RocRow row;
        row.r = r;
        for (const RunData& run : runs) {
            const DetectionReport det = detect_stream(
                run.windows, run.profile, DetectorConfig::uniform(r, run.profile.size()));
            std::vector<std::optional<std::int64_t>> t_b;
            if (run.t_b_ms) t_b.assign(run.intervals.size(), run.t_b_ms);
            const EvalReport score =
                score_run(alarm_flags(det.verdicts), run.truth, run.intervals,
                          run.profile.delta_ms, t_b);
            row.d += score.d;
            row.n += score.n;
            row.f += score.f;
            row.m += score.m;
        }
        row.R_d = row.n ? static_cast<double>(row.d) / static_cast<double>(row.n) : 0.0;
        row.R_fp = row.m ? static_cast<double>(row.f) / static_cast<double>(row.m) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

inline constexpr const char* kRocCsvHeader = "r,R_d,R_fp,d,n,f,m";

inline void write_roc_csv(std::ostream& os, std::span<const RocRow> rows) {
    os << kRocCsvHeader << '\n';
    for (const RocRow& row : rows) {
        os << format_number(row.r) << ',' << format_number(row.R_d) << ','
           << format_number(row.R_fp) << ',' << row.d << ',' << row.n << ',' << row.f
           << ',' << row.m << '\n';
    }
}

inline void write_roc_csv_file(const std::filesystem::path& path,
                               std::span<const RocRow> rows) {
    std::ostringstream os;
    write_roc_csv(os, rows);
    write_file_atomic(path, os.str());
}

inline nlohmann::json eval_report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["d"] = report.d;
    j["n"] = report.n;
    j["f"] = report.f;
    j["m"] = report.m;
    j["R_d"] = report.R_d;
    j["R_fp"] = report.R_fp;
    j["attacks"] = nlohmann::json::array();
    for (const AttackOutcome& a : report.attacks) {
        nlohmann::json ja;
        ja["first_window"] = a.interval.first_window;
        ja["last_window"] = a.interval.last_window;
        ja["detected"] = a.detected;
        ja["detection_window"] =
            a.detection_window ? nlohmann::json(*a.detection_window) : nlohmann::json();
        ja["t_d_ms"] = a.t_d_ms ? nlohmann::json(*a.t_d_ms) : nlohmann::json();
        ja["met_deadline"] =
            a.met_deadline ? nlohmann::json(*a.met_deadline) : nlohmann::json();
        j["attacks"].push_back(std::move(ja));
    }
    return j;
}

}  // namespace ddsim

#endif  // DDSIM_EVAL_HPP
