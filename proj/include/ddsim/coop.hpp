#ifndef DDSIM_COOP_HPP
#define DDSIM_COOP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddsim/detector.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/flow.hpp"
#include "ddsim/fsio.hpp"
#include "ddsim/simulator.hpp"

namespace ddsim {

/**
 * Message from a local (edge) detector to the central detector: the edge's
 * local threshold fired in window `window_index`. Carries the edge's observed
 * measure vector and its active flow list so the central detector can
 * aggregate without re-querying the common case.
 */
struct SuspiciousAlarm {
    std::string detector_id;
    std::uint64_t window_index = 0;
    std::vector<double> measures;
    std::vector<std::string> active_flows;
    std::vector<std::string> triggered_measures;  // never empty on a real SA
};

/**
 * Cooperative detection tuning. sa_threshold = 0 means "derive from the
 * topology": k_sa = ceil(edges / 4), so the quorum scales with the number of
 * monitoring points.
 */
struct CoopConfig {
    std::size_t sa_threshold = 0;
    double local_r = 6.0;
    double central_r = 6.0;
    bool query_on = true;
    std::size_t retention_windows = 16;  // Q: windows each edge keeps queryable

    std::size_t effective_sa_threshold(std::size_t edge_count) const {
        if (sa_threshold > 0) return sa_threshold;
        return (edge_count + 3) / 4;
    }

    void validate() const {
        if (!(local_r > 0.0)) throw ConfigError("coop.local_r must be positive");
        if (!(central_r > 0.0)) throw ConfigError("coop.central_r must be positive");
        if (retention_windows < 1) {
            throw ConfigError("coop.retention_windows must be >= 1");
        }
    }
};

enum class ConfirmVia { none, sa_quorum, central_check, query_confirmed };

inline const char* to_string(ConfirmVia v) {
    switch (v) {
        case ConfirmVia::none: return "none";
        case ConfirmVia::sa_quorum: return "sa_quorum";
        case ConfirmVia::central_check: return "central_check";
        case ConfirmVia::query_confirmed: return "query_confirmed";
    }
    return "none";
}

/// Central detector's per-window decision.
struct CentralVerdict {
    std::uint64_t window_index = 0;
    bool confirmed = false;
    std::size_t sa_count = 0;  // distinct alarming edges
    ConfirmVia via = ConfirmVia::none;
    std::uint64_t merged_flow_count = 0;  // union over all edge data seen this window
};

/// One protocol message, kept for JSONL export of a run.
struct Message {
    std::string type;  // "sa" | "query" | "resp"
    std::string detector_id;
    std::uint64_t window_index = 0;
    std::vector<double> measures;
    std::vector<std::string> flows;
};

/// Message/state counters: the evidence that overhead lands on the edges.
struct CoopReport {
    std::size_t sas_sent = 0;
    std::size_t queries_issued = 0;
    std::size_t responses_received = 0;
    std::size_t confirmations = 0;
    std::optional<std::uint64_t> first_confirmation_window;
    std::optional<std::int64_t> confirmation_time_ms;
    std::size_t edge_count = 0;
    std::size_t window_count = 0;
    // Largest per-window working set at the central detector: reporting edges
    // plus distinct flow ids received. Bounded by topology + window content,
    // never by trace length.
    std::size_t max_central_window_state = 0;
    std::vector<std::size_t> edge_retained_windows;  // per edge, capped at Q
};

/// Canonical edge detector id for edge index i ("edge_000", "edge_001", ...).
inline std::string edge_label(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "edge_%03zu", i);
    return buf;
}

/**
 * Local detection at one edge: run the standard window check against the
 * edge's own profile at tolerance local_r; on exceedance emit a
 * SuspiciousAlarm carrying measures and the active flow list.
 */
inline std::optional<SuspiciousAlarm> local_detect(const WindowStats& edge_stats,
                                                   const NormalProfile& edge_profile,
                                                   const CoopConfig& cfg,
                                                   std::string detector_id = {}) {
    cfg.validate();
    const Thresholds thr = compute_thresholds(
        edge_profile, DetectorConfig::uniform(cfg.local_r, edge_profile.size()));
    Verdict v = detect_window(edge_stats, edge_profile, thr);
    if (!v.is_attack) return std::nullopt;

    SuspiciousAlarm sa;
    sa.detector_id = std::move(detector_id);
    sa.window_index = edge_stats.window_index;
    sa.measures = edge_stats.measures;
    sa.active_flows.reserve(edge_stats.per_flow_bytes.size());
    for (const auto& [flow_id, bytes] : edge_stats.per_flow_bytes) {
        sa.active_flows.push_back(flow_id);
    }
    sa.triggered_measures = std::move(v.triggered_measures);
    return sa;
}

/// Global distinct-flow count: cardinality of the union of the given flow-id
/// lists (duplicate ids across edges count once).
inline std::uint64_t merge_flow_lists(std::span<const std::vector<std::string>> lists) {
    std::set<std::string> merged;
    for (const auto& list : lists) merged.insert(list.begin(), list.end());
    return merged.size();
}

/**
 * Per-edge retained state plus the local detector: observe() ingests the
 * next window (keeping the last Q windows queryable) and runs local
 * detection; query() serves the central detector's active queries.
 */
class EdgeDetector {
  public:
    EdgeDetector(std::string id, NormalProfile profile, CoopConfig cfg)
        : id_(std::move(id)), profile_(std::move(profile)), cfg_(cfg) {
        cfg_.validate();
        thresholds_ = compute_thresholds(
            profile_, DetectorConfig::uniform(cfg_.local_r, profile_.size()));
    }

    const std::string& id() const { return id_; }
    std::size_t retained() const { return retained_.size(); }

    std::optional<SuspiciousAlarm> observe(const WindowStats& stats) {
        retained_.push_back(stats);
        while (retained_.size() > cfg_.retention_windows) retained_.pop_front();
        return local_detect(stats, profile_, cfg_, id_);
    }

    /// Stats for window `window_index`, regardless of whether the local
    /// threshold fired there. Windows older than the retention horizon (or
    /// not yet observed) are gone.
    const WindowStats& query(std::uint64_t window_index) const {
        for (const WindowStats& w : retained_) {
            if (w.window_index == window_index) return w;
        }
        throw StaleWindowError("window " + std::to_string(window_index) +
                               " not retained at " + id_ + " (keeps last " +
                               std::to_string(cfg_.retention_windows) + ")");
    }

  private:
    std::string id_;
    NormalProfile profile_;
    Thresholds thresholds_;
    CoopConfig cfg_;
    std::deque<WindowStats> retained_;
};

/// Response to an active query: the edge's window stats and active flows.
struct QueryResponse {
    std::string detector_id;
    std::vector<double> measures;
    std::vector<std::string> active_flows;
};

/// Query transport: given (edge id, window index), return that edge's data.
/// Throws UnknownEdgeError / StaleWindowError like EdgeDetector::query.
using QueryFn = std::function<QueryResponse(const std::string&, std::uint64_t)>;

namespace detail {

// Aggregate edge-reported measure vectors into a central WindowStats:
// "flow" is the union cardinality of the reported flow lists, every other
// measure is additive across edges.
inline WindowStats aggregate_edge_data(
    std::uint64_t window_index, const NormalProfile& central_profile,
    std::span<const std::vector<double>> measure_rows,
    std::span<const std::vector<std::string>> flow_lists) {
    WindowStats agg;
    agg.window_index = window_index;
    agg.window_end_ms = static_cast<std::int64_t>(window_index) * central_profile.delta_ms;
    const std::uint64_t merged = merge_flow_lists(flow_lists);
    agg.flow_count = merged;
    agg.measures.assign(central_profile.size(), 0.0);
    for (std::size_t j = 0; j < central_profile.size(); ++j) {
        if (central_profile.measure_names[j] == "flow") {
            agg.measures[j] = static_cast<double>(merged);
            continue;
        }
        double sum = 0.0;
        for (const auto& row : measure_rows) sum += row[j];
        agg.measures[j] = sum;
        if (central_profile.measure_names[j] == "volume") {
            agg.volume_bytes = static_cast<std::uint64_t>(std::llround(sum));
        }
    }
    return agg;
}

}  // namespace detail

/**
 * One central-detector step for window omega.
 *
 * Confirmation paths, in order:
 *  (a) sa_quorum — SAs from >= k_sa distinct edges;
 *  (b) central_check — the standard window check at central_r over the data
 *      aggregated from the SAs fires (sound even on partial data: adding
 *      edges only raises both measures, so a partial exceedance persists);
 *  (c) query_confirmed — edge data is incomplete, the access router's check
 *      on its own window statistics fires, and query_on: query the silent
 *      edges and re-run the check on the complete merged data.
 *
 * The access router's own statistics arm the query path only; confirmation
 * always comes from edge-reported data.
 */
inline CentralVerdict central_step(const WindowStats& own_stats,
                                   std::span<const SuspiciousAlarm> sas,
                                   const NormalProfile& central_profile,
                                   const CoopConfig& cfg,
                                   std::span<const std::string> all_edges,
                                   const QueryFn& query = nullptr,
                                   std::size_t* queries_issued = nullptr) {
    cfg.validate();
    CentralVerdict verdict;
    verdict.window_index = own_stats.window_index;

    std::set<std::string> alarmed;
    std::vector<std::vector<double>> measure_rows;
    std::vector<std::vector<std::string>> flow_lists;
    for (const SuspiciousAlarm& sa : sas) {
        if (sa.window_index != own_stats.window_index) {
            throw ProtocolError("suspicious alarm for window " +
                                std::to_string(sa.window_index) +
                                " delivered to central step for window " +
                                std::to_string(own_stats.window_index));
        }
        if (sa.triggered_measures.empty()) {
            throw ProtocolError("suspicious alarm from " + sa.detector_id +
                                " carries no triggered measures");
        }
        if (sa.measures.size() != central_profile.size()) {
            throw ProtocolError("suspicious alarm from " + sa.detector_id +
                                " has measure arity " +
                                std::to_string(sa.measures.size()) + ", expected " +
                                std::to_string(central_profile.size()));
        }
        if (alarmed.insert(sa.detector_id).second) {
            measure_rows.push_back(sa.measures);
            flow_lists.push_back(sa.active_flows);
        }
    }
    verdict.sa_count = alarmed.size();
    verdict.merged_flow_count = merge_flow_lists(flow_lists);

    const std::size_t k_sa = cfg.effective_sa_threshold(all_edges.size());
    if (verdict.sa_count >= k_sa) {
        verdict.confirmed = true;
        verdict.via = ConfirmVia::sa_quorum;
        return verdict;
    }

    const Thresholds central_thr = compute_thresholds(
        central_profile, DetectorConfig::uniform(cfg.central_r, central_profile.size()));
    if (!measure_rows.empty()) {
        const WindowStats agg = detail::aggregate_edge_data(
            own_stats.window_index, central_profile, measure_rows, flow_lists);
        if (detect_window(agg, central_profile, central_thr).is_attack) {
            verdict.confirmed = true;
            verdict.via = ConfirmVia::central_check;
            return verdict;
        }
    }

    const bool complete = alarmed.size() == all_edges.size();
    if (!complete && cfg.query_on && query &&
        detect_window(own_stats, central_profile, central_thr).is_attack) {
        for (const std::string& edge : all_edges) {
            if (alarmed.contains(edge)) continue;
            if (queries_issued) ++*queries_issued;
            QueryResponse resp = query(edge, own_stats.window_index);
            if (resp.measures.size() != central_profile.size()) {
                throw ProtocolError("query response from " + edge +
                                    " has measure arity " +
                                    std::to_string(resp.measures.size()) +
                                    ", expected " +
                                    std::to_string(central_profile.size()));
            }
            measure_rows.push_back(std::move(resp.measures));
            flow_lists.push_back(std::move(resp.active_flows));
        }
        const WindowStats agg = detail::aggregate_edge_data(
            own_stats.window_index, central_profile, measure_rows, flow_lists);
        verdict.merged_flow_count = agg.flow_count;
        if (detect_window(agg, central_profile, central_thr).is_attack) {
            verdict.confirmed = true;
            verdict.via = ConfirmVia::query_confirmed;
        }
    }
    return verdict;
}

/// Central profile (victim stream) plus one profile per edge, each trained
/// on its own attack-free windows.
struct CoopProfiles {
    NormalProfile central;
    std::vector<NormalProfile> edges;
};

/// Train central and per-edge profiles from an attack-free trace. Refuses
/// traces with any truth-true window.
inline CoopProfiles train_coop_profiles(const LabeledTrace& normal_trace) {
    for (std::size_t i = 0; i < normal_trace.truth.size(); ++i) {
        if (normal_trace.truth[i]) {
            throw ContaminatedTrainingError(
                "training trace contains an attack window (index " +
                std::to_string(i + 1) + ")");
        }
    }
    CoopProfiles profiles;
    profiles.central =
        build_profile(normal_trace.victim_windows, normal_trace.windowing.measure_set,
                      normal_trace.windowing.delta_ms);
    profiles.edges.reserve(normal_trace.edge_windows.size());
    for (const auto& windows : normal_trace.edge_windows) {
        profiles.edges.push_back(build_profile(windows,
                                               normal_trace.windowing.measure_set,
                                               normal_trace.windowing.delta_ms));
    }
    return profiles;
}

/// Full output of a cooperative run.
struct CoopResult {
    std::vector<CentralVerdict> verdicts;
    CoopReport report;
    std::vector<Message> messages;
};

/**
 * Drive the cooperative pipeline over a simulated trace: per window, every
 * edge detector observes its edge stream (emitting SAs), then the central
 * detector runs one step. Message delivery is a synchronous in-window bus:
 * SAs and query responses for window omega arrive before central_step(omega).
 * Edges are processed in detector-id order, so the run is deterministic.
 */
inline CoopResult run_coop_simulation(const LabeledTrace& trace,
                                      const CoopProfiles& profiles,
                                      const CoopConfig& cfg) {
    cfg.validate();
    const std::size_t edge_count = trace.edge_windows.size();
    if (edge_count == 0) throw SchemaError("trace carries no edge streams");
    if (profiles.edges.size() != edge_count) {
        throw SchemaError("profile count " + std::to_string(profiles.edges.size()) +
                          " does not match edge count " + std::to_string(edge_count));
    }
    const std::size_t window_count = trace.victim_windows.size();
    for (const auto& windows : trace.edge_windows) {
        if (windows.size() != window_count) {
            throw SchemaError("edge window count does not match victim window count");
        }
    }

    std::vector<std::string> edge_ids;
    std::vector<EdgeDetector> edges;
    edge_ids.reserve(edge_count);
    edges.reserve(edge_count);
    for (std::size_t e = 0; e < edge_count; ++e) {
        edge_ids.push_back(edge_label(e));
        edges.emplace_back(edge_ids.back(), profiles.edges[e], cfg);
    }

    CoopResult result;
    result.verdicts.reserve(window_count);
    result.report.edge_count = edge_count;
    result.report.window_count = window_count;

    const QueryFn query = [&](const std::string& edge_id,
                              std::uint64_t window_index) -> QueryResponse {
        std::size_t e = edge_count;
        for (std::size_t i = 0; i < edge_count; ++i) {
            if (edge_ids[i] == edge_id) {
                e = i;
                break;
            }
        }
        if (e == edge_count) throw UnknownEdgeError("no edge detector '" + edge_id + "'");
        result.messages.push_back({"query", edge_id, window_index, {}, {}});
        const WindowStats& stats = edges[e].query(window_index);
        QueryResponse resp;
        resp.detector_id = edge_id;
        resp.measures = stats.measures;
        resp.active_flows.reserve(stats.per_flow_bytes.size());
        for (const auto& [flow_id, bytes] : stats.per_flow_bytes) {
            resp.active_flows.push_back(flow_id);
        }
        result.messages.push_back(
            {"resp", edge_id, window_index, resp.measures, resp.active_flows});
        ++result.report.responses_received;
        return resp;
    };

    for (std::size_t w = 0; w < window_count; ++w) {
        std::vector<SuspiciousAlarm> sas;
        for (std::size_t e = 0; e < edge_count; ++e) {
            if (auto sa = edges[e].observe(trace.edge_windows[e][w])) {
                result.messages.push_back({"sa", sa->detector_id, sa->window_index,
                                           sa->measures, sa->active_flows});
                ++result.report.sas_sent;
                sas.push_back(std::move(*sa));
            }
        }
        CentralVerdict verdict =
            central_step(trace.victim_windows[w], sas, profiles.central, cfg, edge_ids,
                         query, &result.report.queries_issued);
        if (verdict.confirmed) {
            ++result.report.confirmations;
            if (!result.report.first_confirmation_window) {
                result.report.first_confirmation_window = verdict.window_index;
                result.report.confirmation_time_ms =
                    trace.victim_windows[w].window_end_ms;
            }
        }
        const std::size_t state =
            verdict.sa_count + static_cast<std::size_t>(verdict.merged_flow_count);
        result.report.max_central_window_state =
            std::max(result.report.max_central_window_state, state);
        result.verdicts.push_back(verdict);
    }

    result.report.edge_retained_windows.reserve(edge_count);
    for (const EdgeDetector& e : edges) {
        result.report.edge_retained_windows.push_back(e.retained());
    }
    return result;
}

inline nlohmann::json coop_report_to_json(const CoopReport& report) {
    nlohmann::json j;
    j["sas_sent"] = report.sas_sent;
    j["queries_issued"] = report.queries_issued;
    j["responses_received"] = report.responses_received;
    j["confirmations"] = report.confirmations;
    if (report.first_confirmation_window) {
        j["first_confirmation_window"] = *report.first_confirmation_window;
        j["confirmation_time_ms"] = *report.confirmation_time_ms;
    } else {
        j["first_confirmation_window"] = nullptr;
        j["confirmation_time_ms"] = nullptr;
    }
    j["edge_count"] = report.edge_count;
    j["window_count"] = report.window_count;
    j["max_central_window_state"] = report.max_central_window_state;
    j["edge_retained_windows"] = report.edge_retained_windows;
    return j;
}

/// JSON-lines export of a message log, one message per line.
inline std::string messages_to_jsonl(std::span<const Message> messages) {
    std::string out;
    for (const Message& m : messages) {
        nlohmann::json j;
        j["type"] = m.type;
        j["detector_id"] = m.detector_id;
        j["window_index"] = m.window_index;
        j["measures"] = m.measures;
        j["flows"] = m.flows;
        out += j.dump();
        out += '\n';
    }
    return out;
}

inline constexpr const char* kCentralVerdictsCsvHeader =
    "window_index,confirmed,sa_count,via,merged_flow_count";

inline void write_central_verdicts_csv(std::ostream& os,
                                       std::span<const CentralVerdict> verdicts) {
    os << kCentralVerdictsCsvHeader << '\n';
    for (const CentralVerdict& v : verdicts) {
        os << v.window_index << ',' << (v.confirmed ? 1 : 0) << ',' << v.sa_count << ','
           << to_string(v.via) << ',' << v.merged_flow_count << '\n';
    }
}

inline void write_central_verdicts_csv_file(const std::filesystem::path& path,
                                            std::span<const CentralVerdict> verdicts) {
    std::ostringstream os;
    write_central_verdicts_csv(os, verdicts);
    write_file_atomic(path, os.str());
}

}  // namespace ddsim

#endif  // DDSIM_COOP_HPP
