#ifndef DDSIM_FLOW_HPP
#define DDSIM_FLOW_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ddsim/errors.hpp"

namespace ddsim {

/**
 * One flow's byte/packet contribution inside a time slice. These are the
 * atoms every monitoring point aggregates over.
 *
 * flow_id is opaque: the simulator assigns one id per client transfer or
 * zombie connection; real 5-tuple parsing is an ingestion concern.
 */
struct FlowRecord {
    std::int64_t timestamp_ms = 0;
    std::string flow_id;
    std::int64_t bytes = 0;
    std::int64_t packets = 0;

    friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

/// Ordering used to canonicalize record streams before windowing.
inline bool record_less(const FlowRecord& a, const FlowRecord& b) {
    if (a.timestamp_ms != b.timestamp_ms) return a.timestamp_ms < b.timestamp_ms;
    if (a.flow_id != b.flow_id) return a.flow_id < b.flow_id;
    if (a.bytes != b.bytes) return a.bytes < b.bytes;
    return a.packets < b.packets;
}

/// Monitoring window configuration: tumbling windows of length delta_ms and
/// an ordered set of measure names. Only "volume" and "flow" are implemented;
/// the vector stays ordered so the detector generalizes to m measures.
struct WindowingConfig {
    std::int64_t delta_ms = 200;
    std::vector<std::string> measure_set{"volume", "flow"};

    void validate() const {
        if (delta_ms <= 0) {
            throw ConfigError("windowing.delta_ms must be positive");
        }
        if (measure_set.empty()) {
            throw ConfigError("windowing.measure_set must not be empty");
        }
        for (std::size_t i = 0; i < measure_set.size(); ++i) {
            const std::string& name = measure_set[i];
            if (name != "volume" && name != "flow") {
                throw ConfigError("windowing.measure_set[" + std::to_string(i) +
                                  "]: unknown measure '" + name + "'");
            }
            for (std::size_t k = i + 1; k < measure_set.size(); ++k) {
                if (measure_set[k] == name) {
                    throw ConfigError("windowing.measure_set: duplicate measure '" +
                                      name + "'");
                }
            }
        }
    }
};

/**
 * Aggregated measures for one monitoring window.
 *
 * For windows built by window_partition: volume_bytes is the sum over
 * per_flow_bytes, flow_count its key cardinality, and measures holds the
 * configured measure values in order. Windows read back from a stats CSV
 * carry an empty per_flow_bytes map (the file does not preserve it).
 */
struct WindowStats {
    std::uint64_t window_index = 0;  // 1-based
    std::int64_t window_end_ms = 0;  // == window_index * delta_ms
    std::uint64_t volume_bytes = 0;
    std::uint64_t flow_count = 0;
    std::map<std::string, std::uint64_t> per_flow_bytes;
    std::vector<double> measures;
};

/// Window owning timestamp t under half-open windows ((w-1)*delta, w*delta].
/// t = 0 belongs to window 1.
inline std::uint64_t window_index_for(std::int64_t t_ms, std::int64_t delta_ms) {
    if (t_ms <= 0) return 1;
    return static_cast<std::uint64_t>((t_ms - 1) / delta_ms + 1);
}

/// Throws RejectedRecordError if the record violates the field invariants.
/// `line` is a 1-based source position for diagnostics (0 if in-memory).
inline void validate_record(const FlowRecord& rec, std::size_t line) {
    if (rec.timestamp_ms < 0) {
        throw RejectedRecordError(line, "negative timestamp " +
                                            std::to_string(rec.timestamp_ms));
    }
    if (rec.bytes < 0) {
        throw RejectedRecordError(line, "negative byte count " +
                                            std::to_string(rec.bytes));
    }
    if (rec.packets < 0) {
        throw RejectedRecordError(line, "negative packet count " +
                                            std::to_string(rec.packets));
    }
    if (rec.bytes == 0 && rec.packets != 0) {
        throw RejectedRecordError(line, "zero bytes with nonzero packet count");
    }
    if (rec.flow_id.empty()) {
        throw RejectedRecordError(line, "empty flow id");
    }
}

namespace detail {

inline double measure_value(const std::string& name, const WindowStats& w) {
    if (name == "volume") return static_cast<double>(w.volume_bytes);
    if (name == "flow") return static_cast<double>(w.flow_count);
    throw ConfigError("unknown measure '" + name + "'");
}

}  // namespace detail

/**
 * Partition a time-ordered record stream into per-window measure statistics.
 *
 * A record at timestamp t contributes to window ceil(t/delta) (t = 0 to
 * window 1). Windows with no records still appear, with zero volume and
 * zero flows, up to max(last record's window, min_windows).
 *
 * Records must already be sorted by timestamp; ingestion (read_records_csv)
 * and the simulator both guarantee this.
 */
inline std::vector<WindowStats> window_partition(std::span<const FlowRecord> records,
                                                 const WindowingConfig& cfg,
                                                 std::uint64_t min_windows = 0) {
    cfg.validate();

    std::uint64_t last_window = min_windows;
    std::int64_t prev_ts = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate_record(records[i], i + 1);
        if (records[i].timestamp_ms < prev_ts) {
            throw DataError("records are not sorted by timestamp (position " +
                            std::to_string(i + 1) + ")");
        }
        prev_ts = records[i].timestamp_ms;
    }
    if (!records.empty()) {
        const std::uint64_t w = window_index_for(records.back().timestamp_ms, cfg.delta_ms);
        if (w > last_window) last_window = w;
    }

    std::vector<WindowStats> out(last_window);
    for (std::uint64_t w = 0; w < last_window; ++w) {
        out[w].window_index = w + 1;
        out[w].window_end_ms = static_cast<std::int64_t>(w + 1) * cfg.delta_ms;
    }
    for (const FlowRecord& rec : records) {
        WindowStats& w = out[window_index_for(rec.timestamp_ms, cfg.delta_ms) - 1];
        w.per_flow_bytes[rec.flow_id] += static_cast<std::uint64_t>(rec.bytes);
        w.volume_bytes += static_cast<std::uint64_t>(rec.bytes);
    }
    for (WindowStats& w : out) {
        w.flow_count = w.per_flow_bytes.size();
        w.measures.reserve(cfg.measure_set.size());
        for (const std::string& name : cfg.measure_set) {
            w.measures.push_back(detail::measure_value(name, w));
        }
    }
    return out;
}

/**
 * Value of measure j recomputed from the window's per-flow contributions:
 * byte sum for "volume", distinct active flows for "flow" (each active flow
 * contributes 1). Throws std::out_of_range for j outside the measure set.
 */
inline double aggregate_measure(const WindowStats& window, const WindowingConfig& cfg,
                                std::size_t j) {
    if (j >= cfg.measure_set.size()) {
        throw std::out_of_range("measure index " + std::to_string(j) +
                                " out of range (have " +
                                std::to_string(cfg.measure_set.size()) + " measures)");
    }
    const std::string& name = cfg.measure_set[j];
    if (name == "volume") {
        std::uint64_t sum = 0;
        for (const auto& [id, bytes] : window.per_flow_bytes) sum += bytes;
        return static_cast<double>(sum);
    }
    double count = 0.0;
    for (const auto& kv : window.per_flow_bytes) {
        (void)kv;
        count += 1.0;
    }
    return count;
}

/// Build a consistent WindowStats from a per-flow byte map (test and
/// simulator convenience; fills the standard volume/flow measure pair).
inline WindowStats make_window_stats(std::uint64_t index, std::int64_t delta_ms,
                                     std::map<std::string, std::uint64_t> per_flow) {
    WindowStats w;
    w.window_index = index;
    w.window_end_ms = static_cast<std::int64_t>(index) * delta_ms;
    w.per_flow_bytes = std::move(per_flow);
    for (const auto& [id, bytes] : w.per_flow_bytes) w.volume_bytes += bytes;
    w.flow_count = w.per_flow_bytes.size();
    w.measures = {static_cast<double>(w.volume_bytes),
                  static_cast<double>(w.flow_count)};
    return w;
}

}  // namespace ddsim

#endif  // DDSIM_FLOW_HPP
