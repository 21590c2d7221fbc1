#ifndef DDSIM_SIMULATOR_HPP
#define DDSIM_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddsim/errors.hpp"
#include "ddsim/flow.hpp"
#include "ddsim/rng.hpp"
#include "ddsim/topology.hpp"

namespace ddsim {

enum class AttackMode { none, constant_high, constant_low, varied };

inline const char* to_string(AttackMode m) {
    switch (m) {
        case AttackMode::none: return "none";
        case AttackMode::constant_high: return "constant_high";
        case AttackMode::constant_low: return "constant_low";
        case AttackMode::varied: return "varied";
    }
    return "none";
}

inline AttackMode attack_mode_from_string(const std::string& s) {
    if (s == "none") return AttackMode::none;
    if (s == "constant_high") return AttackMode::constant_high;
    if (s == "constant_low") return AttackMode::constant_low;
    if (s == "varied") return AttackMode::varied;
    throw ConfigError("scenario.attack_mode: unknown mode '" + s + "'");
}

/// Bounds of the paper-faithful per-daemon attack rate; larger values are
/// allowed but produce a validation warning.
inline constexpr double kAttackRateFaithfulMin = 0.1;
inline constexpr double kAttackRateFaithfulMax = 3.5;

/**
 * One simulated run: legitimate clients issue transfers at Poisson arrival
 * times; attack daemons emit a fixed or varied byte rate during the attack
 * interval. Traffic is fluid (byte rates integrated per window), which is all
 * the windowed detector can observe at delta = 200 ms.
 */
struct ScenarioSpec {
    double duration_s = 75.0;
    double attack_start_s = 25.0;
    double attack_end_s = 50.0;
    AttackMode attack_mode = AttackMode::none;
    double attack_rate_mbps = 3.0;       // per attack daemon
    double client_request_rate = 0.4;    // Poisson requests per second per client
    std::int64_t client_flow_bytes = 125000;
    double client_flow_rate_mbps = 1.0;  // bounded per-flow delivery rate
    double victim_capacity_mbps = 100.0;
    double warmup_s = 5.0;               // simulated before t = 0, not emitted
    double client_patience_s = 1.0;      // fully starved transfers abort after this
    std::int64_t packet_size_bytes = 1024;
    int overwhelm_sustain_windows = 3;   // consecutive over-capacity windows for t_b
    std::uint64_t rng_seed = 1;

    void validate(std::vector<std::string>* warnings = nullptr) const {
        if (!(duration_s > 0.0)) throw ConfigError("scenario.duration_s must be positive");
        if (attack_mode != AttackMode::none) {
            if (!(attack_start_s >= 0.0 && attack_start_s < attack_end_s &&
                  attack_end_s <= duration_s)) {
                throw ConfigError(
                    "scenario: need 0 <= attack_start_s < attack_end_s <= duration_s");
            }
            if (attack_rate_mbps < kAttackRateFaithfulMin ||
                attack_rate_mbps > kAttackRateFaithfulMax) {
                if (attack_rate_mbps <= 0.0) {
                    throw ConfigError("scenario.attack_rate_mbps must be positive");
                }
                if (warnings) {
                    warnings->push_back("scenario.attack_rate_mbps outside [0.1, 3.5]");
                }
            }
        }
        if (!(client_request_rate > 0.0)) {
            throw ConfigError("scenario.client_request_rate must be positive");
        }
        if (client_flow_bytes < 1) {
            throw ConfigError("scenario.client_flow_bytes must be >= 1");
        }
        if (!(client_flow_rate_mbps > 0.0)) {
            throw ConfigError("scenario.client_flow_rate_mbps must be positive");
        }
        if (!(victim_capacity_mbps > 0.0)) {
            throw ConfigError("scenario.victim_capacity_mbps must be positive");
        }
        if (warmup_s < 0.0) throw ConfigError("scenario.warmup_s must be >= 0");
        if (!(client_patience_s > 0.0)) {
            throw ConfigError("scenario.client_patience_s must be positive");
        }
        if (packet_size_bytes < 1) {
            throw ConfigError("scenario.packet_size_bytes must be >= 1");
        }
        if (overwhelm_sustain_windows < 1) {
            throw ConfigError("scenario.overwhelm_sustain_windows must be >= 1");
        }
    }
};

/**
 * Labeled output of one run. Window sequences at the victim and at every
 * edge router all span the same window count; every byte reaching the victim
 * transits exactly one monitored edge, so per window the victim volume is
 * the sum of edge volumes and the victim flow set the union of edge sets.
 */
struct LabeledTrace {
    WindowingConfig windowing;
    std::vector<FlowRecord> victim_records;
    std::vector<std::vector<FlowRecord>> edge_records;
    std::vector<WindowStats> victim_windows;
    std::vector<std::vector<WindowStats>> edge_windows;
    std::vector<std::uint8_t> truth;
    std::int64_t t_a_ms = 0;
    std::optional<std::int64_t> t_b_ms;
};

inline std::int64_t seconds_to_ms(double s) {
    return static_cast<std::int64_t>(std::llround(s * 1000.0));
}

/**
 * Overwhelm time t_b: the end of the k_sustain-th window of the first run of
 * k_sustain consecutive windows whose offered load exceeds the victim
 * capacity; absent when no such run exists.
 */
inline std::optional<std::int64_t> overwhelm_time(std::span<const WindowStats> victim_windows,
                                                  double victim_capacity_mbps,
                                                  int k_sustain, std::int64_t delta_ms) {
    if (k_sustain < 1) throw ConfigError("k_sustain must be >= 1");
    const double cap_bytes = victim_capacity_mbps * 125.0 * static_cast<double>(delta_ms);
    int run = 0;
    for (const WindowStats& w : victim_windows) {
        if (static_cast<double>(w.volume_bytes) > cap_bytes) {
            if (++run == k_sustain) return w.window_end_ms;
        } else {
            run = 0;
        }
    }
    return std::nullopt;
}

inline std::optional<std::int64_t> overwhelm_time(const LabeledTrace& trace,
                                                  double victim_capacity_mbps,
                                                  int k_sustain) {
    return overwhelm_time(trace.victim_windows, victim_capacity_mbps, k_sustain,
                          trace.windowing.delta_ms);
}

namespace detail {

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// RNG substream tags. Legitimate traffic and attack traffic draw from
// disjoint streams so paired runs with and without attack share identical
// client behavior.
inline constexpr std::uint64_t kClientStreamBase = 0x100000;
inline constexpr std::uint64_t kZombieStreamBase = 0x200000;

struct ActiveTransfer {
    std::string id;
    double start_ms = 0.0;
    std::int64_t remaining = 0;
    std::int64_t desired = 0;    // scratch, per window
    std::int64_t starved_ms = 0;
    std::size_t edge = 0;
};

}  // namespace detail

/**
 * Run one scenario over a topology. Fully deterministic for a given
 * (topology, scenario, windowing) including the scenario seed.
 *
 * Legitimate transfers deliver client_flow_bytes at a bounded per-flow rate.
 * When the aggregate offered load exceeds the victim capacity the legitimate
 * sources scale back proportionally (crude congestion response) and abort
 * after client_patience_s of total starvation; attack daemons never back off.
 */
inline LabeledTrace run_scenario(const Topology& topology, const ScenarioSpec& scenario,
                                 const WindowingConfig& windowing) {
    topology.spec.validate();
    scenario.validate();
    windowing.validate();

    const std::int64_t delta = windowing.delta_ms;
    const std::int64_t warmup_w = detail::ceil_div(seconds_to_ms(scenario.warmup_s), delta);
    const std::int64_t trace_w = detail::ceil_div(seconds_to_ms(scenario.duration_s), delta);
    const std::int64_t total_w = warmup_w + trace_w;
    const std::int64_t shift = warmup_w * delta;

    const bool attacking = scenario.attack_mode != AttackMode::none &&
                           topology.spec.zombies_total > 0;
    const std::int64_t attack_begin = seconds_to_ms(scenario.attack_start_s) + shift;
    const std::int64_t attack_end = seconds_to_ms(scenario.attack_end_s) + shift;

    // Poisson arrival schedule per client, each arrival one transfer.
    std::vector<detail::ActiveTransfer> arrivals;
    const double mean_gap_ms = 1000.0 / scenario.client_request_rate;
    const double horizon_ms = static_cast<double>(total_w * delta);
    for (std::size_t ci = 0; ci < topology.spec.clients_total; ++ci) {
        Rng rng(stream_seed(scenario.rng_seed, detail::kClientStreamBase + ci));
        double t = 0.0;
        std::size_t n = 0;
        while (true) {
            t += rng.exponential(mean_gap_ms);
            if (!(t < horizon_ms)) break;
            detail::ActiveTransfer f;
            f.id = "c" + std::to_string(ci) + "-" + std::to_string(n++);
            f.start_ms = t;
            f.remaining = scenario.client_flow_bytes;
            f.edge = topology.client_edge[ci];
            arrivals.push_back(std::move(f));
        }
    }
    std::sort(arrivals.begin(), arrivals.end(),
              [](const detail::ActiveTransfer& a, const detail::ActiveTransfer& b) {
                  if (a.start_ms != b.start_ms) return a.start_ms < b.start_ms;
                  return a.id < b.id;
              });

    // Varied mode: per-zombie piecewise-constant rate, redrawn every second
    // of the attack interval.
    std::vector<std::vector<double>> varied_rate;
    if (attacking && scenario.attack_mode == AttackMode::varied) {
        const std::int64_t secs = detail::ceil_div(attack_end - attack_begin, 1000);
        varied_rate.resize(topology.spec.zombies_total);
        for (std::size_t k = 0; k < topology.spec.zombies_total; ++k) {
            Rng rng(stream_seed(scenario.rng_seed, detail::kZombieStreamBase + k));
            varied_rate[k].reserve(static_cast<std::size_t>(secs));
            for (std::int64_t s = 0; s < secs; ++s) {
                varied_rate[k].push_back(
                    rng.uniform(kAttackRateFaithfulMin, kAttackRateFaithfulMax));
            }
        }
    }
    const auto zombie_window_bytes = [&](std::size_t k, std::int64_t lo,
                                         std::int64_t hi) -> std::int64_t {
        if (scenario.attack_mode != AttackMode::varied) {
            return static_cast<std::int64_t>(
                std::llround(scenario.attack_rate_mbps * 125.0 * static_cast<double>(hi - lo)));
        }
        double bytes = 0.0;
        std::int64_t cur = lo;
        while (cur < hi) {
            const std::int64_t sec = (cur - attack_begin) / 1000;
            const std::int64_t seg_end = std::min(hi, attack_begin + (sec + 1) * 1000);
            bytes += varied_rate[k][static_cast<std::size_t>(sec)] * 125.0 *
                     static_cast<double>(seg_end - cur);
            cur = seg_end;
        }
        return static_cast<std::int64_t>(std::llround(bytes));
    };

    LabeledTrace trace;
    trace.windowing = windowing;
    trace.edge_records.resize(topology.edge_count());
    trace.t_a_ms = seconds_to_ms(scenario.attack_start_s);

    const auto emit = [&](std::int64_t window, std::int64_t ts_internal,
                          const std::string& id, std::int64_t bytes, std::size_t edge) {
        if (window <= warmup_w || bytes < 1) return;
        FlowRecord rec;
        rec.timestamp_ms = ts_internal - shift;
        rec.flow_id = id;
        rec.bytes = bytes;
        rec.packets = detail::ceil_div(bytes, scenario.packet_size_bytes);
        trace.edge_records[edge].push_back(rec);
        trace.victim_records.push_back(std::move(rec));
    };

    const double flow_bytes_per_ms = scenario.client_flow_rate_mbps * 125.0;
    const double capacity_bytes = scenario.victim_capacity_mbps * 125.0 *
                                  static_cast<double>(delta);
    const std::int64_t patience_ms = seconds_to_ms(scenario.client_patience_s);

    std::vector<detail::ActiveTransfer> active;
    std::size_t next_arrival = 0;

    for (std::int64_t w = 1; w <= total_w; ++w) {
        const std::int64_t ws = (w - 1) * delta;
        const std::int64_t we = w * delta;

        // Attack daemons first; their load is what legitimate sources see.
        std::int64_t attack_total = 0;
        if (attacking) {
            const std::int64_t lo = std::max(ws, attack_begin);
            const std::int64_t hi = std::min(we, attack_end);
            if (lo < hi) {
                for (std::size_t k = 0; k < topology.spec.zombies_total; ++k) {
                    const std::int64_t bytes = zombie_window_bytes(k, lo, hi);
                    attack_total += bytes;
                    emit(w, we, "z" + std::to_string(k), bytes, topology.zombie_edge[k]);
                }
            }
        }

        while (next_arrival < arrivals.size() &&
               arrivals[next_arrival].start_ms < static_cast<double>(we)) {
            active.push_back(arrivals[next_arrival++]);
        }

        std::int64_t demand = 0;
        for (detail::ActiveTransfer& f : active) {
            const double active_ms =
                std::min(static_cast<double>(delta), static_cast<double>(we) - f.start_ms);
            f.desired = std::min(
                f.remaining,
                static_cast<std::int64_t>(std::floor(flow_bytes_per_ms * active_ms)));
            demand += f.desired;
        }
        const double avail = std::max(0.0, capacity_bytes - static_cast<double>(attack_total));
        const double scale =
            (static_cast<double>(demand) > avail && demand > 0)
                ? avail / static_cast<double>(demand)
                : 1.0;

        for (detail::ActiveTransfer& f : active) {
            const std::int64_t sent =
                (scale == 1.0) ? f.desired
                               : static_cast<std::int64_t>(
                                     std::floor(static_cast<double>(f.desired) * scale));
            if (sent >= 1) {
                f.remaining -= sent;
                f.starved_ms = 0;
                emit(w, we, f.id, sent, f.edge);
            } else if (f.desired >= 1) {
                f.starved_ms += delta;
            }
        }
        std::erase_if(active, [&](const detail::ActiveTransfer& f) {
            return f.remaining == 0 || f.starved_ms >= patience_ms;
        });
    }

    std::sort(trace.victim_records.begin(), trace.victim_records.end(), record_less);
    trace.victim_windows = window_partition(trace.victim_records, windowing,
                                            static_cast<std::uint64_t>(trace_w));
    trace.edge_windows.reserve(trace.edge_records.size());
    for (auto& recs : trace.edge_records) {
        std::sort(recs.begin(), recs.end(), record_less);
        trace.edge_windows.push_back(
            window_partition(recs, windowing, static_cast<std::uint64_t>(trace_w)));
    }

    // Ground truth: a window is an attack window iff its time span overlaps
    // [t_a, attack_end) with positive length.
    trace.truth.assign(static_cast<std::size_t>(trace_w), 0);
    if (attacking) {
        const std::int64_t a = seconds_to_ms(scenario.attack_start_s);
        const std::int64_t e = seconds_to_ms(scenario.attack_end_s);
        for (std::int64_t w = 1; w <= trace_w; ++w) {
            const std::int64_t lo = std::max((w - 1) * delta, a);
            const std::int64_t hi = std::min(w * delta, e);
            if (lo < hi) trace.truth[static_cast<std::size_t>(w - 1)] = 1;
        }
    }

    trace.t_b_ms = overwhelm_time(trace.victim_windows, scenario.victim_capacity_mbps,
                                  scenario.overwhelm_sustain_windows, delta);
    return trace;
}

}  // namespace ddsim

#endif  // DDSIM_SIMULATOR_HPP
