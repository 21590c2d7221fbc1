#include "ddsim/coop.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "ddsim/errors.hpp"
#include "ddsim/simulator.hpp"
#include "ddsim/topology.hpp"

namespace ddsim {
namespace {

NormalProfile profile_of(std::vector<double> means, std::vector<double> sigmas) {
    NormalProfile p;
    p.means = std::move(means);
    p.std_devs = std::move(sigmas);
    p.measure_names = {"volume", "flow"};
    p.measure_names.resize(p.means.size());
    p.training_window_count = 25;
    p.delta_ms = 200;
    return p;
}

/// Window with `flows` distinct flows (ids prefixed for disjointness across
/// edges) summing to `volume` bytes.
WindowStats edge_window(std::uint64_t index, const std::string& prefix,
                        std::uint64_t volume, std::uint64_t flows) {
    std::map<std::string, std::uint64_t> per_flow;
    for (std::uint64_t k = 0; k < flows; ++k) {
        per_flow[prefix + "_f" + std::to_string(k)] = 1;
    }
    if (flows > 0) per_flow[prefix + "_f0"] = volume - (flows - 1);
    return make_window_stats(index, 200, std::move(per_flow));
}

TEST(MergeFlowLists, UnionCardinality) {
    const std::vector<std::vector<std::string>> overlapping{{"A", "B", "C"},
                                                            {"B", "C", "D"}};
    EXPECT_EQ(merge_flow_lists(overlapping), 4u);

    EXPECT_EQ(merge_flow_lists(std::vector<std::vector<std::string>>{}), 0u);

    const std::vector<std::vector<std::string>> empties{{}, {}};
    EXPECT_EQ(merge_flow_lists(empties), 0u);

    const std::vector<std::vector<std::string>> disjoint{{"a", "b", "c"},
                                                         {"d", "e", "f", "g", "h"}};
    EXPECT_EQ(merge_flow_lists(disjoint), 8u);

    const std::vector<std::vector<std::string>> dup_within{{"x", "x", "y"}, {"y"}};
    EXPECT_EQ(merge_flow_lists(dup_within), 2u);
}

TEST(CoopConfig, EffectiveSaThresholdScalesWithEdges) {
    CoopConfig cfg;  // sa_threshold = 0: derive ceil(edges / 4)
    EXPECT_EQ(cfg.effective_sa_threshold(8), 2u);
    EXPECT_EQ(cfg.effective_sa_threshold(10), 3u);
    EXPECT_EQ(cfg.effective_sa_threshold(4), 1u);
    EXPECT_EQ(cfg.effective_sa_threshold(16), 4u);
    EXPECT_EQ(cfg.effective_sa_threshold(1), 1u);
    cfg.sa_threshold = 5;
    EXPECT_EQ(cfg.effective_sa_threshold(8), 5u);
}

TEST(CoopConfig, Validation) {
    CoopConfig bad;
    bad.local_r = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = CoopConfig{};
    bad.central_r = -1.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = CoopConfig{};
    bad.retention_windows = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(LocalDetect, QuietWindowSendsNothing) {
    const NormalProfile p = profile_of({100, 10}, {10, 1});
    const CoopConfig cfg;
    EXPECT_FALSE(local_detect(edge_window(3, "e0", 100, 10), p, cfg).has_value());
    // Half the local threshold: suspicious to no one.
    EXPECT_FALSE(local_detect(edge_window(3, "e0", 130, 10), p, cfg).has_value());
}

TEST(LocalDetect, ExceedanceCarriesMeasuresAndFlows) {
    const NormalProfile p = profile_of({100, 10}, {10, 1});
    const CoopConfig cfg;  // local_r = 6: thresholds (60, 6)
    const auto sa = local_detect(edge_window(9, "e2", 200, 12), p, cfg, "edge_002");
    ASSERT_TRUE(sa.has_value());
    EXPECT_EQ(sa->detector_id, "edge_002");
    EXPECT_EQ(sa->window_index, 9u);
    ASSERT_EQ(sa->measures.size(), 2u);
    EXPECT_DOUBLE_EQ(sa->measures[0], 200.0);
    EXPECT_DOUBLE_EQ(sa->measures[1], 12.0);
    EXPECT_EQ(sa->active_flows.size(), 12u);
    ASSERT_EQ(sa->triggered_measures.size(), 1u);
    EXPECT_EQ(sa->triggered_measures[0], "volume");
}

TEST(EdgeDetector, RetainsExactlyQWindows) {
    const NormalProfile p = profile_of({100, 10}, {10, 1});
    CoopConfig cfg;
    cfg.retention_windows = 16;
    EdgeDetector edge("edge_000", p, cfg);

    for (std::uint64_t w = 1; w <= 20; ++w) {
        edge.observe(edge_window(w, "e0", 100, 10));
    }
    EXPECT_EQ(edge.retained(), 16u);
    // Windows 5..20 are queryable; 4 fell off the horizon.
    EXPECT_EQ(edge.query(5).window_index, 5u);
    EXPECT_EQ(edge.query(20).window_index, 20u);
    EXPECT_THROW(edge.query(4), StaleWindowError);
    EXPECT_THROW(edge.query(3), StaleWindowError);
    // Not yet observed windows are just as gone.
    EXPECT_THROW(edge.query(21), StaleWindowError);
}

TEST(EdgeDetector, ObserveRunsLocalDetection) {
    const NormalProfile p = profile_of({100, 10}, {10, 1});
    EdgeDetector edge("edge_001", p, CoopConfig{});
    EXPECT_FALSE(edge.observe(edge_window(1, "e1", 100, 10)).has_value());
    const auto sa = edge.observe(edge_window(2, "e1", 300, 10));
    ASSERT_TRUE(sa.has_value());
    EXPECT_EQ(sa->detector_id, "edge_001");
    EXPECT_EQ(sa->window_index, 2u);
}

std::vector<std::string> edge_ids(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(edge_label(i));
    return ids;
}

SuspiciousAlarm alarm_from(const std::string& id, std::uint64_t window,
                           const WindowStats& stats) {
    SuspiciousAlarm sa;
    sa.detector_id = id;
    sa.window_index = window;
    sa.measures = stats.measures;
    for (const auto& [flow_id, bytes] : stats.per_flow_bytes) {
        sa.active_flows.push_back(flow_id);
    }
    sa.triggered_measures = {"volume"};
    return sa;
}

TEST(CentralStep, QuorumOfDistinctEdgesConfirms) {
    const NormalProfile central = profile_of({1000, 100}, {30, 5});
    const CoopConfig cfg;  // 8 edges: k_sa = 2
    const WindowStats own = edge_window(7, "victim", 1000, 100);

    const std::vector<SuspiciousAlarm> sas{
        alarm_from("edge_001", 7, edge_window(7, "e1", 200, 12)),
        alarm_from("edge_004", 7, edge_window(7, "e4", 210, 13)),
    };
    const CentralVerdict v = central_step(own, sas, central, cfg, edge_ids(8));
    EXPECT_TRUE(v.confirmed);
    EXPECT_EQ(v.via, ConfirmVia::sa_quorum);
    EXPECT_EQ(v.sa_count, 2u);
    EXPECT_EQ(v.window_index, 7u);
    EXPECT_EQ(v.merged_flow_count, 25u);  // disjoint 12 + 13
}

TEST(CentralStep, DuplicateEdgeCountsOnce) {
    const NormalProfile central = profile_of({1000, 100}, {30, 5});
    const CoopConfig cfg;
    const WindowStats own = edge_window(7, "victim", 1000, 100);
    // Two alarms from the same detector: one distinct edge, no quorum, and
    // the aggregated data (200 bytes vs mean 1000) is nowhere near central
    // thresholds, so the window stays unconfirmed.
    const std::vector<SuspiciousAlarm> sas{
        alarm_from("edge_001", 7, edge_window(7, "e1", 200, 12)),
        alarm_from("edge_001", 7, edge_window(7, "e1", 200, 12)),
    };
    const CentralVerdict v = central_step(own, sas, central, cfg, edge_ids(8));
    EXPECT_FALSE(v.confirmed);
    EXPECT_EQ(v.sa_count, 1u);
    EXPECT_EQ(v.via, ConfirmVia::none);
}

TEST(CentralStep, PartialDataCanConfirmViaCentralCheck) {
    const NormalProfile central = profile_of({1000, 100}, {30, 5});
    const CoopConfig cfg;  // central_r = 6: thresholds (180, 30)
    const WindowStats own = edge_window(7, "victim", 1000, 100);
    // One edge alone reports more volume than the whole system's threshold:
    // deviations are one-sided, so partial data is sound evidence.
    const std::vector<SuspiciousAlarm> sas{
        alarm_from("edge_003", 7, edge_window(7, "e3", 1300, 20)),
    };
    const CentralVerdict v = central_step(own, sas, central, cfg, edge_ids(8));
    EXPECT_TRUE(v.confirmed);
    EXPECT_EQ(v.via, ConfirmVia::central_check);
    EXPECT_EQ(v.sa_count, 1u);
}

TEST(CentralStep, DilutedAttackNeedsTheQueryPath) {
    // Ten edges each half a local threshold above normal: no edge alarms,
    // but the victim-side sum is far over the central threshold. Only the
    // active query path can assemble the evidence.
    const std::size_t n_edges = 10;
    const NormalProfile edge_profile = profile_of({100, 10}, {10, 1});
    const NormalProfile central = profile_of({1000, 100}, {30, 5});
    CoopConfig cfg;  // local ξ = (60, 6), central ξ = (180, 30)

    std::vector<WindowStats> edge_stats;
    std::map<std::string, std::uint64_t> victim_flows;
    for (std::size_t e = 0; e < n_edges; ++e) {
        // 130 bytes = mean + 0.5 * local volume threshold, normal flow count.
        edge_stats.push_back(edge_window(5, "e" + std::to_string(e), 130, 10));
        for (const auto& [id, b] : edge_stats.back().per_flow_bytes) {
            victim_flows[id] = b;
        }
        EXPECT_FALSE(local_detect(edge_stats[e], edge_profile, cfg).has_value());
    }
    const WindowStats own = make_window_stats(5, 200, victim_flows);
    ASSERT_EQ(own.volume_bytes, 1300u);  // deviation 300 > 180
    ASSERT_EQ(own.flow_count, 100u);

    std::size_t fn_calls = 0;
    const QueryFn query = [&](const std::string& id, std::uint64_t w) {
        ++fn_calls;
        EXPECT_EQ(w, 5u);
        const std::size_t e = static_cast<std::size_t>(std::stoi(id.substr(5)));
        QueryResponse resp;
        resp.detector_id = id;
        resp.measures = edge_stats[e].measures;
        for (const auto& [flow_id, b] : edge_stats[e].per_flow_bytes) {
            resp.active_flows.push_back(flow_id);
        }
        return resp;
    };

    std::size_t queries = 0;
    const CentralVerdict v =
        central_step(own, {}, central, cfg, edge_ids(n_edges), query, &queries);
    EXPECT_TRUE(v.confirmed);
    EXPECT_EQ(v.via, ConfirmVia::query_confirmed);
    EXPECT_EQ(queries, n_edges);
    EXPECT_EQ(fn_calls, n_edges);
    EXPECT_EQ(v.merged_flow_count, 100u);

    // Same window with querying disabled: the dilution wins.
    cfg.query_on = false;
    const CentralVerdict blind =
        central_step(own, {}, central, cfg, edge_ids(n_edges), query, &queries);
    EXPECT_FALSE(blind.confirmed);
    EXPECT_EQ(blind.via, ConfirmVia::none);
}

TEST(CentralStep, QuietOwnStatsIssueNoQueries) {
    const NormalProfile central = profile_of({1000, 100}, {30, 5});
    const CoopConfig cfg;
    const WindowStats own = edge_window(5, "victim", 1010, 100);  // within bounds
    std::size_t fn_calls = 0;
    const QueryFn query = [&](const std::string&, std::uint64_t) -> QueryResponse {
        ++fn_calls;
        return {};
    };
    std::size_t queries = 0;
    const CentralVerdict v = central_step(own, {}, central, cfg, edge_ids(8), query,
                                          &queries);
    EXPECT_FALSE(v.confirmed);
    EXPECT_EQ(queries, 0u);
    EXPECT_EQ(fn_calls, 0u);
}

TEST(CentralStep, ProtocolViolationsThrow) {
    const NormalProfile central = profile_of({1000, 100}, {30, 5});
    const CoopConfig cfg;
    const WindowStats own = edge_window(7, "victim", 1000, 100);

    // Alarm for the wrong window.
    std::vector<SuspiciousAlarm> wrong_window{
        alarm_from("edge_001", 6, edge_window(6, "e1", 200, 12))};
    EXPECT_THROW(central_step(own, wrong_window, central, cfg, edge_ids(8)),
                 ProtocolError);

    // Alarm with no triggered measures.
    std::vector<SuspiciousAlarm> no_trigger{
        alarm_from("edge_001", 7, edge_window(7, "e1", 200, 12))};
    no_trigger[0].triggered_measures.clear();
    EXPECT_THROW(central_step(own, no_trigger, central, cfg, edge_ids(8)),
                 ProtocolError);

    // Alarm with the wrong measure arity.
    std::vector<SuspiciousAlarm> bad_arity{
        alarm_from("edge_001", 7, edge_window(7, "e1", 200, 12))};
    bad_arity[0].measures = {200.0};
    EXPECT_THROW(central_step(own, bad_arity, central, cfg, edge_ids(8)),
                 ProtocolError);
}

TEST(CentralStep, UnknownEdgePropagatesFromQueryTransport) {
    const NormalProfile central = profile_of({1000, 100}, {30, 5});
    const CoopConfig cfg;
    const WindowStats own = edge_window(5, "victim", 1300, 100);  // arms queries
    const std::vector<std::string> edges{"edge_000", "ghost"};
    const QueryFn query = [&](const std::string& id, std::uint64_t) -> QueryResponse {
        if (id != "edge_000") throw UnknownEdgeError("no edge detector '" + id + "'");
        QueryResponse resp;
        resp.detector_id = id;
        resp.measures = {100.0, 10.0};
        return resp;
    };
    EXPECT_THROW(central_step(own, {}, central, cfg, edges, query), UnknownEdgeError);
}

TEST(CentralStep, HigherQuorumIsStricter) {
    const NormalProfile central = profile_of({1000, 100}, {30, 5});
    const WindowStats own = edge_window(7, "victim", 1000, 100);
    const std::vector<SuspiciousAlarm> sas{
        alarm_from("edge_001", 7, edge_window(7, "e1", 200, 12)),
        alarm_from("edge_004", 7, edge_window(7, "e4", 210, 13)),
        alarm_from("edge_006", 7, edge_window(7, "e6", 190, 11)),
    };
    CoopConfig lenient;
    lenient.sa_threshold = 3;
    EXPECT_TRUE(central_step(own, sas, central, lenient, edge_ids(8)).confirmed);

    CoopConfig strict;
    strict.sa_threshold = 6;
    strict.query_on = false;
    const CentralVerdict v = central_step(own, sas, central, strict, edge_ids(8));
    EXPECT_FALSE(v.confirmed);  // 3 < 6 and 600 bytes are far below central ξ
}

// --- full pipeline over simulated traces ------------------------------------

struct CoopFixtureData {
    LabeledTrace normal;
    LabeledTrace attack;
    CoopProfiles profiles;
};

const CoopFixtureData& coop_traces() {
    static const CoopFixtureData data = [] {
        TopologySpec tspec;
        tspec.clients_total = 100;
        tspec.zombies_total = 50;
        const Topology topo = build_topology(tspec, 1);
        ScenarioSpec attack;
        attack.attack_mode = AttackMode::constant_high;
        ScenarioSpec normal = attack;
        normal.attack_mode = AttackMode::none;
        CoopFixtureData d;
        d.normal = run_scenario(topo, normal, WindowingConfig{});
        d.attack = run_scenario(topo, attack, WindowingConfig{});
        d.profiles = train_coop_profiles(d.normal);
        return d;
    }();
    return data;
}

TEST(TrainCoopProfiles, RefusesContaminatedTraces) {
    EXPECT_THROW(train_coop_profiles(coop_traces().attack), ContaminatedTrainingError);
}

TEST(TrainCoopProfiles, OneProfilePerStream) {
    const CoopProfiles& p = coop_traces().profiles;
    EXPECT_EQ(p.edges.size(), 8u);
    EXPECT_EQ(p.central.size(), 2u);
    EXPECT_EQ(p.central.training_window_count, 375u);
    EXPECT_EQ(p.central.delta_ms, 200);
    // The central profile is the victim-stream profile.
    const NormalProfile direct = build_profile(coop_traces().normal.victim_windows,
                                               {"volume", "flow"}, 200);
    EXPECT_EQ(p.central.means, direct.means);
    EXPECT_EQ(p.central.std_devs, direct.std_devs);
    // Edge means sum to about the central mean (every byte crosses one edge).
    double edge_mean_sum = 0.0;
    for (const NormalProfile& e : p.edges) edge_mean_sum += e.means[0];
    EXPECT_NEAR(edge_mean_sum, p.central.means[0], 1e-6);
}

TEST(RunCoopSimulation, QuietOnNormalTraffic) {
    const CoopFixtureData& d = coop_traces();
    const CoopResult res = run_coop_simulation(d.normal, d.profiles, CoopConfig{});
    EXPECT_EQ(res.report.confirmations, 0u);
    EXPECT_FALSE(res.report.first_confirmation_window.has_value());
    EXPECT_EQ(res.report.window_count, 375u);
    EXPECT_EQ(res.report.edge_count, 8u);
    for (const CentralVerdict& v : res.verdicts) EXPECT_FALSE(v.confirmed);
}

TEST(RunCoopSimulation, ConfirmsEveryAttackWindowByQuorum) {
    const CoopFixtureData& d = coop_traces();
    const CoopResult res = run_coop_simulation(d.attack, d.profiles, CoopConfig{});

    ASSERT_TRUE(res.report.first_confirmation_window.has_value());
    EXPECT_EQ(*res.report.first_confirmation_window, 126u);
    EXPECT_EQ(*res.report.confirmation_time_ms, 25200);
    EXPECT_EQ(res.report.confirmations, 125u);

    ASSERT_EQ(res.verdicts.size(), 375u);
    for (std::size_t w = 1; w <= 375; ++w) {
        const CentralVerdict& v = res.verdicts[w - 1];
        EXPECT_EQ(v.window_index, w);
        EXPECT_EQ(v.confirmed, d.attack.truth[w - 1] != 0) << "window " << w;
        if (v.confirmed) {
            EXPECT_EQ(v.via, ConfirmVia::sa_quorum);
            EXPECT_GE(v.sa_count, 2u);  // k_sa for 8 edges
            // Edge flow sets are disjoint, and under full starvation only
            // daemon flows remain, so the merged evidence is at least one
            // flow per alarming edge and at most the 50 daemons.
            EXPECT_GE(v.merged_flow_count, v.sa_count);
            EXPECT_LE(v.merged_flow_count, 50u);
        }
    }

    // Cooperative confirmation is as fast as single-point detection here.
    const DetectionReport single =
        detect_stream(d.attack.victim_windows, d.profiles.central,
                      DetectorConfig::uniform(6.0, 2));
    ASSERT_TRUE(single.first_detection_window.has_value());
    EXPECT_LE(*res.report.first_confirmation_window, *single.first_detection_window);
}

TEST(RunCoopSimulation, OverheadStaysOnTheEdges) {
    const CoopFixtureData& d = coop_traces();
    const CoopResult res = run_coop_simulation(d.attack, d.profiles, CoopConfig{});

    // Quorum short-circuits before any active query.
    EXPECT_EQ(res.report.queries_issued, 0u);
    EXPECT_EQ(res.report.responses_received, 0u);
    // Every confirmed window needed at least k_sa = 2 alarms, and no edge can
    // alarm more than once per window.
    EXPECT_GE(res.report.sas_sent, 250u);
    EXPECT_LE(res.report.sas_sent, 8u * 375u);

    // Retention is capped at Q regardless of the 375-window trace.
    ASSERT_EQ(res.report.edge_retained_windows.size(), 8u);
    for (std::size_t q : res.report.edge_retained_windows) EXPECT_EQ(q, 16u);

    // Central per-window state is bounded by topology and window content.
    std::uint64_t max_flows = 0;
    for (const WindowStats& w : d.attack.victim_windows) {
        max_flows = std::max(max_flows, w.flow_count);
    }
    EXPECT_LE(res.report.max_central_window_state, 8u + max_flows);

    // The message log matches the counters.
    std::size_t sa = 0, query = 0, resp = 0;
    for (const Message& m : res.messages) {
        if (m.type == "sa") ++sa;
        if (m.type == "query") ++query;
        if (m.type == "resp") ++resp;
    }
    EXPECT_EQ(sa, res.report.sas_sent);
    EXPECT_EQ(query, res.report.queries_issued);
    EXPECT_EQ(resp, res.report.responses_received);
}

TEST(RunCoopSimulation, FullQueryMergeEqualsSinglePointDetection) {
    // With the quorum disabled (huge sa_threshold) and no SAs delivered, the
    // query path reassembles the complete victim view, so the cooperative
    // verdict must equal the single-point verdict on every window.
    const CoopFixtureData& d = coop_traces();
    CoopConfig cfg;
    cfg.sa_threshold = 1000000;
    const std::vector<std::string> ids = edge_ids(8);

    const QueryFn query = [&](const std::string& id, std::uint64_t w) {
        std::size_t e = 0;
        while (edge_label(e) != id) ++e;
        const WindowStats& stats = d.attack.edge_windows[e][w - 1];
        QueryResponse resp;
        resp.detector_id = id;
        resp.measures = stats.measures;
        for (const auto& [flow_id, b] : stats.per_flow_bytes) {
            resp.active_flows.push_back(flow_id);
        }
        return resp;
    };

    const Thresholds thr = compute_thresholds(
        d.profiles.central, DetectorConfig::uniform(cfg.central_r, 2));
    for (std::size_t w = 0; w < d.attack.victim_windows.size(); ++w) {
        const CentralVerdict v = central_step(d.attack.victim_windows[w], {},
                                              d.profiles.central, cfg, ids, query);
        const bool single =
            detect_window(d.attack.victim_windows[w], d.profiles.central, thr).is_attack;
        ASSERT_EQ(v.confirmed, single) << "window " << w + 1;
        if (v.confirmed) {
            EXPECT_EQ(v.via, ConfirmVia::query_confirmed);
            EXPECT_EQ(v.merged_flow_count, d.attack.victim_windows[w].flow_count);
        }
    }
}

TEST(RunCoopSimulation, RejectsMismatchedInputs) {
    const CoopFixtureData& d = coop_traces();
    CoopProfiles short_profiles = d.profiles;
    short_profiles.edges.pop_back();
    EXPECT_THROW(run_coop_simulation(d.attack, short_profiles, CoopConfig{}),
                 SchemaError);
}

TEST(CoopOutputs, MessageLogAndVerdictCsvFormats) {
    const CoopFixtureData& d = coop_traces();
    const CoopResult res = run_coop_simulation(d.attack, d.profiles, CoopConfig{});

    const std::string jsonl = messages_to_jsonl(res.messages);
    std::istringstream lines(jsonl);
    std::string line;
    std::size_t parsed = 0;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_TRUE(j.at("type") == "sa" || j.at("type") == "query" ||
                    j.at("type") == "resp");
        EXPECT_TRUE(j.contains("detector_id"));
        EXPECT_TRUE(j.at("window_index").is_number_unsigned());
        ++parsed;
    }
    EXPECT_EQ(parsed, res.messages.size());

    std::ostringstream csv;
    write_central_verdicts_csv(csv, res.verdicts);
    std::istringstream in(csv.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "window_index,confirmed,sa_count,via,merged_flow_count");
    std::getline(in, line);
    EXPECT_EQ(line, "1,0,0,none,0");

    const std::string report_json = coop_report_to_json(res.report).dump();
    const auto j = nlohmann::json::parse(report_json);
    EXPECT_EQ(j.at("sas_sent").get<std::size_t>(), res.report.sas_sent);
    EXPECT_EQ(j.at("first_confirmation_window").get<std::uint64_t>(), 126u);
}

TEST(ConfirmViaNames, Stable) {
    EXPECT_STREQ(to_string(ConfirmVia::none), "none");
    EXPECT_STREQ(to_string(ConfirmVia::sa_quorum), "sa_quorum");
    EXPECT_STREQ(to_string(ConfirmVia::central_check), "central_check");
    EXPECT_STREQ(to_string(ConfirmVia::query_confirmed), "query_confirmed");
}

TEST(EdgeLabel, ZeroPadded) {
    EXPECT_EQ(edge_label(0), "edge_000");
    EXPECT_EQ(edge_label(7), "edge_007");
    EXPECT_EQ(edge_label(42), "edge_042");
}

}  // namespace
}  // namespace ddsim
