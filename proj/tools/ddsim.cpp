// ddsim — flow-level DDoS simulation and detection toolkit.
//
// Subcommands: simulate | train | detect | coop | roc. Every command is a
// pure function of (config, seed) to files: outputs land in --out together
// with a manifest.json recording config hash, seed, and output hashes.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddsim/config.hpp"
#include "ddsim/coop.hpp"
#include "ddsim/detector.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/eval.hpp"
#include "ddsim/manifest.hpp"
#include "ddsim/simulator.hpp"
#include "ddsim/topology.hpp"
#include "ddsim/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
    std::optional<fs::path> config_path;
    fs::path out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_seed = true) {
    cmd->add_option_function<std::string>(
           "--config", [&opt](const std::string& v) { opt.config_path = v; },
           "JSON config file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out_dir, "output directory")->required();
    if (with_seed) {
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&opt](std::uint64_t v) { opt.seed = v; },
            "override the run seed");
    }
    cmd->add_option("--set", opt.sets, "config override, dotted KEY=VALUE")
        ->take_all();
}

ddsim::FullConfig load_validated(const CommonOptions& opt, json& doc) {
    doc = ddsim::load_config_json(opt.config_path, opt.sets);
    if (opt.seed) {
        doc["scenario"]["rng_seed"] = *opt.seed;
        doc["roc"]["base_seed"] = *opt.seed;
    }
    ddsim::FullConfig cfg = ddsim::parse_config(doc);
    std::vector<std::string> warnings;
    cfg.validate(&warnings);
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    return cfg;
}

std::string edge_records_name(std::size_t e) {
    return ddsim::edge_label(e) + "_records.csv";
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const CommonOptions& opt) {
    json doc;
    const ddsim::FullConfig cfg = load_validated(opt, doc);
    const ddsim::Topology topo =
        ddsim::build_topology(cfg.topology, cfg.scenario.rng_seed);
    const ddsim::LabeledTrace trace =
        ddsim::run_scenario(topo, cfg.scenario, cfg.windowing);

    fs::create_directories(opt.out_dir);
    ddsim::write_records_csv_file(opt.out_dir / "victim_records.csv",
                                  trace.victim_records);
    ddsim::write_windows_csv_file(opt.out_dir / "victim_windows.csv",
                                  trace.victim_windows, &trace.truth);
    for (std::size_t e = 0; e < trace.edge_records.size(); ++e) {
        ddsim::write_records_csv_file(opt.out_dir / edge_records_name(e),
                                      trace.edge_records[e]);
    }

    ddsim::RunManifest manifest =
        ddsim::make_manifest("simulate", doc, cfg.scenario.rng_seed);
    manifest.timestamps = ddsim::trace_timestamps(cfg);
    manifest.timestamps["overwhelm_ms"] =
        trace.t_b_ms ? json(*trace.t_b_ms) : json();
    ddsim::record_output(manifest, opt.out_dir, "victim_records.csv");
    ddsim::record_output(manifest, opt.out_dir, "victim_windows.csv");
    for (std::size_t e = 0; e < trace.edge_records.size(); ++e) {
        ddsim::record_output(manifest, opt.out_dir, edge_records_name(e));
    }
    ddsim::write_manifest(opt.out_dir, manifest);

    std::cout << "simulate: " << trace.victim_windows.size() << " windows, "
              << trace.victim_records.size() << " victim records, "
              << trace.edge_records.size() << " edges -> " << opt.out_dir.string()
              << "\n";
    return 0;
}

// --- train ------------------------------------------------------------------

// A trace argument may be a raw records CSV or a windowed-stats CSV; both
// carry a distinguishing header line.
ddsim::WindowTable load_trace_windows(const fs::path& path,
                                      const ddsim::WindowingConfig& windowing) {
    std::ifstream probe(path);
    if (!probe) throw ddsim::ConfigError("cannot open trace file: " + path.string());
    std::string header;
    std::getline(probe, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    probe.close();

    if (header == ddsim::kRecordsCsvHeader) {
        const auto records = ddsim::read_records_csv_file(path);
        ddsim::WindowTable table;
        table.windows = ddsim::window_partition(records, windowing);
        table.delta_ms = windowing.delta_ms;
        return table;
    }
    return ddsim::read_windows_csv_file(path);
}

int cmd_train(const CommonOptions& opt, const fs::path& trace_path, bool force) {
    json doc;
    const ddsim::FullConfig cfg = load_validated(opt, doc);
    const ddsim::WindowTable table = load_trace_windows(trace_path, cfg.windowing);

    if (!force && table.truth) {
        for (std::size_t i = 0; i < table.truth->size(); ++i) {
            if ((*table.truth)[i]) {
                throw ddsim::ContaminatedTrainingError(
                    "window " + std::to_string(i + 1) +
                    " is labeled as attack traffic; use --force to train anyway");
            }
        }
    }
    const ddsim::NormalProfile profile = ddsim::build_profile(
        table.windows, cfg.windowing.measure_set, table.delta_ms);
    for (std::size_t j = 0; j < profile.size(); ++j) {
        if (profile.std_devs[j] == 0.0) {
            std::cerr << "warning: measure '" << profile.measure_names[j]
                      << "' is constant over training (std_dev = 0); threshold "
                         "degenerates to zero tolerance\n";
        }
    }

    fs::create_directories(opt.out_dir);
    ddsim::save_profile(opt.out_dir / "profile.json", profile);

    ddsim::RunManifest manifest = ddsim::make_manifest("train", doc, std::nullopt);
    ddsim::record_input(manifest, trace_path);
    manifest.timestamps = {
        {"trace_start_ms", 0},
        {"trace_end_ms",
         static_cast<std::int64_t>(table.windows.size()) * table.delta_ms},
        {"delta_ms", table.delta_ms}};
    ddsim::record_output(manifest, opt.out_dir, "profile.json");
    ddsim::write_manifest(opt.out_dir, manifest);

    std::cout << "train: " << profile.training_window_count << " windows -> "
              << (opt.out_dir / "profile.json").string() << "\n";
    return 0;
}

// --- detect -----------------------------------------------------------------

int cmd_detect(const CommonOptions& opt, const fs::path& trace_path,
               const fs::path& profile_path) {
    json doc;
    const ddsim::FullConfig cfg = load_validated(opt, doc);
    const ddsim::NormalProfile profile = ddsim::load_profile(profile_path);
    ddsim::WindowingConfig windowing = cfg.windowing;
    windowing.delta_ms = profile.delta_ms;
    const ddsim::WindowTable table = load_trace_windows(trace_path, windowing);
    if (table.delta_ms != profile.delta_ms) {
        throw ddsim::SchemaError("trace window length " +
                                 std::to_string(table.delta_ms) +
                                 " ms does not match profile delta " +
                                 std::to_string(profile.delta_ms) + " ms");
    }

    const ddsim::DetectorConfig det = cfg.detector.make(profile.size());
    const ddsim::DetectionReport report =
        ddsim::detect_stream(table.windows, profile, det);

    fs::create_directories(opt.out_dir);
    ddsim::write_verdicts_csv_file(opt.out_dir / "verdicts.csv", table.windows, report);

    json out;
    out["windows"] = table.windows.size();
    out["first_detection_window"] = report.first_detection_window
                                        ? json(*report.first_detection_window)
                                        : json();
    out["t_d_ms"] = report.detection_time_ms ? json(*report.detection_time_ms) : json();
    if (table.truth) {
        const auto intervals = ddsim::intervals_from_truth(*table.truth);
        const auto t_b = ddsim::overwhelm_time(table.windows,
                                               cfg.scenario.victim_capacity_mbps,
                                               cfg.scenario.overwhelm_sustain_windows,
                                               table.delta_ms);
        std::vector<std::optional<std::int64_t>> t_b_per(intervals.size(), t_b);
        const ddsim::EvalReport eval =
            ddsim::score_run(ddsim::alarm_flags(report.verdicts), *table.truth,
                             intervals, table.delta_ms, t_b_per);
        out["eval"] = ddsim::eval_report_to_json(eval);
        out["t_b_ms"] = t_b ? json(*t_b) : json();
    } else {
        out["eval"] = nullptr;
        out["t_b_ms"] = nullptr;
    }
    ddsim::write_file_atomic(opt.out_dir / "report.json", out.dump(2) + "\n");

    ddsim::RunManifest manifest = ddsim::make_manifest("detect", doc, std::nullopt);
    ddsim::record_input(manifest, trace_path);
    ddsim::record_input(manifest, profile_path);
    manifest.timestamps = {
        {"trace_start_ms", 0},
        {"trace_end_ms",
         static_cast<std::int64_t>(table.windows.size()) * table.delta_ms},
        {"delta_ms", table.delta_ms}};
    ddsim::record_output(manifest, opt.out_dir, "verdicts.csv");
    ddsim::record_output(manifest, opt.out_dir, "report.json");
    ddsim::write_manifest(opt.out_dir, manifest);

    if (report.first_detection_window) {
        std::cout << "detect: first alarm at window " << *report.first_detection_window
                  << " (t_d = " << *report.detection_time_ms << " ms)\n";
    } else {
        std::cout << "detect: no alarms over " << table.windows.size() << " windows\n";
    }
    return 0;
}

// --- coop -------------------------------------------------------------------

// Rebuild a LabeledTrace from a simulate output directory (victim plus
// per-edge record streams, truth from the labeled windows file).
ddsim::LabeledTrace load_run_dir(const fs::path& dir,
                                 const ddsim::WindowingConfig& windowing_base,
                                 std::vector<fs::path>* inputs) {
    const fs::path victim_windows_path = dir / "victim_windows.csv";
    const fs::path victim_records_path = dir / "victim_records.csv";
    ddsim::WindowTable table = ddsim::read_windows_csv_file(victim_windows_path);

    ddsim::LabeledTrace trace;
    trace.windowing = windowing_base;
    trace.windowing.delta_ms = table.delta_ms;
    if (table.truth) trace.truth = *table.truth;
    else trace.truth.assign(table.windows.size(), 0);

    const std::uint64_t window_count = table.windows.size();
    trace.victim_records = ddsim::read_records_csv_file(victim_records_path);
    trace.victim_windows =
        ddsim::window_partition(trace.victim_records, trace.windowing, window_count);
    if (trace.victim_windows.size() != window_count) {
        throw ddsim::SchemaError(victim_records_path.string() +
                                 ": records extend past the windows file");
    }
    if (inputs) {
        inputs->push_back(victim_windows_path);
        inputs->push_back(victim_records_path);
    }

    for (std::size_t e = 0;; ++e) {
        const fs::path edge_path = dir / edge_records_name(e);
        if (!fs::exists(edge_path)) break;
        const auto records = ddsim::read_records_csv_file(edge_path);
        trace.edge_windows.push_back(
            ddsim::window_partition(records, trace.windowing, window_count));
        trace.edge_records.push_back(records);
        if (inputs) inputs->push_back(edge_path);
    }
    if (trace.edge_records.empty()) {
        throw ddsim::SchemaError("no edge record streams (edge_000_records.csv...) in " +
                                 dir.string());
    }
    return trace;
}

int cmd_coop(const CommonOptions& opt, const fs::path& trace_dir,
             const fs::path& train_dir) {
    json doc;
    const ddsim::FullConfig cfg = load_validated(opt, doc);

    std::vector<fs::path> inputs;
    const ddsim::LabeledTrace train_trace =
        load_run_dir(train_dir, cfg.windowing, &inputs);
    const ddsim::LabeledTrace trace = load_run_dir(trace_dir, cfg.windowing, &inputs);
    if (train_trace.edge_windows.size() != trace.edge_windows.size()) {
        throw ddsim::SchemaError("training run has " +
                                 std::to_string(train_trace.edge_windows.size()) +
                                 " edges, trace has " +
                                 std::to_string(trace.edge_windows.size()));
    }

    const ddsim::CoopProfiles profiles = ddsim::train_coop_profiles(train_trace);
    const ddsim::CoopResult result =
        ddsim::run_coop_simulation(trace, profiles, cfg.coop);

    fs::create_directories(opt.out_dir);
    ddsim::write_central_verdicts_csv_file(opt.out_dir / "central_verdicts.csv",
                                           result.verdicts);
    ddsim::write_file_atomic(opt.out_dir / "coop_report.json",
                             ddsim::coop_report_to_json(result.report).dump(2) + "\n");
    ddsim::write_file_atomic(opt.out_dir / "messages.jsonl",
                             ddsim::messages_to_jsonl(result.messages));

    ddsim::RunManifest manifest = ddsim::make_manifest("coop", doc, std::nullopt);
    for (const fs::path& p : inputs) ddsim::record_input(manifest, p);
    manifest.timestamps = {
        {"trace_start_ms", 0},
        {"trace_end_ms", static_cast<std::int64_t>(trace.victim_windows.size()) *
                             trace.windowing.delta_ms},
        {"delta_ms", trace.windowing.delta_ms}};
    ddsim::record_output(manifest, opt.out_dir, "central_verdicts.csv");
    ddsim::record_output(manifest, opt.out_dir, "coop_report.json");
    ddsim::record_output(manifest, opt.out_dir, "messages.jsonl");
    ddsim::write_manifest(opt.out_dir, manifest);

    if (result.report.first_confirmation_window) {
        std::cout << "coop: first confirmation at window "
                  << *result.report.first_confirmation_window << " ("
                  << result.report.sas_sent << " SAs, "
                  << result.report.queries_issued << " queries)\n";
    } else {
        std::cout << "coop: no confirmations (" << result.report.sas_sent << " SAs, "
                  << result.report.queries_issued << " queries)\n";
    }
    return 0;
}

// --- roc --------------------------------------------------------------------

int cmd_roc(const CommonOptions& opt) {
    json doc;
    const ddsim::FullConfig cfg = load_validated(opt, doc);
    if (cfg.roc.suite.empty()) {
        throw ddsim::ConfigError("roc.suite must list at least one variant");
    }

    std::vector<ddsim::RunData> runs;
    for (const ddsim::RocVariant& variant : cfg.roc.suite) {
        json variant_doc = ddsim::merge_overrides(doc, variant.overrides);
        ddsim::FullConfig vcfg = ddsim::parse_config(variant_doc);
        if (vcfg.scenario.attack_mode == ddsim::AttackMode::none) {
            throw ddsim::ConfigError("roc.suite variant '" + variant.name +
                                     "' must set an attack mode");
        }
        for (std::size_t k = 0; k < variant.runs; ++k) {
            vcfg.scenario.rng_seed = cfg.roc.base_seed + k;
            vcfg.validate();
            const ddsim::Topology topo =
                ddsim::build_topology(vcfg.topology, vcfg.scenario.rng_seed);
            ddsim::ScenarioSpec normal = vcfg.scenario;
            normal.attack_mode = ddsim::AttackMode::none;
            const ddsim::LabeledTrace normal_trace =
                ddsim::run_scenario(topo, normal, vcfg.windowing);
            const ddsim::LabeledTrace attack_trace =
                ddsim::run_scenario(topo, vcfg.scenario, vcfg.windowing);
            runs.push_back(ddsim::make_run_data(normal_trace, attack_trace));
        }
    }
    const std::vector<ddsim::RocRow> rows = ddsim::roc_sweep(runs, cfg.roc.r_values);

    fs::create_directories(opt.out_dir);
    ddsim::write_roc_csv_file(opt.out_dir / "roc.csv", rows);

    ddsim::RunManifest manifest = ddsim::make_manifest("roc", doc, cfg.roc.base_seed);
    manifest.timestamps = ddsim::trace_timestamps(cfg);
    ddsim::record_output(manifest, opt.out_dir, "roc.csv");
    ddsim::write_manifest(opt.out_dir, manifest);

    std::cout << "roc: " << rows.size() << " sweep points over " << runs.size()
              << " runs -> " << (opt.out_dir / "roc.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flow-level DDoS attack simulation and anomaly detection"};
    app.require_subcommand(1);

    CommonOptions sim_opt;
    CLI::App* sim = app.add_subcommand("simulate", "generate a labeled traffic trace");
    add_common(sim, sim_opt);

    CommonOptions train_opt;
    fs::path train_trace;
    bool train_force = false;
    CLI::App* train = app.add_subcommand("train", "learn a normal profile from a trace");
    train->add_option("--trace", train_trace, "records or windows CSV")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_flag("--force", train_force, "train even on attack-labeled windows");
    add_common(train, train_opt, /*with_seed=*/false);

    CommonOptions detect_opt;
    fs::path detect_trace, detect_profile;
    CLI::App* detect = app.add_subcommand("detect", "run the detector over a trace");
    detect->add_option("--trace", detect_trace, "records or windows CSV")
        ->required()
        ->check(CLI::ExistingFile);
    detect->add_option("--profile", detect_profile, "normal profile JSON")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(detect, detect_opt, /*with_seed=*/false);

    CommonOptions coop_opt;
    fs::path coop_trace_dir, coop_train_dir;
    CLI::App* coop =
        app.add_subcommand("coop", "run the cooperative edge/central pipeline");
    coop->add_option("--trace", coop_trace_dir, "simulate output dir to analyze")
        ->required()
        ->check(CLI::ExistingDirectory);
    coop->add_option("--train", coop_train_dir,
                     "attack-free simulate output dir for profiles")
        ->required()
        ->check(CLI::ExistingDirectory);
    add_common(coop, coop_opt, /*with_seed=*/false);

    CommonOptions roc_opt;
    CLI::App* roc = app.add_subcommand("roc", "sweep the tolerance factor");
    add_common(roc, roc_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opt);
        if (train->parsed()) return cmd_train(train_opt, train_trace, train_force);
        if (detect->parsed()) return cmd_detect(detect_opt, detect_trace, detect_profile);
        if (coop->parsed()) return cmd_coop(coop_opt, coop_trace_dir, coop_train_dir);
        if (roc->parsed()) return cmd_roc(roc_opt);
    } catch (const ddsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ddsim::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 4;  // unreachable: a subcommand is required
}
