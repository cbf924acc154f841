// Command line front end: one subcommand per pipeline stage plus `run`
// (everything) and `synth` (planted-community test data).

#include "tprof/errors.hpp"
#include "tprof/measures.hpp"
#include "tprof/pipeline.hpp"
#include "tprof/rule_mining.hpp"
#include "tprof/synthetic.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

enum ExitCode { ok = 0, usage = 1, data = 2, internal = 3 };

// Raw option text keyed by PipelineConfig field name. Only options the
// user actually passed override the config file.
struct Overrides {
    std::map<std::string, std::string> values;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    bool dedup = false;
    CLI::Option* dedup_flag = nullptr;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        options.emplace_back(key, app->add_option(flag, values[key], help));
    }

    void apply(tprof::PipelineConfig& config) const {
        for (const auto& [key, opt] : options)
            if (opt->count() > 0) config.set(key, values.at(key));
        if (dedup_flag && dedup_flag->count() > 0) config.dedup_consecutive = dedup;
    }
};

void ingest_options(CLI::App* app, Overrides& o) {
    o.add(app, "--input", "input", "Review dump (CSV or JSONL)");
    o.add(app, "--format", "format", "csv | jsonl");
    o.add(app, "--max-bad-fraction", "max_bad_fraction", "Abort when more records than this are malformed");
}

void trip_options(CLI::App* app, Overrides& o) {
    o.add(app, "--max-gap-days", "max_gap_days", "Longest break bridged when merging trips (7)");
    o.add(app, "--min-trip-len", "min_trip_len", "Shortest sequence kept (4)");
    o.dedup_flag = app->add_flag("--dedup-consecutive", o.dedup, "Collapse immediate repeats of a location");
}

void mining_options(CLI::App* app, Overrides& o) {
    o.add(app, "--min-support-count", "min_support_count", "Minimum sequences per rule (1)");
}

void graph_options(CLI::App* app, Overrides& o) {
    o.add(app, "--weight-measure", "weight_measure", "klosgen | support | confidence | lift");
    o.add(app, "--k-mainstream", "k_mainstream", "auto | N");
}

void sphere_options(CLI::App* app, Overrides& o) {
    o.add(app, "--klosgen-threshold", "klosgen_threshold", "Keep arcs with weight strictly above this (0.1)");
    o.add(app, "--sphere-distance", "sphere_distance", "auto | N");
}

void cluster_options(CLI::App* app, Overrides& o) {
    o.add(app, "--resolution", "resolution", "Modularity resolution (1.0)");
    o.add(app, "--seed", "seed", "Louvain shuffle seed (42)");
    o.add(app, "--min-cluster-size", "min_cluster_size", "Drop smaller communities (3)");
    o.add(app, "--symmetrize", "symmetrize", "mean | max | min");
    o.add(app, "--best-of-n", "best_of_n", "Louvain runs with consecutive seeds; best modularity kept");
}

void print_stats(const tprof::RunStats& stats) {
    tprof::RunManifest m;
    m.stats = stats;
    std::cout << m.to_json()["stats"].dump(2) << '\n';
    for (const auto& w : stats.warnings) std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tourist profiling from review logs: trips, direct-follow rules, movement graph, "
                 "spheres of influence and Louvain communities"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_file;
    std::string out_dir;
    app.add_option("--config", config_file, "key = value (or JSON) file with PipelineConfig fields");
    app.add_option("--out", out_dir, "Artifact directory (default: out)");

    Overrides o;
    bool verify = false;
    std::string graph_path;
    std::size_t top_k = 0;
    std::string top_by = "klosgen";

    auto* ingest = app.add_subcommand("ingest", "Parse and validate reviews");
    ingest_options(ingest, o);

    auto* trips = app.add_subcommand("trips", "Segment and merge trips into sequences");
    trip_options(trips, o);

    auto* mine = app.add_subcommand("mine", "Mine direct-follow rules");
    mining_options(mine, o);
    mine->add_flag("--verify", verify, "Cross-check against the brute-force miner");

    auto* measure = app.add_subcommand("measure", "Compute interest measures");
    measure->add_option("--top-k", top_k, "Also print the top K rules");
    measure->add_option("--top-by", top_by, "Ranking measure for --top-k");

    auto* graph = app.add_subcommand("graph", "Build the movement graph and select mainstream nodes");
    graph_options(graph, o);

    auto* spheres = app.add_subcommand("spheres", "Spheres of influence of mainstream nodes");
    spheres->add_option("--graph", graph_path, "Graph DOT file (default: <out>/graph.dot)");
    o.add(spheres, "--k-mainstream", "k_mainstream", "auto | N");
    sphere_options(spheres, o);

    auto* similarity = app.add_subcommand("similarity", "Pairwise sphere similarity matrix");

    auto* cluster = app.add_subcommand("cluster", "Louvain communities over the similarity matrix");
    cluster->add_option("--graph", graph_path, "Graph DOT file for names and supports");
    cluster_options(cluster, o);

    auto* run = app.add_subcommand("run", "Run every stage");
    ingest_options(run, o);
    trip_options(run, o);
    mining_options(run, o);
    graph_options(run, o);
    sphere_options(run, o);
    cluster_options(run, o);

    tprof::SyntheticConfig synth_cfg;
    std::string synth_output;
    auto* synth = app.add_subcommand("synth", "Generate reviews with planted location communities");
    synth->add_option("--users", synth_cfg.n_users, "Number of users");
    synth->add_option("--locations", synth_cfg.n_locations, "Number of locations");
    synth->add_option("--communities", synth_cfg.planted_communities, "Planted communities");
    synth->add_option("--odds", synth_cfg.intra_odds, "Intra:inter transition odds");
    synth->add_option("--seed", synth_cfg.seed, "Generator seed");
    synth->add_option("--output", synth_output, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (synth->parsed()) {
            if (synth_output.empty()) {
                tprof::generate_synthetic(std::cout, synth_cfg);
            } else {
                std::ofstream out(synth_output, std::ios::binary);
                if (!out) throw tprof::IoError("cannot write " + synth_output);
                tprof::generate_synthetic(out, synth_cfg);
            }
            return ok;
        }

        tprof::PipelineConfig config;
        if (!config_file.empty()) tprof::apply_config_file(config_file, config);
        o.apply(config);
        if (!out_dir.empty()) config.output_dir = out_dir;
        config.validate();

        tprof::RunStats stats;
        if (run->parsed()) {
            const auto manifest = tprof::run_pipeline(config);
            std::cout << manifest.to_json()["stats"].dump(2) << '\n';
            for (const auto& w : manifest.stats.warnings) std::cerr << "warning: " << w << '\n';
            return ok;
        }
        if (ingest->parsed()) tprof::stage_ingest(config, stats);
        if (trips->parsed()) tprof::stage_trips(config, stats);
        if (mine->parsed()) tprof::stage_mine(config, stats, verify);
        if (measure->parsed()) {
            tprof::stage_measure(config, stats);
            if (top_k > 0) {
                const auto by = tprof::parse_measure(top_by);
                std::ifstream in(std::filesystem::path(config.output_dir) / tprof::artifact::rules);
                const auto measured = tprof::compute_all_measures(tprof::read_rules_csv(in));
                tprof::write_measure_table(std::cout, tprof::measure_table(measured, by, top_k));
                return ok;
            }
        }
        if (graph->parsed()) tprof::stage_graph(config, stats);
        if (spheres->parsed()) tprof::stage_spheres(config, stats, graph_path);
        if (similarity->parsed()) tprof::stage_similarity(config, stats);
        if (cluster->parsed()) tprof::stage_cluster(config, stats, graph_path);
        print_stats(stats);
        return ok;
    } catch (const tprof::StageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
        case tprof::StageError::Kind::usage: return usage;
        case tprof::StageError::Kind::data: return data;
        case tprof::StageError::Kind::internal: return internal;
        }
        return internal;
    } catch (const tprof::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const tprof::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return internal;
    }
}
