#include "tprof/pipeline.hpp"

#include "tprof/csv.hpp"
#include "tprof/errors.hpp"
#include "tprof/graph_io.hpp"
#include "tprof/influence.hpp"
#include "tprof/movement_graph.hpp"
#include "tprof/rule_mining.hpp"
#include "tprof/trips.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace tprof {

namespace fs = std::filesystem;

namespace {

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

fs::path in_dir(const PipelineConfig& c, const char* name) { return fs::path(c.output_dir) / name; }

template <class Fn>
void guarded(const char* stage, Fn&& fn) {
    try {
        fn();
    } catch (const StageError&) {
        throw;
    } catch (const UsageError& e) {
        throw StageError(stage, StageError::Kind::usage, e.what());
    } catch (const DataError& e) {
        throw StageError(stage, StageError::Kind::data, e.what());
    } catch (const IoError& e) {
        throw StageError(stage, StageError::Kind::data, e.what());
    } catch (const OracleRefusal& e) {
        throw StageError(stage, StageError::Kind::data, e.what());
    } catch (const std::exception& e) {
        throw StageError(stage, StageError::Kind::internal, e.what());
    }
}

SequenceDataset load_sequences(const PipelineConfig& c) {
    auto in = open_in(in_dir(c, artifact::sequences));
    return read_sequences(in);
}

std::vector<SequentialRule> load_rules(const PipelineConfig& c) {
    auto in = open_in(in_dir(c, artifact::rules));
    return read_rules_csv(in);
}

MovementGraph load_graph(const PipelineConfig& c, const std::string& override_path) {
    auto in = open_in(override_path.empty() ? in_dir(c, artifact::graph_dot) : fs::path(override_path));
    return read_dot(in);
}

std::vector<SphereOfInfluence> load_spheres(const PipelineConfig& c) {
    auto in = open_in(in_dir(c, artifact::spheres));
    return read_spheres_json(in);
}

NameMap load_names(const PipelineConfig& c) {
    NameMap names;
    const auto path = in_dir(c, artifact::locations);
    if (!fs::exists(path)) return names;
    auto in = open_in(path);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto f = csv::split_record(line);
        if (f.size() != 2) throw DataError("locations CSV row must have 2 fields");
        names.emplace(f[0], f[1]);
    }
    return names;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T v{};
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw UsageError("invalid value '" + value + "' for " + key);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw UsageError("invalid boolean '" + value + "' for " + key);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

void PipelineConfig::set(const std::string& raw_key, const std::string& value) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "input") {
        input = value;
    } else if (key == "format") {
        auto f = parse_input_format(value);
        if (!f) throw UsageError("format must be csv or jsonl");
        format = *f;
    } else if (key == "max_bad_fraction") {
        max_bad_fraction = parse_number<double>(key, value);
    } else if (key == "max_gap_days") {
        max_gap_days = parse_number<int>(key, value);
    } else if (key == "min_trip_len") {
        min_trip_len = parse_number<std::size_t>(key, value);
    } else if (key == "dedup_consecutive") {
        dedup_consecutive = parse_bool(key, value);
    } else if (key == "min_support_count") {
        min_support_count = parse_number<std::int64_t>(key, value);
    } else if (key == "weight_measure") {
        weight_measure = parse_measure(value);
    } else if (key == "klosgen_threshold") {
        klosgen_threshold = parse_number<double>(key, value);
    } else if (key == "k_mainstream") {
        if (value == "auto")
            k_mainstream.reset();
        else
            k_mainstream = parse_number<std::size_t>(key, value);
    } else if (key == "sphere_distance") {
        if (value == "auto")
            sphere_distance.reset();
        else
            sphere_distance = parse_number<int>(key, value);
    } else if (key == "resolution") {
        resolution = parse_number<double>(key, value);
    } else if (key == "seed") {
        seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "min_cluster_size") {
        min_cluster_size = parse_number<std::size_t>(key, value);
    } else if (key == "symmetrize") {
        symmetrize = parse_symmetrize(value);
    } else if (key == "best_of_n") {
        best_of_n = parse_number<int>(key, value);
    } else if (key == "output_dir") {
        output_dir = value;
    } else {
        throw UsageError("unknown configuration key '" + raw_key + "'");
    }
}

void PipelineConfig::validate() const {
    if (!(max_bad_fraction >= 0.0 && max_bad_fraction <= 1.0)) throw UsageError("max_bad_fraction must be in [0, 1]");
    if (max_gap_days < 0) throw UsageError("max_gap_days must be >= 0");
    if (min_trip_len < 1) throw UsageError("min_trip_len must be >= 1");
    if (min_support_count < 1) throw UsageError("min_support_count must be >= 1");
    if (weight_measure != Measure::klosgen && weight_measure != Measure::support &&
        weight_measure != Measure::confidence && weight_measure != Measure::lift)
        throw UsageError("weight_measure must be klosgen, support, confidence or lift");
    if (!std::isfinite(klosgen_threshold)) throw UsageError("klosgen_threshold must be finite");
    if (k_mainstream && *k_mainstream < 1) throw UsageError("k_mainstream must be >= 1 or auto");
    if (sphere_distance && *sphere_distance < 1) throw UsageError("sphere_distance must be >= 1 or auto");
    if (!(resolution > 0.0) || !std::isfinite(resolution)) throw UsageError("resolution must be positive");
    if (min_cluster_size < 1) throw UsageError("min_cluster_size must be >= 1");
    if (best_of_n < 1) throw UsageError("best_of_n must be >= 1");
    if (output_dir.empty()) throw UsageError("output_dir must not be empty");
}

nlohmann::ordered_json PipelineConfig::to_json() const {
    nlohmann::ordered_json j;
    j["input"] = input;
    j["format"] = format == InputFormat::csv ? "csv" : "jsonl";
    j["max_bad_fraction"] = max_bad_fraction;
    j["max_gap_days"] = max_gap_days;
    j["min_trip_len"] = min_trip_len;
    j["dedup_consecutive"] = dedup_consecutive;
    j["min_support_count"] = min_support_count;
    j["weight_measure"] = std::string(to_string(weight_measure));
    j["klosgen_threshold"] = klosgen_threshold;
    if (k_mainstream)
        j["k_mainstream"] = *k_mainstream;
    else
        j["k_mainstream"] = "auto";
    if (sphere_distance)
        j["sphere_distance"] = *sphere_distance;
    else
        j["sphere_distance"] = "auto";
    j["resolution"] = resolution;
    j["seed"] = seed;
    j["min_cluster_size"] = min_cluster_size;
    j["symmetrize"] = std::string(to_string(symmetrize));
    j["best_of_n"] = best_of_n;
    j["output_dir"] = output_dir;
    return j;
}

void apply_config_file(const fs::path& path, PipelineConfig& config) {
    auto in = open_in(path);
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const auto doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) throw UsageError("config file " + path.string() + " is not valid JSON");
        for (const auto& [key, value] : doc.items()) {
            if (value.is_string())
                config.set(key, value.get<std::string>());
            else if (value.is_boolean())
                config.set(key, value.get<bool>() ? "true" : "false");
            else
                config.set(key, value.dump());
        }
        return;
    }
    std::istringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        config.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void stage_ingest(const PipelineConfig& config, RunStats& stats) {
    guarded("ingest", [&] {
        if (config.input.empty()) throw UsageError("no input file given");
        ParseOptions options;
        options.max_bad_fraction = config.max_bad_fraction;
        auto parsed = parse_reviews_file(config.input, config.format, options);

        stats.n_reviews = parsed.reviews.size();
        stats.n_record_errors = parsed.errors.size();
        const auto timelines = build_timelines(std::move(parsed.reviews));
        stats.n_users = timelines.size();

        std::vector<Review> ordered;
        ordered.reserve(stats.n_reviews);
        for (const auto& t : timelines) ordered.insert(ordered.end(), t.reviews.begin(), t.reviews.end());

        const auto reviews_path = in_dir(config, artifact::reviews);
        auto out = open_out(reviews_path);
        write_reviews_csv(out, ordered);
        close_checked(out, reviews_path);

        const auto errors_path = in_dir(config, artifact::record_errors);
        auto err = open_out(errors_path);
        err << "line,reason\n";
        for (const auto& e : parsed.errors) csv::write_record(err, {std::to_string(e.line), e.reason});
        close_checked(err, errors_path);
    });
}

void stage_trips(const PipelineConfig& config, RunStats& stats) {
    guarded("trips", [&] {
        ParseOptions options;
        options.max_bad_fraction = config.max_bad_fraction;
        auto parsed = parse_reviews_file(in_dir(config, artifact::reviews).string(), InputFormat::csv, options);

        NameMap names;
        for (const auto& r : parsed.reviews) names.emplace(r.location_id, r.location_name);

        const auto timelines = build_timelines(std::move(parsed.reviews));
        stats.n_users = timelines.size();
        const auto trips = build_trips(timelines, config.max_gap_days);
        const auto dataset = build_sequence_dataset(trips, config.min_trip_len, config.dedup_consecutive);
        stats.n_trips = trips.size();
        stats.n_sequences = dataset.count();
        stats.avg_trip_length = dataset.avg_length();

        const auto seq_path = in_dir(config, artifact::sequences);
        auto out = open_out(seq_path);
        write_sequences(out, dataset);
        close_checked(out, seq_path);

        const auto loc_path = in_dir(config, artifact::locations);
        auto loc = open_out(loc_path);
        loc << "location_id,location_name\n";
        for (const auto& [id, name] : names) csv::write_record(loc, {id, name});
        close_checked(loc, loc_path);
    });
}

void stage_mine(const PipelineConfig& config, RunStats& stats, bool verify) {
    guarded("mine", [&] {
        const auto dataset = load_sequences(config);
        const auto rules = mine_rules(dataset, config.min_support_count);
        if (verify) {
            auto oracle = brute_force_rules(dataset, config.min_support_count);
            if (oracle != rules) throw std::logic_error("mined rules disagree with the brute-force oracle");
        }
        stats.n_rules = rules.size();
        const auto path = in_dir(config, artifact::rules);
        auto out = open_out(path);
        write_rules_csv(out, rules);
        close_checked(out, path);
    });
}

void stage_measure(const PipelineConfig& config, RunStats& stats) {
    guarded("measure", [&] {
        const auto measured = compute_all_measures(load_rules(config));
        stats.n_rules = measured.size();
        const auto path = in_dir(config, artifact::measures);
        auto out = open_out(path);
        write_measures_csv(out, measured);
        close_checked(out, path);
    });
}

void stage_graph(const PipelineConfig& config, RunStats& stats) {
    guarded("graph", [&] {
        const auto measured = compute_all_measures(load_rules(config));
        const auto supports = node_supports(load_sequences(config));
        const auto graph = build_graph(measured, config.weight_measure, supports, load_names(config));
        const auto selection = select_mainstream(graph, config.k_mainstream);
        if (selection.clamped)
            stats.warnings.push_back("k_mainstream " + std::to_string(*config.k_mainstream) + " clamped to " +
                                     std::to_string(selection.k) + " nodes");
        const auto marked = mark_mainstream(graph, selection);

        stats.n_nodes = marked.node_count();
        stats.n_arcs = marked.arc_count();
        stats.n_mainstream = selection.k;
        stats.coverage_fraction = selection.coverage_fraction;
        stats.k_from_elbow = selection.elbow;

        const auto dot_path = in_dir(config, artifact::graph_dot);
        auto dot = open_out(dot_path);
        write_dot(dot, marked);
        close_checked(dot, dot_path);
        const auto ml_path = in_dir(config, artifact::graph_graphml);
        auto ml = open_out(ml_path);
        write_graphml(ml, marked);
        close_checked(ml, ml_path);
        const auto edge_path = in_dir(config, artifact::edges);
        auto edges = open_out(edge_path);
        write_edge_csv(edges, marked);
        close_checked(edges, edge_path);
    });
}

void stage_spheres(const PipelineConfig& config, RunStats& stats, const std::string& graph_path) {
    guarded("spheres", [&] {
        const auto graph = load_graph(config, graph_path);
        const auto selection = select_mainstream(graph, config.k_mainstream);
        const auto sub = threshold_subgraph(graph, config.klosgen_threshold);
        stats.n_nodes = graph.node_count();
        stats.n_arcs = graph.arc_count();
        stats.n_arcs_thresholded = sub.arc_count();
        stats.n_mainstream = selection.k;
        stats.coverage_fraction = selection.coverage_fraction;
        stats.k_from_elbow = selection.elbow;

        int distance = 0;
        if (config.sphere_distance) {
            distance = *config.sphere_distance;
        } else {
            const auto seq_path = in_dir(config, artifact::sequences);
            if (!fs::exists(seq_path))
                throw UsageError("automatic sphere distance needs " + seq_path.string() + "; pass a distance instead");
            const auto dataset = load_sequences(config);
            if (dataset.count() > 0) distance = sphere_distance(dataset);
        }

        std::vector<SphereOfInfluence> spheres;
        if (!selection.mainstream.empty()) {
            if (distance < 1) throw DataError("no sequences to derive a sphere distance from");
            spheres = spheres_of_influence(sub, selection.mainstream, distance);
        }
        stats.sphere_distance = distance;

        const auto path = in_dir(config, artifact::spheres);
        auto out = open_out(path);
        write_spheres_json(out, spheres);
        close_checked(out, path);
    });
}

void stage_similarity(const PipelineConfig& config, RunStats& stats) {
    guarded("similarity", [&] {
        const auto matrix = similarity_matrix(load_spheres(config));
        stats.n_empty_spheres = matrix.empty_rows().size();
        const auto path = in_dir(config, artifact::similarity);
        auto out = open_out(path);
        write_similarity_csv(out, matrix);
        close_checked(out, path);
    });
}

void stage_cluster(const PipelineConfig& config, RunStats& stats, const std::string& graph_path) {
    guarded("cluster", [&] {
        const auto matrix = similarity_matrix(load_spheres(config));
        const auto metadata = load_graph(config, graph_path);

        ClusterParameters params;
        params.resolution = config.resolution;
        params.seed = config.seed;
        params.min_cluster_size = config.min_cluster_size;
        params.symmetrize = config.symmetrize;
        params.best_of_n = config.best_of_n;

        const auto weighted = matrix_to_weighted_graph(matrix, config.symmetrize);
        const auto assignment = filter_clusters(louvain(weighted, params), config.min_cluster_size);
        stats.n_communities = assignment.communities.size();
        stats.n_dropped = assignment.dropped.size();
        stats.modularity = assignment.modularity;
        stats.n_empty_spheres = matrix.empty_rows().size();

        const auto path = in_dir(config, artifact::clusters);
        auto out = open_out(path);
        out << profile_report(assignment, matrix, metadata).dump(2) << '\n';
        close_checked(out, path);
    });
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = version;
    j["config"] = config.to_json();
    nlohmann::ordered_json s;
    s["n_reviews"] = stats.n_reviews;
    s["n_record_errors"] = stats.n_record_errors;
    s["n_users"] = stats.n_users;
    s["n_trips"] = stats.n_trips;
    s["n_sequences"] = stats.n_sequences;
    s["avg_trip_length"] = stats.avg_trip_length;
    s["n_rules"] = stats.n_rules;
    s["n_nodes"] = stats.n_nodes;
    s["n_arcs"] = stats.n_arcs;
    s["n_arcs_thresholded"] = stats.n_arcs_thresholded;
    s["n_mainstream"] = stats.n_mainstream;
    s["coverage_fraction"] = stats.coverage_fraction;
    s["k_from_elbow"] = stats.k_from_elbow;
    s["sphere_distance"] = stats.sphere_distance;
    s["n_empty_spheres"] = stats.n_empty_spheres;
    s["n_communities"] = stats.n_communities;
    s["n_dropped"] = stats.n_dropped;
    s["modularity"] = stats.modularity;
    j["stats"] = std::move(s);
    j["warnings"] = stats.warnings;
    j["timings_ms"] = timings_ms;
    return j;
}

RunManifest run_pipeline(const PipelineConfig& config) {
    guarded("config", [&] { config.validate(); });

    RunManifest manifest;
    manifest.config = config;
    auto& stats = manifest.stats;
    const auto timed = [&](const char* name, auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        manifest.timings_ms[name] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };

    timed("ingest", [&] { stage_ingest(config, stats); });
    timed("trips", [&] { stage_trips(config, stats); });
    timed("mine", [&] { stage_mine(config, stats); });
    timed("measure", [&] { stage_measure(config, stats); });
    timed("graph", [&] { stage_graph(config, stats); });
    timed("spheres", [&] { stage_spheres(config, stats); });
    timed("similarity", [&] { stage_similarity(config, stats); });
    timed("cluster", [&] { stage_cluster(config, stats); });

    guarded("manifest", [&] {
        const auto path = in_dir(config, artifact::manifest);
        auto out = open_out(path);
        out << manifest.to_json().dump(2) << '\n';
        close_checked(out, path);
    });
    return manifest;
}

} // namespace tprof
