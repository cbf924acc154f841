#pragma once

#include "tprof/community.hpp"
#include "tprof/ingest.hpp"
#include "tprof/measures.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tprof {

inline constexpr const char* kToolVersion = "1.0.0";

/// Every tunable of a run. Defaults: 7-day merge gap, trips of at least 4
/// reviews, Klosgen weights thresholded at 0.1, clusters of at least 3.
struct PipelineConfig {
    std::string input;
    InputFormat format = InputFormat::csv;
    double max_bad_fraction = 0.5;
    int max_gap_days = 7;
    std::size_t min_trip_len = 4;
    bool dedup_consecutive = false;
    std::int64_t min_support_count = 1;
    Measure weight_measure = Measure::klosgen;
    double klosgen_threshold = 0.1;
    std::optional<std::size_t> k_mainstream;  ///< nullopt: elbow detection
    std::optional<int> sphere_distance;       ///< nullopt: from average sequence length
    double resolution = 1.0;
    std::uint64_t seed = 42;
    std::size_t min_cluster_size = 3;
    Symmetrize symmetrize = Symmetrize::mean;
    int best_of_n = 1;
    std::string output_dir = "out";

    /// Sets one field from its snake_case name and textual value
    /// ("auto" for k_mainstream / sphere_distance). Throws UsageError.
    void set(const std::string& key, const std::string& value);
    /// Throws UsageError when a parameter is out of range.
    void validate() const;
    nlohmann::ordered_json to_json() const;
};

/// Applies `key = value` lines (blank lines and '#' comments skipped) or a
/// JSON object with the same field names to `config`.
void apply_config_file(const std::filesystem::path& path, PipelineConfig& config);

/// File names of the artifacts written into the output directory.
namespace artifact {
inline constexpr const char* reviews = "reviews.normalized.csv";
inline constexpr const char* record_errors = "record_errors.csv";
inline constexpr const char* locations = "locations.csv";
inline constexpr const char* sequences = "sequences.tsv";
inline constexpr const char* rules = "rules.csv";
inline constexpr const char* measures = "measures.csv";
inline constexpr const char* graph_dot = "graph.dot";
inline constexpr const char* graph_graphml = "graph.graphml";
inline constexpr const char* edges = "edges.csv";
inline constexpr const char* spheres = "spheres.json";
inline constexpr const char* similarity = "similarity.csv";
inline constexpr const char* clusters = "clusters.json";
inline constexpr const char* manifest = "manifest.json";
} // namespace artifact

struct RunStats {
    std::size_t n_reviews = 0;
    std::size_t n_record_errors = 0;
    std::size_t n_users = 0;
    std::size_t n_trips = 0;
    std::size_t n_sequences = 0;
    double avg_trip_length = 0.0;
    std::size_t n_rules = 0;
    std::size_t n_nodes = 0;
    std::size_t n_arcs = 0;
    std::size_t n_arcs_thresholded = 0;
    std::size_t n_mainstream = 0;
    double coverage_fraction = 0.0;
    bool k_from_elbow = false;
    int sphere_distance = 0;
    std::size_t n_empty_spheres = 0;
    std::size_t n_communities = 0;
    std::size_t n_dropped = 0;
    double modularity = 0.0;
    std::vector<std::string> warnings;
};

struct RunManifest {
    PipelineConfig config;
    RunStats stats;
    std::map<std::string, double> timings_ms;
    std::string version = kToolVersion;

    nlohmann::ordered_json to_json() const;
};

/// Individual stages. Each reads the previous stage's artifacts from
/// config.output_dir (ingest reads config.input), writes its own, and
/// updates the matching fields of `stats`. Failures surface as StageError.
void stage_ingest(const PipelineConfig& config, RunStats& stats);
void stage_trips(const PipelineConfig& config, RunStats& stats);
/// With `verify`, the brute-force oracle must agree or a DataError is raised.
void stage_mine(const PipelineConfig& config, RunStats& stats, bool verify = false);
void stage_measure(const PipelineConfig& config, RunStats& stats);
void stage_graph(const PipelineConfig& config, RunStats& stats);
/// Reads the graph from `graph_path` when given, else from the output dir.
void stage_spheres(const PipelineConfig& config, RunStats& stats, const std::string& graph_path = {});
void stage_similarity(const PipelineConfig& config, RunStats& stats);
void stage_cluster(const PipelineConfig& config, RunStats& stats, const std::string& graph_path = {});

/// All stages in order, then the manifest.
RunManifest run_pipeline(const PipelineConfig& config);

} // namespace tprof
