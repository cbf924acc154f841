#pragma once

#include "tprof/influence.hpp"
#include "tprof/movement_graph.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tprof {

/// Undirected weighted graph without self-loops.
class WeightedGraph {
public:
    struct Edge {
        std::size_t to;
        double weight;
    };

    WeightedGraph() = default;
    explicit WeightedGraph(std::vector<std::string> ids) : ids_(std::move(ids)), adj_(ids_.size()) {}

    /// Adds weight to {a, b}. Ignores self-loops and non-positive weights.
    void add_edge(std::size_t a, std::size_t b, double weight);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<Edge>& neighbours(std::size_t i) const { return adj_[i]; }
    /// Weight of {a, b}, 0 when absent.
    double weight(std::size_t a, std::size_t b) const;
    /// Sum of edge weights (m).
    double total_weight() const;
    std::size_t edge_count() const;

private:
    std::vector<std::string> ids_;
    std::vector<std::vector<Edge>> adj_;
};

enum class Symmetrize { mean, max, min };

Symmetrize parse_symmetrize(std::string_view name);
std::string_view to_string(Symmetrize s);

/// w(i, j) = combine(M(i, j), M(j, i)) for i != j; zero weights give no edge.
WeightedGraph matrix_to_weighted_graph(const SimilarityMatrix& m, Symmetrize mode = Symmetrize::mean);

/// Q = (1/2m) sum_ij [A_ij - r k_i k_j / 2m] delta(c_i, c_j); 0 for an edgeless graph.
double modularity(const WeightedGraph& graph, const std::vector<std::size_t>& labels, double resolution = 1.0);

struct Partition {
    std::vector<std::size_t> labels;  ///< community per node, numbered 0..k-1 by first appearance
    double modularity = 0.0;
    int levels = 0;
};

/// Two-phase Louvain: local moves until no gain, then aggregation, repeated
/// until a level makes no move. Node visiting order is shuffled from `seed`.
Partition louvain_partition(const WeightedGraph& graph, double resolution, std::uint64_t seed);

struct ClusterParameters {
    double resolution = 1.0;
    std::uint64_t seed = 42;
    std::size_t min_cluster_size = 3;
    Symmetrize symmetrize = Symmetrize::mean;
    int best_of_n = 1;
};

struct ClusterAssignment {
    std::vector<std::vector<std::string>> communities;  ///< members sorted; largest first
    std::vector<std::vector<std::string>> dropped;
    double modularity = 0.0;
    ClusterParameters parameters;
};

/// Communities of `graph` as id sets. With best_of_n > 1, seeds seed ..
/// seed + n - 1 are tried and the highest modularity wins (earliest on ties).
ClusterAssignment louvain(const WeightedGraph& graph, const ClusterParameters& params);
inline ClusterAssignment louvain(const WeightedGraph& graph, double resolution = 1.0, std::uint64_t seed = 42) {
    ClusterParameters p;
    p.resolution = resolution;
    p.seed = seed;
    return louvain(graph, p);
}

/// Moves communities smaller than min_cluster_size to `dropped`.
ClusterAssignment filter_clusters(ClusterAssignment assignment, std::size_t min_cluster_size);

/// Mean of M(i, j) over ordered pairs i != j with i in `a`, j in `b`
/// (i and j drawn from the same set when a == b). 0 when there is no pair.
double mean_similarity(const SimilarityMatrix& m, const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Per-cluster members (name, support), mean intra-cluster similarity,
/// mean similarity to every other cluster, plus modularity and parameters.
nlohmann::ordered_json profile_report(const ClusterAssignment& assignment, const SimilarityMatrix& m,
                                      const MovementGraph& metadata);

} // namespace tprof
