#pragma once

#include "tprof/measures.hpp"
#include "tprof/trips.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tprof {

struct GraphNode {
    std::string id;
    std::string name;
    std::int64_t support = 0;  ///< occurrences over the sequence dataset
    bool mainstream = false;

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct Arc {
    std::size_t src = 0;
    std::size_t dst = 0;
    double weight = 0.0;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed weighted graph of movements between locations. Immutable once
/// built: nodes sorted by id, arcs sorted by (src, dst), no self-arcs and at
/// most one arc per ordered pair.
class MovementGraph {
public:
    MovementGraph() = default;

    const std::vector<GraphNode>& nodes() const { return nodes_; }
    /// Arcs hold indices into nodes().
    const std::vector<Arc>& arcs() const { return arcs_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }

    std::optional<std::size_t> find(std::string_view id) const;
    const GraphNode& node(std::size_t i) const { return nodes_[i]; }
    std::optional<double> weight(std::string_view src, std::string_view dst) const;

    /// Out-neighbour indices per node, ascending.
    std::vector<std::vector<std::size_t>> out_adjacency() const;

    /// Same nodes and arcs, weights compared at `tolerance`.
    bool equivalent(const MovementGraph& other, double tolerance = 1e-9) const;

private:
    friend class GraphBuilder;
    std::vector<GraphNode> nodes_;
    std::vector<Arc> arcs_;
};

class GraphBuilder {
public:
    /// Adds a node; a repeated id overwrites name, support and flag.
    GraphBuilder& add_node(GraphNode node);
    /// Throws UsageError on a self-arc or a repeated (src, dst) pair.
    /// Endpoints not yet added are created with default attributes.
    GraphBuilder& add_arc(const std::string& src, const std::string& dst, double weight);

    MovementGraph build() const;

private:
    std::map<std::string, GraphNode, std::less<>> nodes_;
    std::map<std::pair<std::string, std::string>, double> arcs_;
};

using SupportMap = std::map<std::string, std::int64_t>;
using NameMap = std::map<std::string, std::string>;

/// Occurrence count of every location over all sequences (repeats counted).
SupportMap node_supports(const SequenceDataset& dataset);

/// One node per rule endpoint and one arc per rule, weighted by `weight`.
/// Node supports and display names are looked up in the given maps;
/// missing entries give support 0 and the id as name.
MovementGraph build_graph(const std::vector<MeasuredRule>& rules, Measure weight, const SupportMap& supports,
                          const NameMap& names = {});

/// Keeps every node and only the arcs with weight strictly above `threshold`.
MovementGraph threshold_subgraph(const MovementGraph& graph, double threshold);

struct MainstreamSelection {
    std::vector<std::string> mainstream;  ///< by descending support, ties by id
    std::vector<std::string> secondary;   ///< sorted by id
    std::size_t k = 0;
    double coverage_fraction = 0.0;
    bool clamped = false;  ///< requested k exceeded the node count
    bool elbow = false;    ///< k was chosen by elbow detection
};

/// Index (1-based count of leading items) of the elbow of the cumulative
/// coverage curve of `sorted_desc`: the point farthest above the chord from
/// (0, 0) to (n, total), both axes normalised. A straight curve gives n.
std::size_t elbow_k(const std::vector<std::int64_t>& sorted_desc);

/// Picks the k highest-support nodes as mainstream. Without `k`, k comes
/// from elbow_k over the support curve.
MainstreamSelection select_mainstream(const MovementGraph& graph, std::optional<std::size_t> k = std::nullopt);

/// Copy of `graph` with the mainstream flag set for the selected nodes only.
MovementGraph mark_mainstream(const MovementGraph& graph, const MainstreamSelection& selection);

} // namespace tprof
