#include "tprof/movement_graph.hpp"

#include "tprof/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tprof {

std::optional<std::size_t> MovementGraph::find(std::string_view id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const GraphNode& n, std::string_view key) { return n.id < key; });
    if (it == nodes_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::optional<double> MovementGraph::weight(std::string_view src, std::string_view dst) const {
    const auto s = find(src);
    const auto d = find(dst);
    if (!s || !d) return std::nullopt;
    auto it = std::lower_bound(arcs_.begin(), arcs_.end(), std::pair{*s, *d},
                               [](const Arc& a, const std::pair<std::size_t, std::size_t>& key) {
                                   return std::pair{a.src, a.dst} < key;
                               });
    if (it == arcs_.end() || it->src != *s || it->dst != *d) return std::nullopt;
    return it->weight;
}

std::vector<std::vector<std::size_t>> MovementGraph::out_adjacency() const {
    std::vector<std::vector<std::size_t>> adj(nodes_.size());
    for (const auto& a : arcs_) adj[a.src].push_back(a.dst);
    return adj;
}

bool MovementGraph::equivalent(const MovementGraph& other, double tolerance) const {
    if (nodes_ != other.nodes_ || arcs_.size() != other.arcs_.size()) return false;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        const auto& a = arcs_[i];
        const auto& b = other.arcs_[i];
        if (a.src != b.src || a.dst != b.dst || !(std::abs(a.weight - b.weight) <= tolerance)) return false;
    }
    return true;
}

GraphBuilder& GraphBuilder::add_node(GraphNode node) {
    auto id = node.id;
    if (id.empty()) throw UsageError("node id must not be empty");
    nodes_.insert_or_assign(std::move(id), std::move(node));
    return *this;
}

GraphBuilder& GraphBuilder::add_arc(const std::string& src, const std::string& dst, double weight) {
    if (src == dst) throw UsageError("self-arc on '" + src + "'");
    if (src.empty() || dst.empty()) throw UsageError("arc endpoint must not be empty");
    if (!arcs_.emplace(std::pair{src, dst}, weight).second)
        throw UsageError("duplicate arc " + src + " -> " + dst);
    for (const auto* id : {&src, &dst})
        if (!nodes_.contains(*id)) nodes_.emplace(*id, GraphNode{*id, *id, 0, false});
    return *this;
}

MovementGraph GraphBuilder::build() const {
    MovementGraph g;
    g.nodes_.reserve(nodes_.size());
    for (const auto& [id, node] : nodes_) g.nodes_.push_back(node);
    g.arcs_.reserve(arcs_.size());
    // arcs_ iterates in (src, dst) id order, which is also index order
    for (const auto& [key, w] : arcs_) g.arcs_.push_back({*g.find(key.first), *g.find(key.second), w});
    return g;
}

SupportMap node_supports(const SequenceDataset& dataset) {
    SupportMap supports;
    for (const auto& seq : dataset.sequences)
        for (const auto& loc : seq) ++supports[loc];
    return supports;
}

MovementGraph build_graph(const std::vector<MeasuredRule>& rules, Measure weight, const SupportMap& supports,
                          const NameMap& names) {
    GraphBuilder builder;
    for (const auto& r : rules) {
        for (const auto* id : {&r.rule.antecedent, &r.rule.consequent}) {
            auto s = supports.find(*id);
            auto n = names.find(*id);
            builder.add_node({*id, n == names.end() ? *id : n->second, s == supports.end() ? 0 : s->second, false});
        }
    }
    for (const auto& r : rules) builder.add_arc(r.rule.antecedent, r.rule.consequent, measure_value(r.measures, weight));
    return builder.build();
}

MovementGraph threshold_subgraph(const MovementGraph& graph, double threshold) {
    GraphBuilder builder;
    for (const auto& n : graph.nodes()) builder.add_node(n);
    for (const auto& a : graph.arcs())
        if (a.weight > threshold) builder.add_arc(graph.node(a.src).id, graph.node(a.dst).id, a.weight);
    return builder.build();
}

std::size_t elbow_k(const std::vector<std::int64_t>& sorted_desc) {
    const std::size_t n = sorted_desc.size();
    if (n <= 1) return n;
    double total = 0.0;
    for (auto s : sorted_desc) total += static_cast<double>(s);
    if (total <= 0.0) return n;

    // Normalised curve lies on or above the chord y = x; the perpendicular
    // distance is proportional to y - x.
    std::size_t best = n;
    double best_dist = 0.0;
    double cumulative = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        cumulative += static_cast<double>(sorted_desc[i - 1]);
        const double dist = cumulative / total - static_cast<double>(i) / static_cast<double>(n);
        if (dist > best_dist + 1e-12) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

MainstreamSelection select_mainstream(const MovementGraph& graph, std::optional<std::size_t> k) {
    std::vector<const GraphNode*> order;
    order.reserve(graph.node_count());
    for (const auto& n : graph.nodes()) order.push_back(&n);
    std::stable_sort(order.begin(), order.end(),
                     [](const GraphNode* a, const GraphNode* b) { return a->support > b->support; });

    MainstreamSelection sel;
    if (k) {
        sel.k = *k;
        if (sel.k > order.size()) {
            sel.k = order.size();
            sel.clamped = true;
        }
    } else {
        std::vector<std::int64_t> curve;
        curve.reserve(order.size());
        for (const auto* n : order) curve.push_back(n->support);
        sel.k = elbow_k(curve);
        sel.elbow = true;
    }

    double total = 0.0, covered = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        total += static_cast<double>(order[i]->support);
        if (i < sel.k) {
            covered += static_cast<double>(order[i]->support);
            sel.mainstream.push_back(order[i]->id);
        } else {
            sel.secondary.push_back(order[i]->id);
        }
    }
    std::sort(sel.secondary.begin(), sel.secondary.end());
    sel.coverage_fraction = total > 0.0 ? covered / total : 0.0;
    return sel;
}

MovementGraph mark_mainstream(const MovementGraph& graph, const MainstreamSelection& selection) {
    GraphBuilder builder;
    for (auto n : graph.nodes()) {
        n.mainstream = std::find(selection.mainstream.begin(), selection.mainstream.end(), n.id) !=
                       selection.mainstream.end();
        builder.add_node(std::move(n));
    }
    for (const auto& a : graph.arcs()) builder.add_arc(graph.node(a.src).id, graph.node(a.dst).id, a.weight);
    return builder.build();
}

} // namespace tprof
