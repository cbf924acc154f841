#include "tprof/community.hpp"

#include "tprof/errors.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace tprof {

void WeightedGraph::add_edge(std::size_t a, std::size_t b, double weight) {
    if (a == b || !(weight > 0.0)) return;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        auto& list = adj_[x];
        auto it = std::find_if(list.begin(), list.end(), [y = y](const Edge& e) { return e.to == y; });
        if (it == list.end())
            list.push_back({y, weight});
        else
            it->weight += weight;
    }
}

double WeightedGraph::weight(std::size_t a, std::size_t b) const {
    for (const auto& e : adj_[a])
        if (e.to == b) return e.weight;
    return 0.0;
}

double WeightedGraph::total_weight() const {
    double twice = 0.0;
    for (const auto& list : adj_)
        for (const auto& e : list) twice += e.weight;
    return twice / 2.0;
}

std::size_t WeightedGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& list : adj_) twice += list.size();
    return twice / 2;
}

Symmetrize parse_symmetrize(std::string_view name) {
    if (name == "mean") return Symmetrize::mean;
    if (name == "max") return Symmetrize::max;
    if (name == "min") return Symmetrize::min;
    throw UsageError("unknown symmetrization '" + std::string(name) + "'");
}

std::string_view to_string(Symmetrize s) {
    switch (s) {
    case Symmetrize::mean: return "mean";
    case Symmetrize::max: return "max";
    case Symmetrize::min: return "min";
    }
    return "mean";
}

WeightedGraph matrix_to_weighted_graph(const SimilarityMatrix& m, Symmetrize mode) {
    WeightedGraph g(m.order());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            const double a = m(i, j), b = m(j, i);
            double w = 0.0;
            switch (mode) {
            case Symmetrize::mean: w = (a + b) / 2.0; break;
            case Symmetrize::max: w = std::max(a, b); break;
            case Symmetrize::min: w = std::min(a, b); break;
            }
            g.add_edge(i, j, w);
        }
    }
    return g;
}

double modularity(const WeightedGraph& graph, const std::vector<std::size_t>& labels, double resolution) {
    const double m2 = 2.0 * graph.total_weight();
    if (m2 <= 0.0) return 0.0;
    std::map<std::size_t, double> internal, total;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        for (const auto& e : graph.neighbours(i)) {
            total[labels[i]] += e.weight;
            if (labels[e.to] == labels[i]) internal[labels[i]] += e.weight;
        }
    }
    double q = 0.0;
    for (const auto& [c, tot] : total) q += internal[c] / m2 - resolution * (tot / m2) * (tot / m2);
    return q;
}

namespace {

// One aggregation level. `self` holds A_ii (twice the internal weight of the
// merged community, already counted on both orderings).
struct Level {
    std::vector<std::vector<WeightedGraph::Edge>> adj;
    std::vector<double> self;
};

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    // rejection sampling keeps the stream identical across standard libraries
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do r = rng();
    while (r >= limit);
    return r % n;
}

// Local-moving phase. Returns true if any node changed community.
bool move_nodes(const Level& level, std::vector<std::size_t>& community, double resolution, double m2,
                std::mt19937_64& rng) {
    const std::size_t n = level.adj.size();
    std::vector<double> degree(n, 0.0), tot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        degree[i] = level.self[i];
        for (const auto& e : level.adj[i]) degree[i] += e.weight;
        tot[community[i]] += degree[i];
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);

    std::vector<double> link(n, 0.0);
    std::vector<std::size_t> touched;
    bool any = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (auto i : order) {
            const std::size_t own = community[i];
            touched.clear();
            touched.push_back(own);
            link[own] = 0.0;
            for (const auto& e : level.adj[i]) {
                const auto c = community[e.to];
                if (link[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end())
                    touched.push_back(c);
                link[c] += e.weight;
            }

            tot[own] -= degree[i];
            const auto gain = [&](std::size_t c) { return link[c] - resolution * tot[c] * degree[i] / m2; };
            std::size_t best = own;
            double best_gain = gain(own);
            for (auto c : touched) {
                const double g = gain(c);
                if (g > best_gain + 1e-12) {
                    best = c;
                    best_gain = g;
                }
            }
            tot[best] += degree[i];
            if (best != own) {
                community[i] = best;
                moved = true;
                any = true;
            }
            for (auto c : touched) link[c] = 0.0;
        }
    }
    return any;
}

// Renumbers communities 0..k-1 in order of first appearance; returns k.
std::size_t renumber(std::vector<std::size_t>& community) {
    std::map<std::size_t, std::size_t> ids;
    for (auto& c : community) {
        auto [it, inserted] = ids.try_emplace(c, ids.size());
        c = it->second;
    }
    return ids.size();
}

Level aggregate(const Level& level, const std::vector<std::size_t>& community, std::size_t k) {
    Level next;
    next.adj.resize(k);
    next.self.assign(k, 0.0);
    std::vector<std::map<std::size_t, double>> acc(k);
    for (std::size_t i = 0; i < level.adj.size(); ++i) {
        const auto ci = community[i];
        next.self[ci] += level.self[i];
        for (const auto& e : level.adj[i]) {
            const auto cj = community[e.to];
            if (ci == cj)
                next.self[ci] += e.weight;
            else
                acc[ci][cj] += e.weight;
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        for (const auto& [d, w] : acc[c]) next.adj[c].push_back({d, w});
    return next;
}

ClusterAssignment to_assignment(const WeightedGraph& graph, const Partition& p, const ClusterParameters& params) {
    std::size_t k = 0;
    for (auto l : p.labels) k = std::max(k, l + 1);
    std::vector<std::vector<std::string>> groups(k);
    for (std::size_t i = 0; i < graph.size(); ++i) groups[p.labels[i]].push_back(graph.ids()[i]);
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    ClusterAssignment out;
    out.communities = std::move(groups);
    out.modularity = p.modularity;
    out.parameters = params;
    return out;
}

} // namespace

Partition louvain_partition(const WeightedGraph& graph, double resolution, std::uint64_t seed) {
    const std::size_t n = graph.size();
    Partition result;
    result.labels.resize(n);
    std::iota(result.labels.begin(), result.labels.end(), std::size_t{0});
    const double m2 = 2.0 * graph.total_weight();
    if (n == 0 || m2 <= 0.0) return result;

    Level level;
    level.adj.resize(n);
    level.self.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) level.adj[i] = graph.neighbours(i);

    std::mt19937_64 rng(seed);
    while (true) {
        std::vector<std::size_t> community(level.adj.size());
        std::iota(community.begin(), community.end(), std::size_t{0});
        if (!move_nodes(level, community, resolution, m2, rng)) break;
        const std::size_t k = renumber(community);
        for (auto& l : result.labels) l = community[l];
        ++result.levels;
        if (k == level.adj.size()) break;
        level = aggregate(level, community, k);
    }
    renumber(result.labels);
    result.modularity = modularity(graph, result.labels, resolution);
    return result;
}

ClusterAssignment louvain(const WeightedGraph& graph, const ClusterParameters& params) {
    const int runs = std::max(1, params.best_of_n);
    std::vector<std::future<Partition>> jobs;
    for (int r = 0; r < runs; ++r) {
        const auto policy = runs > 1 ? std::launch::async : std::launch::deferred;
        jobs.push_back(std::async(policy, [&graph, &params, r] {
            return louvain_partition(graph, params.resolution, params.seed + static_cast<std::uint64_t>(r));
        }));
    }
    Partition best = jobs.front().get();
    for (std::size_t r = 1; r < jobs.size(); ++r) {
        auto p = jobs[r].get();
        if (p.modularity > best.modularity) best = std::move(p);
    }
    return to_assignment(graph, best, params);
}

ClusterAssignment filter_clusters(ClusterAssignment assignment, std::size_t min_cluster_size) {
    std::vector<std::vector<std::string>> kept;
    for (auto& c : assignment.communities) {
        if (c.size() >= min_cluster_size)
            kept.push_back(std::move(c));
        else
            assignment.dropped.push_back(std::move(c));
    }
    assignment.communities = std::move(kept);
    assignment.parameters.min_cluster_size = min_cluster_size;
    return assignment;
}

double mean_similarity(const SimilarityMatrix& m, const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < m.size(); ++i) index.emplace(m.order()[i], i);
    const auto at = [&](const std::string& id) {
        auto it = index.find(id);
        if (it == index.end()) throw UsageError("'" + id + "' is not in the similarity matrix");
        return it->second;
    };
    double sum = 0.0;
    std::size_t pairs = 0;
    for (const auto& x : a) {
        for (const auto& y : b) {
            if (x == y) continue;
            sum += m(at(x), at(y));
            ++pairs;
        }
    }
    return pairs ? sum / static_cast<double>(pairs) : 0.0;
}

nlohmann::ordered_json profile_report(const ClusterAssignment& assignment, const SimilarityMatrix& m,
                                      const MovementGraph& metadata) {
    using json = nlohmann::ordered_json;
    json report;
    report["modularity"] = assignment.modularity;
    report["n_communities"] = assignment.communities.size();

    json clusters = json::array();
    for (std::size_t c = 0; c < assignment.communities.size(); ++c) {
        const auto& members = assignment.communities[c];
        json entry;
        entry["cluster"] = c + 1;
        entry["size"] = members.size();
        json list = json::array();
        for (const auto& id : members) {
            json member;
            member["id"] = id;
            const auto idx = metadata.find(id);
            member["name"] = idx ? metadata.node(*idx).name : id;
            member["support"] = idx ? metadata.node(*idx).support : 0;
            list.push_back(std::move(member));
        }
        entry["members"] = std::move(list);
        entry["mean_intra_similarity"] = mean_similarity(m, members, members);
        json others = json::array();
        for (std::size_t d = 0; d < assignment.communities.size(); ++d) {
            if (d == c) continue;
            json o;
            o["cluster"] = d + 1;
            o["mean_similarity"] = mean_similarity(m, members, assignment.communities[d]);
            others.push_back(std::move(o));
        }
        entry["mean_similarity_to"] = std::move(others);
        clusters.push_back(std::move(entry));
    }
    report["clusters"] = std::move(clusters);
    report["dropped"] = assignment.dropped;
    report["empty_spheres"] = m.empty_rows();

    const auto& p = assignment.parameters;
    json params;
    params["resolution"] = p.resolution;
    params["seed"] = p.seed;
    params["min_cluster_size"] = p.min_cluster_size;
    params["symmetrize"] = std::string(to_string(p.symmetrize));
    params["best_of_n"] = p.best_of_n;
    report["parameters"] = std::move(params);
    return report;
}

} // namespace tprof
