#pragma once

// Reference computations shared by the unit and acceptance suites. They
// deliberately avoid the library's own algorithms.

#include "tprof/community.hpp"
#include "tprof/movement_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace tprof::testing {

/// Modularity from the dense adjacency matrix, straight from the definition.
inline double dense_modularity(const WeightedGraph& g, const std::vector<std::size_t>& labels, double resolution = 1.0) {
    const std::size_t n = g.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) a[i][j] = g.weight(i, j);
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            k[i] += a[i][j];
            two_m += a[i][j];
        }
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (labels[i] == labels[j]) q += a[i][j] - resolution * k[i] * k[j] / two_m;
    return q / two_m;
}

struct BestPartition {
    double modularity = 0.0;
    std::vector<std::size_t> labels;
};

/// Best modularity over every set partition (restricted growth strings).
inline BestPartition exhaustive_optimum(const WeightedGraph& g, double resolution = 1.0) {
    const std::size_t n = g.size();
    BestPartition best;
    best.labels.assign(n, 0);
    best.modularity = dense_modularity(g, best.labels, resolution);
    if (n == 0) return best;
    std::vector<std::size_t> rgs(n, 0), max_prefix(n, 0);
    while (true) {
        const double q = dense_modularity(g, rgs, resolution);
        if (q > best.modularity) {
            best.modularity = q;
            best.labels = rgs;
        }
        // next restricted growth string
        std::size_t i = n - 1;
        while (i > 0 && rgs[i] > max_prefix[i - 1]) --i;
        if (i == 0) break;
        ++rgs[i];
        for (std::size_t j = i; j < n; ++j) {
            if (j > i) rgs[j] = 0;
            max_prefix[j] = std::max(j ? max_prefix[j - 1] : 0, rgs[j]);
        }
    }
    return best;
}

/// Adjusted Rand index between two labelings of the same items.
template <class A, class B>
double adjusted_rand_index(const std::vector<A>& x, const std::vector<B>& y) {
    std::map<std::pair<A, B>, double> joint;
    std::map<A, double> row;
    std::map<B, double> col;
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint[{x[i], y[i]}] += 1;
        row[x[i]] += 1;
        col[y[i]] += 1;
    }
    const auto c2 = [](double v) { return v * (v - 1) / 2; };
    double index = 0, sum_a = 0, sum_b = 0;
    for (const auto& [_, v] : joint) index += c2(v);
    for (const auto& [_, v] : row) sum_a += c2(v);
    for (const auto& [_, v] : col) sum_b += c2(v);
    const double total = c2(static_cast<double>(x.size()));
    const double expected = total > 0 ? sum_a * sum_b / total : 0.0;
    const double max_index = (sum_a + sum_b) / 2;
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

using BoolMatrix = std::vector<std::vector<bool>>;

inline BoolMatrix multiply(const BoolMatrix& a, const BoolMatrix& b) {
    const std::size_t n = a.size();
    BoolMatrix c(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (b[k][j]) c[i][j] = true;
    return c;
}

// Members reachable in 1..d steps via powers of the adjacency matrix.
inline std::vector<std::string> power_oracle(const MovementGraph& g, std::size_t center, int d) {
    const std::size_t n = g.node_count();
    BoolMatrix adj(n, std::vector<bool>(n, false));
    for (const auto& a : g.arcs()) adj[a.src][a.dst] = true;
    std::vector<bool> reach(n, false);
    BoolMatrix power = adj;
    for (int step = 1; step <= d; ++step) {
        for (std::size_t j = 0; j < n; ++j)
            if (power[center][j]) reach[j] = true;
        power = multiply(power, adj);
    }
    std::vector<std::string> out;
    for (std::size_t j = 0; j < n; ++j)
        if (reach[j] && j != center) out.push_back(g.node(j).id);
    return out;
}

inline MovementGraph random_digraph(std::mt19937& rng, std::size_t n, double density) {
    GraphBuilder b;
    for (std::size_t i = 0; i < n; ++i) b.add_node({"v" + std::to_string(i), "", 1, false});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && u(rng) < density) b.add_arc("v" + std::to_string(i), "v" + std::to_string(j), 1.0);
    return b.build();
}

/// Two 4-cliques (weight 1) joined by one 0.01 edge.
inline WeightedGraph two_cliques() {
    WeightedGraph g({"a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3"});
    for (std::size_t base : {0u, 4u})
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) g.add_edge(base + i, base + j, 1.0);
    g.add_edge(3, 4, 0.01);
    return g;
}

} // namespace tprof::testing
