#include "tprof/errors.hpp"
#include "tprof/graph_io.hpp"
#include "tprof/movement_graph.hpp"

#include "fixture_paths.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace tprof;
using tprof::testing::load_paris_graph;

namespace {

MovementGraph random_graph(std::mt19937& rng, std::size_t nodes, std::size_t arcs) {
    GraphBuilder b;
    for (std::size_t i = 0; i < nodes; ++i)
        b.add_node({"n" + std::to_string(i), "Node " + std::to_string(i), static_cast<std::int64_t>(rng() % 1000), false});
    std::set<std::pair<std::size_t, std::size_t>> used;
    while (used.size() < arcs) {
        const auto s = rng() % nodes, d = rng() % nodes;
        if (s == d || !used.insert({s, d}).second) continue;
        b.add_arc("n" + std::to_string(s), "n" + std::to_string(d), static_cast<double>(rng() % 2001) / 1000.0 - 1.0);
    }
    return b.build();
}

} // namespace

TEST_CASE("single rule graph") {
    const auto rules = compute_all_measures({{"A", "B", 1, 1, 1, 1}});
    const auto g = build_graph(rules, Measure::klosgen, {{"A", 3}, {"B", 1}}, {{"A", "Alpha"}});
    CHECK(g.node_count() == 2);
    CHECK(g.arc_count() == 1);
    CHECK(g.node(*g.find("A")).name == "Alpha");
    CHECK(g.node(*g.find("B")).name == "B");
    CHECK(g.node(*g.find("A")).support == 3);
    CHECK(*g.weight("A", "B") == rules[0].measures.klosgen);
    CHECK_FALSE(g.weight("B", "A").has_value());
}

TEST_CASE("weight measure selection") {
    const auto rules = compute_all_measures({{"A", "B", 1, 2, 1, 4}});
    CHECK(*build_graph(rules, Measure::lift, {}).weight("A", "B") == 2.0);
    CHECK(*build_graph(rules, Measure::confidence, {}).weight("A", "B") == 0.5);
    CHECK(*build_graph(rules, Measure::support, {}).weight("A", "B") == 0.25);
}

TEST_CASE("random 30-rule set: arc and node counts") {
    std::mt19937 rng(30);
    std::vector<SequentialRule> rules;
    std::set<std::pair<std::string, std::string>> pairs;
    std::set<std::string> endpoints;
    while (rules.size() < 30) {
        const auto x = "L" + std::to_string(rng() % 15), y = "L" + std::to_string(rng() % 15);
        if (x == y || !pairs.insert({x, y}).second) continue;
        endpoints.insert(x);
        endpoints.insert(y);
        rules.push_back({x, y, 1, 2, 2, 10});
    }
    const auto g = build_graph(compute_all_measures(rules), Measure::klosgen, {});
    CHECK(g.arc_count() == 30);
    CHECK(g.node_count() == endpoints.size());
}

TEST_CASE("builder rejects self and parallel arcs") {
    GraphBuilder b;
    CHECK_THROWS_AS(b.add_arc("a", "a", 1.0), UsageError);
    b.add_arc("a", "b", 1.0);
    CHECK_THROWS_AS(b.add_arc("a", "b", 2.0), UsageError);
    b.add_arc("b", "a", 2.0);
    const auto g = b.build();
    CHECK(g.arc_count() == 2);
    CHECK(g.node_count() == 2);
}

TEST_CASE("landmark fixture") {
    const auto g = load_paris_graph();
    CHECK(g.node_count() == 4);
    CHECK(g.arc_count() == 8);
    CHECK(g.node(*g.find("louvre")).name == "Musée du Louvre");

    SUBCASE("DOT round trip") {
        std::stringstream io;
        write_dot(io, g);
        const auto back = read_dot(io);
        CHECK(back.equivalent(g));
    }
    SUBCASE("threshold 0.6 keeps 0.66 and drops 0.57") {
        const auto sub = threshold_subgraph(g, 0.6);
        CHECK(sub.node_count() == 4);
        CHECK(sub.arc_count() == 5);
        CHECK(sub.weight("louvre", "eiffel").has_value());
        CHECK_FALSE(sub.weight("eiffel", "notredame").has_value());
    }
    SUBCASE("top two mainstream") {
        const auto sel = select_mainstream(g, 2);
        CHECK(sel.mainstream == std::vector<std::string>{"eiffel", "louvre"});
        CHECK(g.node(*g.find("eiffel")).support == 356000);
        CHECK(g.node(*g.find("louvre")).support == 280000);
        CHECK(sel.secondary == std::vector<std::string>{"champs", "notredame"});
        CHECK(sel.coverage_fraction == doctest::Approx(636000.0 / 996000.0));
    }
}

TEST_CASE("threshold edge cases and monotonicity") {
    std::mt19937 rng(12);
    for (int round = 0; round < 50; ++round) {
        const auto g = random_graph(rng, 12, 40);
        CHECK(threshold_subgraph(g, -1.5).equivalent(g, 0.0));
        double max_w = -2.0;
        for (const auto& a : g.arcs()) max_w = std::max(max_w, a.weight);
        CHECK(threshold_subgraph(g, max_w).arc_count() == 0);
        CHECK(threshold_subgraph(g, max_w).node_count() == g.node_count());

        const double t1 = static_cast<double>(rng() % 200) / 100.0 - 1.0;
        const double t2 = t1 + static_cast<double>(rng() % 100) / 100.0;
        const auto a1 = threshold_subgraph(g, t1);
        const auto a2 = threshold_subgraph(g, t2);
        for (const auto& a : a2.arcs())
            CHECK(a1.weight(a2.node(a.src).id, a2.node(a.dst).id).has_value());
    }
}

TEST_CASE("DOT round trip on random graphs") {
    std::mt19937 rng(99);
    for (int round = 0; round < 20; ++round) {
        auto g = random_graph(rng, 10, 25);
        g = mark_mainstream(g, select_mainstream(g, 3));
        std::stringstream io;
        write_dot(io, g);
        CHECK(read_dot(io).equivalent(g, 1e-9));
    }
}

TEST_CASE("DOT reader accepts hand-written input") {
    std::istringstream in(R"(/* block */ digraph {
        graph [rankdir=LR];
        node [shape=box];
        a [name="Quote \" inside"];
        a -> b -> c [weight=0.5];
        d;
        # comment
    })");
    const auto g = read_dot(in);
    CHECK(g.node_count() == 4);
    CHECK(g.arc_count() == 2);
    CHECK(g.node(*g.find("a")).name == "Quote \" inside");
    CHECK(*g.weight("b", "c") == 0.5);

    std::istringstream bad("digraph { a -> ; }");
    CHECK_THROWS_AS(read_dot(bad), DataError);
    std::istringstream self("digraph { a -> a; }");
    CHECK_THROWS_AS(read_dot(self), UsageError);
}

TEST_CASE("GraphML and edge list exports") {
    const auto g = mark_mainstream(load_paris_graph(), select_mainstream(load_paris_graph(), 2));
    std::ostringstream ml, edges;
    write_graphml(ml, g);
    write_edge_csv(edges, g);
    CHECK(ml.str().find("<node id=\"eiffel\"><data key=\"name\">Tour Eiffel</data><data key=\"support\">356000</data>"
                        "<data key=\"mainstream\">true</data></node>") != std::string::npos);
    CHECK(ml.str().find("<edge source=\"louvre\" target=\"eiffel\"><data key=\"weight\">0.66000000000000003") !=
          std::string::npos);
    CHECK(edges.str().find("louvre,eiffel,0.660000\n") != std::string::npos);
    const auto edge_text = edges.str();
    CHECK(std::count(edge_text.begin(), edge_text.end(), '\n') == 9);
}

TEST_CASE("node_supports counts occurrences") {
    CHECK(node_supports(SequenceDataset{{{"A", "B", "A"}}}) == SupportMap{{"A", 2}, {"B", 1}});
    CHECK(node_supports(SequenceDataset{}).empty());

    std::mt19937 rng(4);
    SequenceDataset ds;
    for (int s = 0; s < 1000; ++s) {
        std::vector<std::string> seq;
        for (int i = 0, len = 1 + static_cast<int>(rng() % 8); i < len; ++i) seq.push_back("p" + std::to_string(rng() % 30));
        ds.sequences.push_back(seq);
    }
    SupportMap oracle;
    std::vector<std::string> flat;
    for (const auto& s : ds.sequences) flat.insert(flat.end(), s.begin(), s.end());
    std::sort(flat.begin(), flat.end());
    for (auto it = flat.begin(); it != flat.end();) {
        auto end = std::upper_bound(it, flat.end(), *it);
        oracle[*it] = end - it;
        it = end;
    }
    CHECK(node_supports(ds) == oracle);
}

TEST_CASE("mainstream selection") {
    SUBCASE("elbow on a two-level curve") {
        std::vector<std::int64_t> curve(5, 1000);
        curve.insert(curve.end(), 95, 10);
        CHECK(elbow_k(curve) == 5);

        GraphBuilder b;
        for (int i = 0; i < 100; ++i) b.add_node({"n" + std::to_string(100 + i), "", i < 5 ? 1000 : 10, false});
        const auto sel = select_mainstream(b.build());
        CHECK(sel.elbow);
        CHECK(sel.k == 5);
        CHECK(sel.mainstream.size() == 5);
        CHECK(sel.coverage_fraction == doctest::Approx(5000.0 / 5950.0));
    }
    SUBCASE("flat curve selects every node") {
        CHECK(elbow_k(std::vector<std::int64_t>(7, 3)) == 7);
        CHECK(elbow_k({}) == 0);
        CHECK(elbow_k({42}) == 1);
    }
    SUBCASE("k equal to node count and clamping") {
        const auto g = load_paris_graph();
        auto all = select_mainstream(g, 4);
        CHECK(all.secondary.empty());
        CHECK(all.coverage_fraction == doctest::Approx(1.0));
        auto over = select_mainstream(g, 10);
        CHECK(over.clamped);
        CHECK(over.k == 4);
    }
    SUBCASE("ties at the boundary go to the smaller id") {
        GraphBuilder b;
        b.add_node({"b", "", 5, false}).add_node({"a", "", 5, false}).add_node({"c", "", 9, false});
        CHECK(select_mainstream(b.build(), 2).mainstream == std::vector<std::string>{"c", "a"});
    }
    SUBCASE("invariant under rescaling; coverage grows with k") {
        std::mt19937 rng(8);
        for (int round = 0; round < 30; ++round) {
            const auto g = random_graph(rng, 20, 10);
            GraphBuilder scaled;
            for (auto n : g.nodes()) {
                n.support *= 7;
                scaled.add_node(n);
            }
            const auto gs = scaled.build();
            double last = -1.0;
            for (std::size_t k = 1; k <= 20; ++k) {
                const auto a = select_mainstream(g, k);
                CHECK(a.mainstream == select_mainstream(gs, k).mainstream);
                CHECK(a.mainstream.size() + a.secondary.size() == 20);
                CHECK(a.coverage_fraction >= last);
                last = a.coverage_fraction;
            }
        }
    }
}
