#include "tprof/errors.hpp"
#include "tprof/measures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace tprof;

namespace {

SequentialRule counts(std::int64_t n, std::int64_t x, std::int64_t y, std::int64_t xy) {
    return {"X", "Y", xy, x, y, n};
}

} // namespace

TEST_CASE("independence gives zero interest") {
    const auto m = compute_measures(counts(100, 20, 25, 5));
    CHECK(m.confidence == 0.25);
    CHECK(m.added_value == 0.0);
    CHECK(m.klosgen == 0.0);
    CHECK(m.lift == 1.0);
    CHECK(m.certainty_factor == 0.0);
    CHECK(m.j_measure == doctest::Approx(0.0));
}

TEST_CASE("hand-computed small case") {
    const auto m = compute_measures(counts(4, 2, 1, 1));
    CHECK(m.support_rel == 0.25);
    CHECK(m.support_count == 1);
    CHECK(m.confidence == 0.5);
    CHECK(m.added_value == 0.25);
    CHECK(m.klosgen == 0.125);
    CHECK(m.lift == 2.0);
    CHECK(m.certainty_factor == doctest::Approx(0.25 / 0.75));
    CHECK(m.conditional_entropy == doctest::Approx(1.0));
    // J = 0.25*log2(0.5/0.25) + 0.25*log2(0.5/0.75)
    CHECK(m.j_measure == doctest::Approx(0.25 + 0.25 * std::log2(2.0 / 3.0)));
}

TEST_CASE("perfect implication") {
    const auto m = compute_measures(counts(10, 2, 2, 2));
    CHECK(m.confidence == 1.0);
    CHECK(m.added_value == doctest::Approx(0.8));
    CHECK(m.klosgen == doctest::Approx(std::sqrt(0.2) * 0.8));
    CHECK(m.klosgen == doctest::Approx(0.3578).epsilon(1e-4));
    CHECK(m.certainty_factor == doctest::Approx(1.0));
    CHECK(m.conditional_entropy == 0.0);
    CHECK(m.lift == doctest::Approx(5.0));
}

TEST_CASE("consequent present everywhere") {
    const auto m = compute_measures(counts(10, 4, 10, 2));
    CHECK(m.added_value == doctest::Approx(-0.5));
    CHECK(m.certainty_factor == doctest::Approx(-0.5));
    CHECK(std::isfinite(m.j_measure));
    const auto full = compute_measures(counts(10, 4, 10, 4));
    CHECK(full.added_value == 0.0);
    CHECK(full.certainty_factor == 0.0);
}

TEST_CASE("inconsistent counts are rejected") {
    CHECK_THROWS_AS(compute_measures(counts(0, 0, 0, 0)), DataError);
    CHECK_THROWS_AS(compute_measures(counts(10, 2, 3, 0)), DataError);
    CHECK_THROWS_AS(compute_measures(counts(10, 2, 3, 3)), DataError);
    CHECK_THROWS_AS(compute_measures(counts(10, 11, 3, 1)), DataError);
}

TEST_CASE("asymmetry between X->Y and Y->X") {
    // X in 2 sequences, Y in 8, one sequence has X followed by Y and one Y followed by X
    const auto xy = compute_measures(SequentialRule{"X", "Y", 1, 2, 8, 10});
    const auto yx = compute_measures(SequentialRule{"Y", "X", 1, 8, 2, 10});
    CHECK(xy.klosgen != yx.klosgen);
    CHECK(xy.confidence != yx.confidence);
}

TEST_CASE("negating the correlation flips the sign") {
    // P(X) = P(Y) = 1/2, n = 100: independence at 25, +/- 10 around it
    const auto pos = compute_measures(counts(100, 50, 50, 35));
    const auto neg = compute_measures(counts(100, 50, 50, 15));
    CHECK(pos.added_value == doctest::Approx(0.2));
    CHECK(neg.added_value == doctest::Approx(-0.2));
    CHECK(pos.klosgen > 0.0);
    CHECK(neg.klosgen < 0.0);
}

TEST_CASE("bounds and identities over random counts") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 20000; ++i) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 5000);
        const std::int64_t x = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n));
        const std::int64_t y = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n));
        const std::int64_t xy = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(std::min(x, y)));
        const auto m = compute_measures(counts(n, x, y, xy));
        const double p_y = static_cast<double>(y) / static_cast<double>(n);
        REQUIRE(std::abs(m.klosgen) <= std::sqrt(m.support_rel));
        REQUIRE(std::abs(m.klosgen) <= 1.0);
        REQUIRE(m.added_value == m.confidence - p_y);
        REQUIRE(m.klosgen == std::sqrt(m.support_rel) * m.added_value);
        REQUIRE(m.confidence >= 0.0);
        REQUIRE(m.confidence <= 1.0);
        REQUIRE(m.lift >= 0.0);
        REQUIRE(m.certainty_factor >= -1.0);
        REQUIRE(m.certainty_factor <= 1.0);
        REQUIRE(m.conditional_entropy >= 0.0);
        REQUIRE(m.conditional_entropy <= 1.0 + 1e-12);
        // scaling every count leaves the measure unchanged
        const auto scaled = compute_measures(counts(2 * n, 2 * x, 2 * y, 2 * xy));
        REQUIRE(std::abs(scaled.klosgen - m.klosgen) <= 1e-12 * std::max(1.0, std::abs(m.klosgen)));
    }
}

TEST_CASE("measure names") {
    for (auto m : kAllMeasures) CHECK(parse_measure(to_string(m)) == m);
    CHECK(parse_measure("kl") == Measure::klosgen);
    CHECK(parse_measure("supp") == Measure::support);
    CHECK_THROWS_AS(parse_measure("gini"), UsageError);
}

TEST_CASE("measure_table ranking") {
    const auto rules = compute_all_measures({{"A", "B", 5, 10, 10, 100}, {"B", "C", 9, 10, 10, 100},
                                             {"C", "D", 7, 10, 10, 100}});
    SUBCASE("top 3 by support") {
        const auto t = measure_table(rules, Measure::support, 3);
        REQUIRE(t.size() == 3);
        CHECK(t[0].rule.antecedent == "B");
        CHECK(t[1].rule.antecedent == "C");
        CHECK(t[2].rule.antecedent == "A");
    }
    SUBCASE("top_k truncates") { CHECK(measure_table(rules, Measure::klosgen, 1).size() == 1); }
    SUBCASE("ties ordered by X then Y") {
        const auto tied = compute_all_measures(
            {{"b", "a", 1, 2, 2, 10}, {"a", "c", 1, 2, 2, 10}, {"a", "b", 1, 2, 2, 10}});
        const auto t = measure_table(tied, Measure::klosgen, 3);
        CHECK(t[0].rule.consequent == "b");
        CHECK(t[1].rule.consequent == "c");
        CHECK(t[2].rule.antecedent == "b");
    }
    SUBCASE("random 50-rule set agrees with an independent sort") {
        std::mt19937 rng(50);
        std::vector<SequentialRule> raw;
        for (int i = 0; i < 50; ++i) {
            const std::int64_t n = 200, x = 1 + rng() % 50, y = 1 + rng() % 50;
            raw.push_back({"r" + std::to_string(i), "q", 1 + static_cast<std::int64_t>(rng() % std::min(x, y)), x, y, n});
        }
        const auto measured = compute_all_measures(raw);
        for (auto by : kAllMeasures) {
            const auto table = measure_table(measured, by, 50);
            std::vector<std::pair<double, std::string>> ref;
            for (const auto& r : measured) {
                const double v = by == Measure::support ? static_cast<double>(r.rule.seq_count_rule)
                                                        : measure_value(r.measures, by);
                ref.emplace_back(-v, r.rule.antecedent);
            }
            std::sort(ref.begin(), ref.end());
            REQUIRE(table.size() == ref.size());
            for (std::size_t i = 0; i < ref.size(); ++i) CHECK(table[i].rule.antecedent == ref[i].second);
        }
    }
}

TEST_CASE("measures CSV layout") {
    std::ostringstream out;
    write_measures_csv(out, compute_all_measures({{"A", "B", 1, 2, 1, 4}}));
    CHECK(out.str() ==
          "X,Y,support,confidence,lift,added_value,klosgen,certainty_factor,j_measure,conditional_entropy\n"
          "A,B,0.250000,0.500000,2.000000,0.250000,0.125000,0.333333,0.103759,1.000000\n");
}
