#include "tprof/errors.hpp"
#include "tprof/rule_mining.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace tprof;

namespace {

SequenceDataset random_dataset(std::mt19937& rng, std::size_t max_sequences, std::size_t symbols) {
    SequenceDataset ds;
    const std::size_t n = 1 + rng() % max_sequences;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::string> seq;
        const std::size_t len = 1 + rng() % 8;
        for (std::size_t i = 0; i < len; ++i) seq.push_back("s" + std::to_string(rng() % symbols));
        ds.sequences.push_back(std::move(seq));
    }
    return ds;
}

} // namespace

TEST_CASE("single pair") {
    SequenceDataset ds{{{"A", "B"}}};
    const std::vector<SequentialRule> expected{{"A", "B", 1, 1, 1, 1}};
    CHECK(mine_rules(ds) == expected);
    CHECK(brute_force_rules(ds) == expected);
}

TEST_CASE("no adjacent pair, no rule") {
    SequenceDataset ds{{{"A"}}};
    CHECK(mine_rules(ds).empty());
    CHECK(brute_force_rules(ds).empty());
    CHECK(mine_rules(SequenceDataset{}).empty());
}

TEST_CASE("counting is per sequence") {
    SequenceDataset ds{{{"A", "B", "A", "B"}}};
    auto rules = mine_rules(ds);
    REQUIRE(rules.size() == 2);  // A->B and B->A
    CHECK(rules[0] == SequentialRule{"A", "B", 1, 1, 1, 1});
    CHECK(rules[1] == SequentialRule{"B", "A", 1, 1, 1, 1});
    CHECK(brute_force_rules(ds) == rules);
}

TEST_CASE("direction matters") {
    SequenceDataset ds{{{"A", "B"}, {"B", "A"}}};
    const std::vector<SequentialRule> expected{{"A", "B", 1, 2, 2, 2}, {"B", "A", 1, 2, 2, 2}};
    CHECK(mine_rules(ds) == expected);
    CHECK(brute_force_rules(ds) == expected);
}

TEST_CASE("self-follow is not a rule but still counts the item") {
    SequenceDataset ds{{{"A", "A", "B"}, {"A", "A"}}};
    auto rules = mine_rules(ds);
    REQUIRE(rules.size() == 1);
    CHECK(rules[0] == SequentialRule{"A", "B", 1, 2, 1, 2});
}

TEST_CASE("minimum support filters rules") {
    SequenceDataset ds{{{"A", "B"}, {"A", "B", "C"}, {"B", "C", "A"}}};
    auto rules = mine_rules(ds, 2);
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].antecedent == "A");
    CHECK(rules[1].antecedent == "B");
    CHECK(brute_force_rules(ds, 2) == rules);
}

TEST_CASE("oracle refuses oversized datasets") {
    SequenceDataset ds;
    ds.sequences.assign(kBruteForceMaxSequences + 1, {"A", "B"});
    CHECK_THROWS_AS(brute_force_rules(ds), OracleRefusal);
}

TEST_CASE("1000 random sequences over 20 symbols") {
    std::mt19937 rng(1000);
    SequenceDataset ds;
    for (int s = 0; s < 1000; ++s) {
        std::vector<std::string> seq;
        const int len = 1 + static_cast<int>(rng() % 10);
        for (int i = 0; i < len; ++i) seq.push_back("s" + std::to_string(rng() % 20));
        ds.sequences.push_back(seq);
    }
    const auto rules = mine_rules(ds);
    CHECK(rules == brute_force_rules(ds));

    std::set<std::pair<std::string, std::string>> mined;
    for (const auto& r : rules) {
        CHECK(r.antecedent != r.consequent);
        CHECK(r.seq_count_rule > 0);
        CHECK(r.seq_count_rule <= std::min(r.seq_count_x, r.seq_count_y));
        CHECK(std::min(r.seq_count_x, r.seq_count_y) <= r.n_sequences);
        mined.insert({r.antecedent, r.consequent});
    }
    // completeness: every adjacent distinct pair has its rule
    for (const auto& seq : ds.sequences)
        for (std::size_t i = 0; i + 1 < seq.size(); ++i)
            if (seq[i] != seq[i + 1]) CHECK(mined.count({seq[i], seq[i + 1]}) == 1);
}

TEST_CASE("mine_rules equals brute force on random datasets") {
    std::mt19937 rng(77);
    for (int round = 0; round < 250; ++round) {
        const auto ds = random_dataset(rng, 60, 2 + rng() % 10);
        const std::int64_t min_support = 1 + static_cast<std::int64_t>(rng() % 3);
        REQUIRE(mine_rules(ds, min_support) == brute_force_rules(ds, min_support));
    }
}

TEST_CASE("rules CSV round trip") {
    std::vector<SequentialRule> rules{{"A", "B, with comma", 3, 4, 5, 10}, {"x\"y", "z", 1, 1, 1, 10}};
    std::stringstream io;
    write_rules_csv(io, rules);
    CHECK(io.str().rfind("X,Y,seq_count_rule,seq_count_X,seq_count_Y,n_sequences\n", 0) == 0);
    CHECK(read_rules_csv(io) == rules);
}
