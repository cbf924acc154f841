#pragma once

#include "tprof/trips.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tprof {

/// "X is directly followed by Y", with sequence-level counts.
struct SequentialRule {
    std::string antecedent;
    std::string consequent;
    std::int64_t seq_count_rule = 0;  ///< sequences with X immediately followed by Y
    std::int64_t seq_count_x = 0;     ///< sequences containing X
    std::int64_t seq_count_y = 0;     ///< sequences containing Y
    std::int64_t n_sequences = 0;

    friend bool operator==(const SequentialRule&, const SequentialRule&) = default;
};

/// Mines every direct-follow rule X -> Y (X != Y) present in at least
/// `min_support_count` sequences. A sequence contributes at most one to a
/// rule's count however often the pair repeats in it. Rules are returned
/// sorted by (antecedent, consequent).
std::vector<SequentialRule> mine_rules(const SequenceDataset& dataset, std::int64_t min_support_count = 1);

/// Largest dataset brute_force_rules agrees to scan.
inline constexpr std::size_t kBruteForceMaxSequences = 100'000;

/// Definitional rule enumeration used to check mine_rules. Throws
/// OracleRefusal above kBruteForceMaxSequences sequences.
std::vector<SequentialRule> brute_force_rules(const SequenceDataset& dataset, std::int64_t min_support_count = 1);

/// Rule dump: X,Y,seq_count_rule,seq_count_X,seq_count_Y,n_sequences
void write_rules_csv(std::ostream& out, const std::vector<SequentialRule>& rules);
std::vector<SequentialRule> read_rules_csv(std::istream& in);

} // namespace tprof
