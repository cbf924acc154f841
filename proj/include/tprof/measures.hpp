#pragma once

#include "tprof/rule_mining.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace tprof {

/// Interest measures of one rule. Probabilities are relative frequencies
/// over sequences; entropies are in bits.
struct MeasureVector {
    double support_rel = 0.0;
    std::int64_t support_count = 0;
    double confidence = 0.0;
    double lift = 0.0;
    double added_value = 0.0;
    double klosgen = 0.0;
    double certainty_factor = 0.0;
    double j_measure = 0.0;
    double conditional_entropy = 0.0;
};

enum class Measure { klosgen, support, confidence, lift, added_value, certainty_factor, j_measure, conditional_entropy };

inline constexpr std::array<Measure, 8> kAllMeasures = {
    Measure::klosgen,          Measure::support,   Measure::confidence,         Measure::lift, Measure::added_value,
    Measure::certainty_factor, Measure::j_measure, Measure::conditional_entropy};

/// Accepts the canonical names (klosgen, support, confidence, lift,
/// added_value, certainty_factor, j_measure, conditional_entropy) and the
/// short column labels (kl, supp, conf, av, cf, j, ce). Throws UsageError.
Measure parse_measure(std::string_view name);
std::string_view to_string(Measure m);

/// Value of `m`; support is the relative support.
double measure_value(const MeasureVector& v, Measure m);

/// Requires n_sequences > 0 and seq_count_rule >= 1 (the SequentialRule
/// invariants); throws DataError otherwise.
MeasureVector compute_measures(const SequentialRule& rule);

struct MeasuredRule {
    SequentialRule rule;
    MeasureVector measures;
};

std::vector<MeasuredRule> compute_all_measures(const std::vector<SequentialRule>& rules);

/// Top `top_k` rules by `by`, descending; equal values ordered by (X, Y).
std::vector<MeasuredRule> measure_table(const std::vector<MeasuredRule>& rules, Measure by, std::size_t top_k);

/// X,Y then the eight measure columns at six decimals.
void write_measures_csv(std::ostream& out, const std::vector<MeasuredRule>& rules);

/// Text table with the Kl, Supp, Conf, Lift, CF, J, CE columns.
void write_measure_table(std::ostream& out, const std::vector<MeasuredRule>& rows);

} // namespace tprof
