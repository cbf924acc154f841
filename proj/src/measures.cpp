#include "tprof/measures.hpp"

#include "tprof/csv.hpp"
#include "tprof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <tuple>

namespace tprof {

namespace {

// p * log2(q) with the 0 * log(.) = 0 convention.
double xlog2(double p, double q) { return p == 0.0 ? 0.0 : p * std::log2(q); }

} // namespace

Measure parse_measure(std::string_view name) {
    if (name == "klosgen" || name == "kl") return Measure::klosgen;
    if (name == "support" || name == "supp") return Measure::support;
    if (name == "confidence" || name == "conf") return Measure::confidence;
    if (name == "lift") return Measure::lift;
    if (name == "added_value" || name == "av") return Measure::added_value;
    if (name == "certainty_factor" || name == "cf") return Measure::certainty_factor;
    if (name == "j_measure" || name == "j") return Measure::j_measure;
    if (name == "conditional_entropy" || name == "ce") return Measure::conditional_entropy;
    throw UsageError("unknown measure '" + std::string(name) + "'");
}

std::string_view to_string(Measure m) {
    switch (m) {
    case Measure::klosgen: return "klosgen";
    case Measure::support: return "support";
    case Measure::confidence: return "confidence";
    case Measure::lift: return "lift";
    case Measure::added_value: return "added_value";
    case Measure::certainty_factor: return "certainty_factor";
    case Measure::j_measure: return "j_measure";
    case Measure::conditional_entropy: return "conditional_entropy";
    }
    return "klosgen";
}

double measure_value(const MeasureVector& v, Measure m) {
    switch (m) {
    case Measure::klosgen: return v.klosgen;
    case Measure::support: return v.support_rel;
    case Measure::confidence: return v.confidence;
    case Measure::lift: return v.lift;
    case Measure::added_value: return v.added_value;
    case Measure::certainty_factor: return v.certainty_factor;
    case Measure::j_measure: return v.j_measure;
    case Measure::conditional_entropy: return v.conditional_entropy;
    }
    return v.klosgen;
}

MeasureVector compute_measures(const SequentialRule& rule) {
    if (rule.n_sequences <= 0 || rule.seq_count_rule < 1 || rule.seq_count_rule > rule.seq_count_x ||
        rule.seq_count_rule > rule.seq_count_y || rule.seq_count_x > rule.n_sequences ||
        rule.seq_count_y > rule.n_sequences)
        throw DataError("rule " + rule.antecedent + " -> " + rule.consequent + " has inconsistent counts");

    const double n = static_cast<double>(rule.n_sequences);
    const double p_x = static_cast<double>(rule.seq_count_x) / n;
    const double p_y = static_cast<double>(rule.seq_count_y) / n;
    const double p_xy = static_cast<double>(rule.seq_count_rule) / n;

    MeasureVector v;
    v.support_count = rule.seq_count_rule;
    v.support_rel = p_xy;
    v.confidence = static_cast<double>(rule.seq_count_rule) / static_cast<double>(rule.seq_count_x);
    v.lift = v.confidence / p_y;
    v.added_value = v.confidence - p_y;
    v.klosgen = std::sqrt(v.support_rel) * v.added_value;

    if (v.added_value >= 0.0)
        v.certainty_factor = p_y < 1.0 ? v.added_value / (1.0 - p_y) : 0.0;
    else
        v.certainty_factor = v.added_value / p_y;

    // When Y is in every sequence the mismatch term has no finite value; it is
    // taken as zero, matching the convention used for the degenerate logs.
    const double miss = p_y < 1.0 ? xlog2(p_x - p_xy, (1.0 - v.confidence) / (1.0 - p_y)) : 0.0;
    v.j_measure = xlog2(p_xy, v.confidence / p_y) + miss;
    v.conditional_entropy = -(xlog2(v.confidence, v.confidence) + xlog2(1.0 - v.confidence, 1.0 - v.confidence));
    if (v.conditional_entropy == 0.0) v.conditional_entropy = 0.0;  // drop -0
    return v;
}

std::vector<MeasuredRule> compute_all_measures(const std::vector<SequentialRule>& rules) {
    std::vector<MeasuredRule> out;
    out.reserve(rules.size());
    for (const auto& r : rules) out.push_back({r, compute_measures(r)});
    return out;
}

std::vector<MeasuredRule> measure_table(const std::vector<MeasuredRule>& rules, Measure by, std::size_t top_k) {
    std::vector<MeasuredRule> sorted = rules;
    const auto key = [by](const MeasuredRule& r) {
        // rank support by the exact count
        return by == Measure::support ? static_cast<double>(r.measures.support_count) : measure_value(r.measures, by);
    };
    std::sort(sorted.begin(), sorted.end(), [&](const MeasuredRule& a, const MeasuredRule& b) {
        const double ka = key(a), kb = key(b);
        if (ka != kb) return ka > kb;
        return std::tie(a.rule.antecedent, a.rule.consequent) < std::tie(b.rule.antecedent, b.rule.consequent);
    });
    if (sorted.size() > top_k) sorted.resize(top_k);
    return sorted;
}

void write_measures_csv(std::ostream& out, const std::vector<MeasuredRule>& rules) {
    out << "X,Y,support,confidence,lift,added_value,klosgen,certainty_factor,j_measure,conditional_entropy\n";
    for (const auto& [r, m] : rules) {
        csv::write_record(out, {r.antecedent, r.consequent, csv::fixed(m.support_rel), csv::fixed(m.confidence),
                                csv::fixed(m.lift), csv::fixed(m.added_value), csv::fixed(m.klosgen),
                                csv::fixed(m.certainty_factor), csv::fixed(m.j_measure),
                                csv::fixed(m.conditional_entropy)});
    }
}

void write_measure_table(std::ostream& out, const std::vector<MeasuredRule>& rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-40s %8s %10s %8s %8s %8s %8s %8s\n", "Rule", "Kl", "Supp", "Conf", "Lift", "CF",
                  "J", "CE");
    out << buf;
    for (const auto& [r, m] : rows) {
        const std::string name = r.antecedent + " -> " + r.consequent;
        std::snprintf(buf, sizeof buf, "%-40s %8.4f %10lld %8.4f %8.4f %8.4f %8.4f %8.4f\n", name.c_str(), m.klosgen,
                      static_cast<long long>(m.support_count), m.confidence, m.lift, m.certainty_factor, m.j_measure,
                      m.conditional_entropy);
        out << buf;
    }
}

} // namespace tprof
