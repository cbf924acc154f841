#include "tprof/rule_mining.hpp"

#include "tprof/csv.hpp"
#include "tprof/errors.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

namespace tprof {

namespace {

std::int64_t to_count(const std::string& s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < 0) throw DataError("bad count '" + s + "' in rules CSV");
    return v;
}

} // namespace

std::vector<SequentialRule> mine_rules(const SequenceDataset& dataset, std::int64_t min_support_count) {
    // Intern location ids, then count distinct items and distinct adjacent
    // pairs per sequence.
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<const std::string*> names;
    std::vector<std::int64_t> item_count;
    std::unordered_map<std::uint64_t, std::int64_t> pair_count;

    std::vector<std::uint32_t> ids;
    std::vector<std::uint64_t> pairs;
    for (const auto& seq : dataset.sequences) {
        ids.clear();
        pairs.clear();
        for (const auto& loc : seq) {
            auto [it, inserted] = index.try_emplace(loc, static_cast<std::uint32_t>(names.size()));
            if (inserted) {
                names.push_back(&it->first);
                item_count.push_back(0);
            }
            ids.push_back(it->second);
        }
        for (std::size_t i = 0; i + 1 < ids.size(); ++i)
            if (ids[i] != ids[i + 1]) pairs.push_back((std::uint64_t{ids[i]} << 32) | ids[i + 1]);

        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (auto id : ids) ++item_count[id];

        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        for (auto p : pairs) ++pair_count[p];
    }

    const auto n = static_cast<std::int64_t>(dataset.count());
    std::vector<SequentialRule> rules;
    rules.reserve(pair_count.size());
    for (const auto& [key, count] : pair_count) {
        if (count < min_support_count) continue;
        const auto x = static_cast<std::uint32_t>(key >> 32);
        const auto y = static_cast<std::uint32_t>(key & 0xffffffffu);
        rules.push_back({*names[x], *names[y], count, item_count[x], item_count[y], n});
    }
    std::sort(rules.begin(), rules.end(), [](const SequentialRule& a, const SequentialRule& b) {
        return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
    });
    return rules;
}

std::vector<SequentialRule> brute_force_rules(const SequenceDataset& dataset, std::int64_t min_support_count) {
    if (dataset.count() > kBruteForceMaxSequences)
        throw OracleRefusal("brute-force rule oracle refuses " + std::to_string(dataset.count()) + " sequences (limit " +
                            std::to_string(kBruteForceMaxSequences) + ")");

    std::map<std::string, std::set<std::size_t>> containing;
    std::map<std::pair<std::string, std::string>, std::set<std::size_t>> followed;
    for (std::size_t s = 0; s < dataset.sequences.size(); ++s) {
        const auto& seq = dataset.sequences[s];
        for (std::size_t i = 0; i < seq.size(); ++i) {
            containing[seq[i]].insert(s);
            if (i + 1 < seq.size() && seq[i] != seq[i + 1]) followed[{seq[i], seq[i + 1]}].insert(s);
        }
    }

    std::vector<SequentialRule> rules;
    const auto n = static_cast<std::int64_t>(dataset.count());
    for (const auto& [pair, seqs] : followed) {
        const auto support = static_cast<std::int64_t>(seqs.size());
        if (support < min_support_count) continue;
        rules.push_back({pair.first, pair.second, support, static_cast<std::int64_t>(containing[pair.first].size()),
                         static_cast<std::int64_t>(containing[pair.second].size()), n});
    }
    return rules;
}

void write_rules_csv(std::ostream& out, const std::vector<SequentialRule>& rules) {
    out << "X,Y,seq_count_rule,seq_count_X,seq_count_Y,n_sequences\n";
    for (const auto& r : rules) {
        csv::write_record(out, {r.antecedent, r.consequent, std::to_string(r.seq_count_rule),
                                std::to_string(r.seq_count_x), std::to_string(r.seq_count_y),
                                std::to_string(r.n_sequences)});
    }
}

std::vector<SequentialRule> read_rules_csv(std::istream& in) {
    std::vector<SequentialRule> rules;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = csv::split_record(line);
        if (f.size() != 6) throw DataError("rules CSV row has " + std::to_string(f.size()) + " fields");
        rules.push_back({f[0], f[1], to_count(f[2]), to_count(f[3]), to_count(f[4]), to_count(f[5])});
    }
    return rules;
}

} // namespace tprof
