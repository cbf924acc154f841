#include "tprof/trips.hpp"

#include "tprof/errors.hpp"

#include <istream>
#include <ostream>

namespace tprof {

std::vector<Trip> segment_trips(const UserTimeline& timeline) {
    std::vector<Trip> trips;
    for (const auto& review : timeline.reviews) {
        if (trips.empty() || review.date - trips.back().end_date() >= 2)
            trips.push_back(Trip{timeline.user_id, {}});
        trips.back().visits.push_back({review.location_id, review.date, review.country});
    }
    return trips;
}

std::int32_t break_days(const Trip& a, const Trip& b) { return b.start_date() - a.end_date() - 1; }

bool can_merge(const Trip& a, const Trip& b, int max_gap_days) {
    const auto gap = break_days(a, b);
    return gap <= max_gap_days && gap <= a.duration_days() && gap <= b.duration_days() &&
           a.last_country() == b.first_country();
}

std::vector<Trip> merge_trips(std::vector<Trip> trips, int max_gap_days) {
    // A single pass can leave mergeable neighbours behind: the right-hand trip
    // may only grow long enough after it absorbed its own successor.
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Trip> out;
        out.reserve(trips.size());
        for (auto& trip : trips) {
            if (!out.empty() && can_merge(out.back(), trip, max_gap_days)) {
                auto& dst = out.back().visits;
                dst.insert(dst.end(), std::make_move_iterator(trip.visits.begin()),
                           std::make_move_iterator(trip.visits.end()));
                changed = true;
            } else {
                out.push_back(std::move(trip));
            }
        }
        trips = std::move(out);
    }
    return trips;
}

double SequenceDataset::avg_length() const {
    if (sequences.empty()) return 0.0;
    return static_cast<double>(total_length()) / static_cast<double>(sequences.size());
}

std::size_t SequenceDataset::total_length() const {
    std::size_t n = 0;
    for (const auto& s : sequences) n += s.size();
    return n;
}

SequenceDataset build_sequence_dataset(const std::vector<Trip>& trips, std::size_t min_trip_len,
                                       bool dedup_consecutive) {
    SequenceDataset dataset;
    for (const auto& trip : trips) {
        std::vector<std::string> seq;
        seq.reserve(trip.visits.size());
        for (const auto& v : trip.visits) {
            if (dedup_consecutive && !seq.empty() && seq.back() == v.location_id) continue;
            seq.push_back(v.location_id);
        }
        if (seq.size() >= min_trip_len && !seq.empty()) dataset.sequences.push_back(std::move(seq));
    }
    return dataset;
}

std::vector<Trip> build_trips(const std::vector<UserTimeline>& timelines, int max_gap_days) {
    std::vector<Trip> all;
    for (const auto& timeline : timelines) {
        auto merged = merge_trips(segment_trips(timeline), max_gap_days);
        all.insert(all.end(), std::make_move_iterator(merged.begin()), std::make_move_iterator(merged.end()));
    }
    return all;
}

void write_sequences(std::ostream& out, const SequenceDataset& dataset) {
    for (const auto& seq : dataset.sequences) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (i) out << '\t';
            out << seq[i];
        }
        out << '\n';
    }
}

SequenceDataset read_sequences(std::istream& in) {
    SequenceDataset dataset;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> seq;
        std::size_t pos = 0;
        while (true) {
            const auto tab = line.find('\t', pos);
            seq.push_back(line.substr(pos, tab - pos));
            if (seq.back().empty()) throw DataError("empty location id in sequence dump");
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        dataset.sequences.push_back(std::move(seq));
    }
    return dataset;
}

} // namespace tprof
