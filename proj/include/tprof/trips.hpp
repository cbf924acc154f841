#pragma once

#include "tprof/ingest.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tprof {

struct Visit {
    std::string location_id;
    Date date;
    std::string country;

    friend bool operator==(const Visit&, const Visit&) = default;
};

/// A run of reviewing days by one user. Visits are in date order.
struct Trip {
    std::string user_id;
    std::vector<Visit> visits;

    Date start_date() const { return visits.front().date; }
    Date end_date() const { return visits.back().date; }
    /// end - start + 1, in days.
    std::int32_t duration_days() const { return end_date() - start_date() + 1; }
    const std::string& first_country() const { return visits.front().country; }
    const std::string& last_country() const { return visits.back().country; }

    friend bool operator==(const Trip&, const Trip&) = default;
};

struct TripOptions {
    int max_gap_days = 7;
    std::size_t min_trip_len = 4;
    bool dedup_consecutive = false;
};

/// Splits a date-sorted timeline wherever two consecutive reviews are at
/// least two days apart.
std::vector<Trip> segment_trips(const UserTimeline& timeline);

/// Full calendar days strictly between the end of `a` and the start of `b`.
std::int32_t break_days(const Trip& a, const Trip& b);

/// Whether `a` followed by `b` may be joined across their break.
bool can_merge(const Trip& a, const Trip& b, int max_gap_days);

/// Joins adjacent trips of one user, left to right, until no break
/// qualifies. A joined trip's duration is recomputed before the next test.
std::vector<Trip> merge_trips(std::vector<Trip> trips, int max_gap_days = 7);

struct SequenceDataset {
    std::vector<std::vector<std::string>> sequences;

    std::size_t count() const { return sequences.size(); }
    double avg_length() const;
    std::size_t total_length() const;

    friend bool operator==(const SequenceDataset&, const SequenceDataset&) = default;
};

/// Converts finished trips to location sequences. When dedup_consecutive is
/// set, immediate repeats collapse first; sequences shorter than
/// min_trip_len are then dropped.
SequenceDataset build_sequence_dataset(const std::vector<Trip>& trips, std::size_t min_trip_len,
                                       bool dedup_consecutive = false);

/// Runs segmentation and merging for every timeline. Output trips are
/// grouped by user in timeline order.
std::vector<Trip> build_trips(const std::vector<UserTimeline>& timelines, int max_gap_days = 7);

/// One sequence per line, location ids separated by tabs.
void write_sequences(std::ostream& out, const SequenceDataset& dataset);
SequenceDataset read_sequences(std::istream& in);

} // namespace tprof
