#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tprof {

/// Review generator with planted location communities. Every trip starts in
/// a random community; each following visit stays inside the current
/// community with probability intra_odds / (intra_odds + 1), otherwise it
/// jumps to a location of another community.
struct SyntheticConfig {
    std::size_t n_users = 2000;
    std::size_t n_locations = 30;
    std::size_t planted_communities = 3;
    double intra_odds = 20.0;
    std::uint64_t seed = 42;
    std::size_t min_trips_per_user = 1;
    std::size_t max_trips_per_user = 3;
    std::size_t min_trip_len = 4;
    std::size_t max_trip_len = 7;
};

/// Throws UsageError for zero sizes, more communities than locations,
/// communities of one location, or inverted ranges.
void validate(const SyntheticConfig& config);

std::string synthetic_location_id(std::size_t index);

/// Planted community of each location, indexed like synthetic_location_id.
std::vector<std::size_t> planted_membership(const SyntheticConfig& config);

/// Writes a review CSV (canonical header). Output depends only on `config`.
void generate_synthetic(std::ostream& out, const SyntheticConfig& config);

} // namespace tprof
