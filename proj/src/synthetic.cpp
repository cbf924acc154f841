#include "tprof/synthetic.hpp"

#include "tprof/errors.hpp"
#include "tprof/ingest.hpp"

#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

namespace tprof {

namespace {

// Draws are built from raw engine output so that a seed yields the same
// bytes on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t r;
        do r = engine_();
        while (r >= limit);
        return static_cast<std::size_t>(r % n);
    }

    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace

void validate(const SyntheticConfig& c) {
    if (c.n_users == 0 || c.n_locations == 0 || c.planted_communities == 0)
        throw UsageError("synthetic sizes must be positive");
    if (c.n_locations < 2 * c.planted_communities)
        throw UsageError("each planted community needs at least two locations");
    if (!(c.intra_odds > 0.0)) throw UsageError("intra_odds must be positive");
    if (c.min_trips_per_user == 0 || c.min_trips_per_user > c.max_trips_per_user)
        throw UsageError("bad trips-per-user range");
    if (c.min_trip_len == 0 || c.min_trip_len > c.max_trip_len) throw UsageError("bad trip length range");
}

std::string synthetic_location_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "loc_%03zu", index);
    return buf;
}

std::vector<std::size_t> planted_membership(const SyntheticConfig& c) {
    std::vector<std::size_t> community(c.n_locations);
    for (std::size_t i = 0; i < c.n_locations; ++i) community[i] = i * c.planted_communities / c.n_locations;
    return community;
}

void generate_synthetic(std::ostream& out, const SyntheticConfig& config) {
    validate(config);
    const auto community = planted_membership(config);
    std::vector<std::vector<std::size_t>> members(config.planted_communities);
    for (std::size_t i = 0; i < community.size(); ++i) members[community[i]].push_back(i);

    std::vector<Review> locations(config.n_locations);
    constexpr Category kCategories[] = {Category::attraction, Category::restaurant, Category::hotel, Category::other};
    for (std::size_t i = 0; i < config.n_locations; ++i) {
        auto& l = locations[i];
        l.location_id = synthetic_location_id(i);
        char name[48];
        std::snprintf(name, sizeof name, "Place %zu (group %zu)", i, community[i] + 1);
        l.location_name = name;
        l.latitude = 48.80 + 0.004 * static_cast<double>(i % 25);
        l.longitude = 2.25 + 0.004 * static_cast<double>(i / 25);
        l.category = kCategories[i % 4];
        l.country = "FR";
    }

    Rng rng(config.seed);
    const double stay = config.intra_odds / (config.intra_odds + 1.0);
    const Date first_day = Date::from_ymd(2013, 1, 1);

    std::vector<Review> reviews;
    for (std::size_t u = 0; u < config.n_users; ++u) {
        char user[32];
        std::snprintf(user, sizeof user, "user_%05zu", u);
        Date day = first_day + static_cast<std::int32_t>(rng.below(365));
        const std::size_t trips = rng.between(config.min_trips_per_user, config.max_trips_per_user);
        for (std::size_t t = 0; t < trips; ++t) {
            const std::size_t length = rng.between(config.min_trip_len, config.max_trip_len);
            std::size_t group = rng.below(config.planted_communities);
            std::size_t loc = members[group][rng.below(members[group].size())];
            for (std::size_t v = 0; v < length; ++v) {
                if (v > 0) {
                    if (config.planted_communities == 1 || rng.unit() < stay) {
                        // another location of the same community
                        const auto& pool = members[group];
                        std::size_t next = pool[rng.below(pool.size() - 1)];
                        if (next == loc) next = pool.back();
                        loc = next;
                    } else {
                        std::size_t other = rng.below(config.planted_communities - 1);
                        if (other >= group) ++other;
                        group = other;
                        loc = members[group][rng.below(members[group].size())];
                    }
                }
                Review r = locations[loc];
                r.user_id = user;
                r.rating = static_cast<double>(1 + rng.below(5));
                r.date = day;
                reviews.push_back(std::move(r));
                day = day + 1;
            }
            // breaks longer than any trip keep trips apart after merging
            day = day + static_cast<std::int32_t>(config.max_trip_len + 10 + rng.below(60));
        }
    }
    write_reviews_csv(out, reviews);
}

} // namespace tprof
