#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tprof {

/// Calendar day, stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    /// Accepts YYYY-MM-DD, optionally followed by a time part ("T..." or " ...")
    /// which is discarded. Returns nullopt for anything else or an invalid day.
    static std::optional<Date> parse(std::string_view text);
    static Date from_ymd(int year, unsigned month, unsigned day);

    constexpr std::int32_t days() const { return days_; }
    std::string to_string() const;

    friend constexpr auto operator<=>(Date, Date) = default;
    friend constexpr std::int32_t operator-(Date a, Date b) { return a.days_ - b.days_; }
    friend constexpr Date operator+(Date d, std::int32_t n) { return Date(d.days_ + n); }

private:
    std::int32_t days_ = 0;
};

enum class Category { hotel, restaurant, attraction, other };

std::optional<Category> parse_category(std::string_view text);
std::string_view to_string(Category c);

struct Review {
    std::string user_id;
    std::string location_id;
    std::string location_name;
    double latitude = 0.0;
    double longitude = 0.0;
    Category category = Category::other;
    std::optional<double> rating;
    Date date;
    std::string country;  ///< ISO-3166 alpha-2, upper case

    friend bool operator==(const Review&, const Review&) = default;
};

struct RecordError {
    std::size_t line = 0;  ///< 1-based physical line, header included
    std::string reason;

    friend bool operator==(const RecordError&, const RecordError&) = default;
};

enum class InputFormat { csv, jsonl };

std::optional<InputFormat> parse_input_format(std::string_view text);

struct ParseOptions {
    /// Abort with DataError when errors / records exceeds this fraction.
    double max_bad_fraction = 0.5;
};

struct ParseResult {
    std::vector<Review> reviews;
    std::vector<RecordError> errors;
};

/// Parses a review dump. Malformed records are collected, not fatal, unless
/// they exceed options.max_bad_fraction of all records. CSV columns are
/// matched by header name; unknown columns (e.g. nationality, age) are ignored.
ParseResult parse_reviews(std::istream& source, InputFormat format, const ParseOptions& options = {});

/// Opens `path` and forwards to parse_reviews; IoError when unreadable.
ParseResult parse_reviews_file(const std::string& path, InputFormat format, const ParseOptions& options = {});

struct UserTimeline {
    std::string user_id;
    std::vector<Review> reviews;  ///< ascending by date, ties keep input order

    friend bool operator==(const UserTimeline&, const UserTimeline&) = default;
};

/// Groups reviews per user and sorts each group by date (stable).
/// Timelines are ordered by user_id.
std::vector<UserTimeline> build_timelines(std::vector<Review> reviews);

/// Writes reviews in the canonical CSV layout (header included).
void write_reviews_csv(std::ostream& out, const std::vector<Review>& reviews);

extern const char* const kReviewCsvHeader;

} // namespace tprof
