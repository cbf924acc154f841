#include "tprof/ingest.hpp"

#include "tprof/csv.hpp"
#include "tprof/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace tprof {

namespace {

using namespace std::chrono;

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

bool valid_identifier(std::string_view id) {
    return !id.empty() && id.find_first_of("\t\n\r") == std::string_view::npos;
}

// Field values of one record, already extracted as text. A missing rating is
// represented by an empty string.
struct RawRecord {
    std::string user_id;
    std::string location_id;
    std::string location_name;
    std::string latitude;
    std::string longitude;
    std::string category;
    std::string rating;
    std::string date;
    std::string country;
};

// Returns an empty string on success, otherwise the rejection reason.
std::string validate(const RawRecord& raw, Review& out) {
    if (!valid_identifier(raw.user_id)) return "missing or invalid user_id";
    if (!valid_identifier(raw.location_id)) return "missing or invalid location_id";
    if (raw.location_name.find_first_of("\n\r") != std::string::npos) return "invalid location_name";

    const auto lat = parse_double(raw.latitude);
    if (!lat || !(*lat >= -90.0 && *lat <= 90.0)) return "latitude missing or outside [-90, 90]";
    const auto lon = parse_double(raw.longitude);
    if (!lon || !(*lon >= -180.0 && *lon <= 180.0)) return "longitude missing or outside [-180, 180]";

    const auto cat = parse_category(raw.category);
    if (!cat) return "unknown category '" + raw.category + "'";

    std::optional<double> rating;
    if (!raw.rating.empty()) {
        rating = parse_double(raw.rating);
        if (!rating || !(*rating >= 1.0 && *rating <= 5.0)) return "rating outside [1, 5]";
    }

    if (raw.date.empty()) return "missing date";
    const auto date = Date::parse(raw.date);
    if (!date) return "unparseable date '" + raw.date + "'";

    if (raw.country.size() != 2 || !std::isalpha(static_cast<unsigned char>(raw.country[0])) ||
        !std::isalpha(static_cast<unsigned char>(raw.country[1])))
        return "country must be an ISO-3166 alpha-2 code";

    out.user_id = raw.user_id;
    out.location_id = raw.location_id;
    out.location_name = raw.location_name;
    out.latitude = *lat;
    out.longitude = *lon;
    out.category = *cat;
    out.rating = rating;
    out.date = *date;
    out.country = {static_cast<char>(std::toupper(static_cast<unsigned char>(raw.country[0]))),
                   static_cast<char>(std::toupper(static_cast<unsigned char>(raw.country[1])))};
    return {};
}

constexpr std::array<const char*, 9> kColumns = {"user_id",  "location_id", "location_name",
                                                 "latitude", "longitude",   "category",
                                                 "rating",   "date",        "country"};

std::string* field_of(RawRecord& r, std::size_t column) {
    switch (column) {
    case 0: return &r.user_id;
    case 1: return &r.location_id;
    case 2: return &r.location_name;
    case 3: return &r.latitude;
    case 4: return &r.longitude;
    case 5: return &r.category;
    case 6: return &r.rating;
    case 7: return &r.date;
    case 8: return &r.country;
    default: return nullptr;
    }
}

void parse_csv(std::istream& in, ParseResult& result) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<int> mapping;  // input column -> kColumns index or -1
    std::size_t expected_fields = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        if (mapping.empty()) {
            const auto header = csv::split_record(line);
            std::array<bool, kColumns.size()> seen{};
            for (const auto& name : header) {
                auto it = std::find(kColumns.begin(), kColumns.end(), name);
                int idx = it == kColumns.end() ? -1 : static_cast<int>(it - kColumns.begin());
                if (idx >= 0) seen[idx] = true;
                mapping.push_back(idx);
            }
            for (std::size_t c = 0; c < kColumns.size(); ++c) {
                // rating is optional as a column too
                if (!seen[c] && c != 6) throw DataError(std::string("CSV header lacks column '") + kColumns[c] + "'");
            }
            expected_fields = header.size();
            continue;
        }

        std::vector<std::string> fields;
        try {
            fields = csv::split_record(line);
        } catch (const DataError& e) {
            result.errors.push_back({lineno, e.what()});
            continue;
        }
        if (fields.size() != expected_fields) {
            result.errors.push_back({lineno, "expected " + std::to_string(expected_fields) + " fields, got " +
                                                 std::to_string(fields.size())});
            continue;
        }
        RawRecord raw;
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (mapping[i] >= 0) *field_of(raw, static_cast<std::size_t>(mapping[i])) = std::move(fields[i]);

        Review review;
        if (auto reason = validate(raw, review); reason.empty())
            result.reviews.push_back(std::move(review));
        else
            result.errors.push_back({lineno, std::move(reason)});
    }
}

std::string json_text(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", it->get<double>());
        return buf;
    }
    return it->dump();
}

void parse_jsonl(std::istream& in, ParseResult& result) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            result.errors.push_back({lineno, "not a JSON object"});
            continue;
        }
        RawRecord raw;
        for (std::size_t c = 0; c < kColumns.size(); ++c) *field_of(raw, c) = json_text(obj, kColumns[c]);
        Review review;
        if (auto reason = validate(raw, review); reason.empty())
            result.reviews.push_back(std::move(review));
        else
            result.errors.push_back({lineno, std::move(reason)});
    }
}

} // namespace

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() < 10) return std::nullopt;
    if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
    if (text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d))
        return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date(static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count()));
}

Date Date::from_ymd(int y, unsigned m, unsigned d) {
    const year_month_day ymd{year{y}, month{m}, day{d}};
    return Date(static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count()));
}

std::string Date::to_string() const {
    const sys_days point{std::chrono::days{days_}};
    const year_month_day ymd(point);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

std::optional<Category> parse_category(std::string_view text) {
    if (text == "hotel") return Category::hotel;
    if (text == "restaurant") return Category::restaurant;
    if (text == "attraction") return Category::attraction;
    if (text == "other") return Category::other;
    return std::nullopt;
}

std::string_view to_string(Category c) {
    switch (c) {
    case Category::hotel: return "hotel";
    case Category::restaurant: return "restaurant";
    case Category::attraction: return "attraction";
    case Category::other: return "other";
    }
    return "other";
}

std::optional<InputFormat> parse_input_format(std::string_view text) {
    if (text == "csv") return InputFormat::csv;
    if (text == "jsonl") return InputFormat::jsonl;
    return std::nullopt;
}

ParseResult parse_reviews(std::istream& source, InputFormat format, const ParseOptions& options) {
    ParseResult result;
    if (format == InputFormat::csv)
        parse_csv(source, result);
    else
        parse_jsonl(source, result);
    if (source.bad()) throw IoError("read failure while parsing reviews");

    const std::size_t total = result.reviews.size() + result.errors.size();
    if (total > 0 && static_cast<double>(result.errors.size()) > options.max_bad_fraction * static_cast<double>(total)) {
        throw DataError("corrupt dataset: " + std::to_string(result.errors.size()) + " of " + std::to_string(total) +
                        " records malformed");
    }
    return result;
}

ParseResult parse_reviews_file(const std::string& path, InputFormat format, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return parse_reviews(in, format, options);
}

std::vector<UserTimeline> build_timelines(std::vector<Review> reviews) {
    std::map<std::string, std::vector<Review>> by_user;
    for (auto& r : reviews) {
        auto& bucket = by_user[r.user_id];
        bucket.push_back(std::move(r));
    }
    std::vector<UserTimeline> timelines;
    timelines.reserve(by_user.size());
    for (auto& [user, list] : by_user) {
        std::stable_sort(list.begin(), list.end(), [](const Review& a, const Review& b) { return a.date < b.date; });
        timelines.push_back({user, std::move(list)});
    }
    return timelines;
}

const char* const kReviewCsvHeader = "user_id,location_id,location_name,latitude,longitude,category,rating,date,country";

void write_reviews_csv(std::ostream& out, const std::vector<Review>& reviews) {
    out << kReviewCsvHeader << '\n';
    char buf[64];
    for (const auto& r : reviews) {
        std::vector<std::string> f;
        f.reserve(9);
        f.push_back(r.user_id);
        f.push_back(r.location_id);
        f.push_back(r.location_name);
        std::snprintf(buf, sizeof buf, "%.7f", r.latitude);
        f.emplace_back(buf);
        std::snprintf(buf, sizeof buf, "%.7f", r.longitude);
        f.emplace_back(buf);
        f.emplace_back(to_string(r.category));
        if (r.rating) {
            std::snprintf(buf, sizeof buf, "%g", *r.rating);
            f.emplace_back(buf);
        } else {
            f.emplace_back();
        }
        f.push_back(r.date.to_string());
        f.push_back(r.country);
        csv::write_record(out, f);
    }
}

} // namespace tprof
