#include "grouprec/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "grouprec/csv.hpp"
#include "grouprec/error.hpp"

namespace grouprec {
namespace {

std::string_view trim(std::string_view s) {
    auto is_space = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Empty, whitespace-only and the textual NaN spellings pandas emits.
bool is_missing_text(std::string_view s) {
    s = trim(s);
    return s.empty() || s == "NaN" || s == "nan" || s == "NAN";
}

// Integer rating in [1,5], or nullopt when out of range / fractional.
std::optional<int> checked_rating(double value) {
    if (!std::isfinite(value) || value != std::floor(value)) return std::nullopt;
    if (value < 1.0 || value > 5.0) return std::nullopt;
    return static_cast<int>(value);
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    std::string buf(s);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size()) return std::nullopt;
    return v;
}

std::string id_string(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    return {};
}

std::string line_error(const std::filesystem::path& path, std::size_t line, const std::string& what) {
    return path.string() + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

IngestResult ingest_jsonl(const std::filesystem::path& path, const FieldMap& fields, const std::string& placeholder) {
    const std::string text = csv::read_text_file(path);
    if (!csv::valid_utf8(text)) throw DataError("invalid UTF-8 in " + path.string());

    IngestResult result;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (trim(line).empty()) continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(line_error(path, line_no, std::string("malformed JSON: ") + e.what()));
        }
        if (!obj.is_object()) throw DataError(line_error(path, line_no, "expected a JSON object"));

        auto required_id = [&](const std::string& key) {
            auto it = obj.find(key);
            if (it == obj.end()) throw DataError(line_error(path, line_no, "missing field '" + key + "'"));
            std::string id = id_string(*it);
            if (id.empty()) throw DataError(line_error(path, line_no, "field '" + key + "' is not an id"));
            return id;
        };

        ReviewRecord rec;
        rec.user_id = required_id(fields.user);
        rec.item_id = required_id(fields.item);

        auto rating_it = obj.find(fields.rating);
        if (rating_it == obj.end()) throw DataError(line_error(path, line_no, "missing field '" + fields.rating + "'"));
        std::optional<double> raw;
        if (rating_it->is_number()) raw = rating_it->get<double>();
        else if (rating_it->is_string()) raw = parse_number(rating_it->get<std::string>());
        if (!raw) throw DataError(line_error(path, line_no, "field '" + fields.rating + "' is not numeric"));
        auto rating = checked_rating(*raw);
        if (!rating) {
            ++result.rejected_ratings;
            continue;
        }
        rec.rating = *rating;

        auto review_it = obj.find(fields.review);
        if (review_it == obj.end() || review_it->is_null()) {
            rec.review_text = placeholder;
        } else if (review_it->is_string()) {
            rec.review_text = review_it->get<std::string>();
            if (is_missing_text(rec.review_text)) rec.review_text = placeholder;
        } else {
            throw DataError(line_error(path, line_no, "field '" + fields.review + "' is not text"));
        }

        rec.seq = static_cast<std::int64_t>(result.records.size());
        result.records.push_back(std::move(rec));
    }
    return result;
}

IngestResult ingest_csv_dropping_empty(const std::filesystem::path& path, const FieldMap& fields) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw DataError(path.string() + ": missing header row");

    const csv::Row& header = rows.front();
    auto column = [&](const std::string& name) {
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& h) { return trim(h) == name; });
        if (it == header.end()) throw DataError(path.string() + ": missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t user_col = column(fields.user);
    const std::size_t item_col = column(fields.item);
    const std::size_t rating_col = column(fields.rating);
    const std::size_t review_col = column(fields.review);
    const std::size_t needed = std::max({user_col, item_col, rating_col, review_col}) + 1;

    IngestResult result;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const csv::Row& row = rows[r];
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        // Line numbers are approximate when quoted fields span lines.
        if (row.size() < needed) throw DataError(line_error(path, r + 1, "too few columns"));

        if (is_missing_text(row[review_col])) {
            ++result.dropped_empty;
            continue;
        }
        auto raw = parse_number(row[rating_col]);
        if (!raw) throw DataError(line_error(path, r + 1, "column '" + fields.rating + "' is not numeric"));
        auto rating = checked_rating(*raw);
        if (!rating) {
            ++result.rejected_ratings;
            continue;
        }
        ReviewRecord rec;
        rec.user_id = std::string(trim(row[user_col]));
        rec.item_id = std::string(trim(row[item_col]));
        if (rec.user_id.empty() || rec.item_id.empty())
            throw DataError(line_error(path, r + 1, "empty user or item id"));
        rec.rating = *rating;
        rec.review_text = row[review_col];
        rec.seq = static_cast<std::int64_t>(result.records.size());
        result.records.push_back(std::move(rec));
    }
    return result;
}

std::optional<int> UtilityMatrix::rating(std::size_t user, std::size_t item) const {
    auto it = entries_.find({user, item});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> UtilityMatrix::user_index(const std::string& user_id) const {
    auto it = user_lookup_.find(user_id);
    if (it == user_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> UtilityMatrix::item_index(const std::string& item_id) const {
    auto it = item_lookup_.find(item_id);
    if (it == item_lookup_.end()) return std::nullopt;
    return it->second;
}

UtilityMatrix build_utility_matrix(const std::vector<ReviewRecord>& records) {
    UtilityMatrix um;
    auto intern = [](std::map<std::string, std::size_t>& lookup, std::vector<std::string>& names,
                     const std::string& key) {
        auto [it, inserted] = lookup.try_emplace(key, names.size());
        if (inserted) names.push_back(key);
        return it->second;
    };
    for (const auto& rec : records) {
        const std::size_t u = intern(um.user_lookup_, um.users_, rec.user_id);
        const std::size_t i = intern(um.item_lookup_, um.items_, rec.item_id);
        um.entries_[{u, i}] = rec.rating;
    }
    return um;
}

std::vector<PreferenceProfile> preference_profiles(const std::vector<ReviewRecord>& records, ProfileMode mode) {
    std::vector<const ReviewRecord*> ordered;
    ordered.reserve(records.size());
    for (const auto& rec : records) ordered.push_back(&rec);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const ReviewRecord* x, const ReviewRecord* y) { return x->seq < y->seq; });

    std::vector<PreferenceProfile> profiles;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::unordered_set<std::string>> seen;
    for (const ReviewRecord* rec : ordered) {
        auto [it, inserted] = index.try_emplace(rec->user_id, profiles.size());
        if (inserted) {
            profiles.push_back({rec->user_id, {}});
            seen.emplace_back();
        }
        PreferenceProfile& profile = profiles[it->second];
        if (mode.flexible_budget && profile.items.size() >= *mode.flexible_budget) continue;
        if (seen[it->second].insert(rec->item_id).second) profile.items.push_back(rec->item_id);
    }
    return profiles;
}

std::vector<ReviewRecord> sample_first_users(const std::vector<ReviewRecord>& records, std::size_t n) {
    std::unordered_set<std::string> kept;
    std::vector<ReviewRecord> out;
    for (const auto& rec : records) {
        if (!kept.contains(rec.user_id)) {
            if (kept.size() >= n) continue;
            kept.insert(rec.user_id);
        }
        out.push_back(rec);
    }
    return out;
}

namespace {

template <typename Key>
std::vector<std::string> distinct_by(const std::vector<ReviewRecord>& records, Key key) {
    std::unordered_set<std::string> seen;
    std::vector<std::string> out;
    for (const auto& rec : records) {
        const std::string& k = key(rec);
        if (seen.insert(k).second) out.push_back(k);
    }
    return out;
}

}  // namespace

std::vector<std::string> distinct_users(const std::vector<ReviewRecord>& records) {
    return distinct_by(records, [](const ReviewRecord& r) -> const std::string& { return r.user_id; });
}

std::vector<std::string> distinct_items(const std::vector<ReviewRecord>& records) {
    return distinct_by(records, [](const ReviewRecord& r) -> const std::string& { return r.item_id; });
}

}  // namespace grouprec
