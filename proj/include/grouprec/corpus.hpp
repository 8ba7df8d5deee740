#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace grouprec {

// One (user, item, rating, review) interaction as it appears in a dataset.
struct ReviewRecord {
    std::string user_id;
    std::string item_id;
    int rating = 0;           // 1..5
    std::string review_text;  // may be empty only for CSV-origin data before filtering
    std::int64_t seq = 0;     // position among retained records, file order
};

// Attribute names of the four columns/keys consumed from a dataset.
struct FieldMap {
    std::string user;
    std::string item;
    std::string rating;
    std::string review;

    static FieldMap amazon_defaults() { return {"reviewerID", "asin", "overall", "reviewText"}; }
    static FieldMap modcloth_defaults() { return {"user_id", "item_id", "quality", "review_text"}; }
};

struct IngestResult {
    std::vector<ReviewRecord> records;
    std::size_t rejected_ratings = 0;  // rows dropped for a rating outside [1,5]
    std::size_t dropped_empty = 0;     // rows dropped for an empty review (CSV mode)
};

// JSON-lines ingestion. Missing, null or blank review text is replaced by
// `placeholder`. Blank lines are skipped. Throws DataError on unreadable
// files, invalid UTF-8 or a malformed line (message carries the line number).
IngestResult ingest_jsonl(const std::filesystem::path& path, const FieldMap& fields,
                          const std::string& placeholder = "the");

// RFC-4180 CSV ingestion with a header row. Rows whose review text is empty
// or NaN are dropped. Throws DataError naming any mapped column that is
// absent from the header.
IngestResult ingest_csv_dropping_empty(const std::filesystem::path& path, const FieldMap& fields);

class UtilityMatrix {
public:
    using Cell = std::pair<std::size_t, std::size_t>;  // (user index, item index)

    UtilityMatrix() = default;

    const std::vector<std::string>& users() const { return users_; }
    const std::vector<std::string>& items() const { return items_; }
    const std::map<Cell, int>& entries() const { return entries_; }

    std::size_t num_users() const { return users_.size(); }
    std::size_t num_items() const { return items_.size(); }
    std::size_t num_entries() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::optional<int> rating(std::size_t user, std::size_t item) const;
    std::optional<std::size_t> user_index(const std::string& user_id) const;
    std::optional<std::size_t> item_index(const std::string& item_id) const;

private:
    friend UtilityMatrix build_utility_matrix(const std::vector<ReviewRecord>& records);

    std::vector<std::string> users_;
    std::vector<std::string> items_;
    std::map<std::string, std::size_t> user_lookup_;
    std::map<std::string, std::size_t> item_lookup_;
    std::map<Cell, int> entries_;
};

// Users and items in first-appearance order; a repeated (user, item) pair
// keeps the rating of its latest record.
UtilityMatrix build_utility_matrix(const std::vector<ReviewRecord>& records);

struct PreferenceProfile {
    std::string user_id;
    std::vector<std::string> items;  // ordered, distinct
};

// Full lists, or lists truncated to the first `budget` items.
struct ProfileMode {
    std::optional<std::size_t> flexible_budget;

    static ProfileMode full() { return {}; }
    static ProfileMode flexible(std::size_t k) { return {k}; }
};

// One profile per user in first-appearance order; items in seq order with
// repeats removed (first occurrence kept).
std::vector<PreferenceProfile> preference_profiles(const std::vector<ReviewRecord>& records,
                                                   ProfileMode mode = ProfileMode::full());

// Records belonging to the first `n` distinct users in file order.
std::vector<ReviewRecord> sample_first_users(const std::vector<ReviewRecord>& records, std::size_t n);

// Distinct users / items in first-appearance order.
std::vector<std::string> distinct_users(const std::vector<ReviewRecord>& records);
std::vector<std::string> distinct_items(const std::vector<ReviewRecord>& records);

}  // namespace grouprec
