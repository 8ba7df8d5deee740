#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "grouprec/baseline.hpp"
#include "grouprec/clustering.hpp"
#include "grouprec/consensus.hpp"
#include "grouprec/corpus.hpp"
#include "grouprec/error.hpp"
#include "grouprec/validation.hpp"

namespace grouprec {

enum class DatasetFormat { kJsonl, kCsv };
enum class EmbeddingSource { kTfidf, kVectors };

struct PipelineConfig {
    std::filesystem::path dataset;
    DatasetFormat format = DatasetFormat::kJsonl;
    FieldMap fields = FieldMap::amazon_defaults();
    bool fields_set = false;  // false: pick the defaults for `format`
    std::string placeholder = "the";

    std::size_t sample_n = 500;
    EmbeddingSource embedding = EmbeddingSource::kTfidf;
    std::filesystem::path vectors;
    KRange k_range{2, 6};

    double a = 2.0;
    double c = 1.0;
    std::size_t budget = 5;
    bool flexible = false;
    std::vector<Method> methods{Method::kLMM, Method::kLMMP, Method::kGRAM, Method::kHAM};
    std::vector<std::size_t> sweep_k{3, 5, 7, 10};
    std::vector<std::size_t> sweep_m{10, 20, 50};

    bool baseline = true;
    CfOptions cf;
    int baseline_k = 2;

    std::uint64_t seed = 0;
    std::filesystem::path out = "out";

    FieldMap effective_fields() const;

    // Throws ConfigError describing the first invalid setting.
    void validate() const;

    // Applies one key=value setting (keys as in the config file, e.g.
    // "sample_n", "k_range", "methods"). Throws ConfigError on unknown keys
    // or unparsable values.
    void set(const std::string& key, const std::string& value);
};

// Reads a key = value file: '#' comments, optional quotes, [sections] ignored.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

// A failure inside one pipeline stage.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& cause, ExitCode code);
    const std::string& stage() const noexcept { return stage_; }
    ExitCode exit_code() const noexcept override { return code_; }

private:
    std::string stage_;
    ExitCode code_;
};

// Stage building blocks shared by the CLI subcommands.
IngestResult load_dataset(const PipelineConfig& config);
EmbeddingMatrix embed_records(const PipelineConfig& config, const std::vector<ReviewRecord>& records);

// Group members from a user -> cluster map; profiles in `profiles` order.
std::vector<Group> groups_from_labels(const std::map<std::string, int>& user_labels,
                                      const std::vector<PreferenceProfile>& profiles);

// The group's own items in first-appearance order followed by the remaining
// `all_items`, truncated to `m` when given.
std::vector<std::string> group_catalog(const Group& group, const std::vector<std::string>& all_items,
                                       std::optional<std::size_t> m = std::nullopt);

// Drops preference items outside the catalog.
Group restrict_to_catalog(const Group& group, const std::vector<std::string>& catalog);

struct SweepRow {
    Method method;
    std::size_t k;
    std::size_t m;
    double group_score;  // mean over groups
};

std::vector<SweepRow> sweep(const std::vector<Group>& groups, const std::vector<std::string>& all_items,
                            const PipelineConfig& config);

// method,k,m,group_score table with scores at six decimals.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct PipelineSummary {
    std::size_t records = 0;
    std::size_t users = 0;
    int chosen_k = 0;
    std::vector<std::filesystem::path> files;
};

// ingest -> sample -> embed -> similarity -> select_k -> spectral clustering
// -> majority user labels -> consensus per group -> optional baseline and
// partition comparison. Writes every report under config.out. On failure a
// FAILED marker naming the stage is written and StageError is thrown.
PipelineSummary run_pipeline(const PipelineConfig& config);

// Compares two user-level partitions over the same users.
// Throws DataError when the user sets differ.
ContingencyCounts compare_partitions(const std::map<std::string, int>& a, const std::map<std::string, int>& b);

}  // namespace grouprec
