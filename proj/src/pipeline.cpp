#include "grouprec/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "grouprec/csv.hpp"
#include "grouprec/embedding.hpp"
#include "grouprec/report.hpp"

namespace grouprec {
namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(value);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
    T out{};
    const std::string v = trim(value);
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
        throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: '" + key + "' expects true/false, got '" + value + "'");
}

// "lo-hi", "lo..hi", "lo,hi" or a single value.
KRange parse_range(const std::string& key, const std::string& value) {
    std::string v = trim(value);
    for (const char* sep : {"..", "-", ",", ":"}) {
        const auto pos = v.find(sep);
        if (pos != std::string::npos && pos > 0) {
            const int lo = parse_integer<int>(key, v.substr(0, pos));
            const int hi = parse_integer<int>(key, v.substr(pos + std::string(sep).size()));
            return {lo, hi};
        }
    }
    const int k = parse_integer<int>(key, v);
    return {k, k};
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
    std::vector<std::size_t> out;
    for (const auto& part : split_list(value)) out.push_back(parse_integer<std::size_t>(key, part));
    return out;
}

// Runs `fn`, rethrowing any failure as a StageError for `stage`.
template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e.what(), e.exit_code());
    } catch (const std::invalid_argument& e) {
        throw StageError(stage, e.what(), ExitCode::kData);
    } catch (const std::exception& e) {
        throw StageError(stage, e.what(), ExitCode::kNumerical);
    }
}

PreferenceProfile truncated(PreferenceProfile p, std::size_t k) {
    if (p.items.size() > k) p.items.resize(k);
    return p;
}

Group prepared_group(const Group& group, const std::vector<std::string>& catalog, std::size_t k, bool flexible) {
    Group g = restrict_to_catalog(group, catalog);
    if (flexible)
        for (auto& member : g.members) member = truncated(std::move(member), k);
    return g;
}

nlohmann::json recommendations_for(const std::vector<Group>& groups, const std::vector<std::string>& all_items,
                                   const PipelineConfig& config) {
    ScoringParams params{config.a, config.c, config.budget};
    nlohmann::json out = nlohmann::json::array();
    for (const auto& group : groups) {
        const auto catalog = group_catalog(group, all_items);
        if (catalog.size() < params.k) continue;
        const Group g = prepared_group(group, catalog, params.k, config.flexible);
        for (Method method : config.methods)
            out.push_back(report::recommendation_json(group.group_id, params.k, recommend(method, g, catalog, params)));
    }
    return out;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "method,k,m,group_score\n";
    char buf[64];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.6f", report::fixed6(row.group_score));
        out += std::string(method_name(row.method)) + "," + std::to_string(row.k) + "," + std::to_string(row.m) +
               "," + buf + "\n";
    }
    return out;
}

StageError::StageError(std::string stage, const std::string& cause, ExitCode code)
    : Error(stage + "/" + cause), stage_(std::move(stage)), code_(code) {}

FieldMap PipelineConfig::effective_fields() const {
    if (fields_set) return fields;
    return format == DatasetFormat::kCsv ? FieldMap::modcloth_defaults() : FieldMap::amazon_defaults();
}

void PipelineConfig::validate() const {
    if (dataset.empty()) throw ConfigError("config: dataset path is required");
    if (sample_n < 2) throw ConfigError("config: sample_n must be >= 2");
    if (budget < 1) throw ConfigError("config: group budget must be >= 1");
    if (k_range.lo < 2 || k_range.lo > k_range.hi) throw ConfigError("config: k_range must satisfy 2 <= lo <= hi");
    ScoringParams{a, c, budget}.validate();
    if (methods.empty()) throw ConfigError("config: at least one consensus method is required");
    for (std::size_t k : sweep_k)
        if (k < 1) throw ConfigError("config: sweep_k values must be >= 1");
    for (std::size_t m : sweep_m)
        if (m < 1) throw ConfigError("config: sweep_m values must be >= 1");
    if (embedding == EmbeddingSource::kVectors && vectors.empty())
        throw ConfigError("config: embedding=vectors requires a vectors file");
    if (baseline_k < 1) throw ConfigError("config: baseline_k must be >= 1");
    if (cf.neighbors < 1 || cf.min_overlap < 1) throw ConfigError("config: neighbors and min_overlap must be >= 1");
    if (out.empty()) throw ConfigError("config: output directory is required");
}

void PipelineConfig::set(const std::string& raw_key, const std::string& value) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "dataset") dataset = value;
    else if (key == "format") {
        if (value == "jsonl" || value == "json") format = DatasetFormat::kJsonl;
        else if (value == "csv") format = DatasetFormat::kCsv;
        else throw ConfigError("config: format must be jsonl or csv");
    } else if (key == "user_field" || key == "item_field" || key == "rating_field" || key == "review_field") {
        if (!fields_set) {
            fields = effective_fields();
            fields_set = true;
        }
        if (key == "user_field") fields.user = value;
        else if (key == "item_field") fields.item = value;
        else if (key == "rating_field") fields.rating = value;
        else fields.review = value;
    } else if (key == "placeholder") placeholder = value;
    else if (key == "sample_n") sample_n = parse_integer<std::size_t>(key, value);
    else if (key == "embedding") {
        if (value == "tfidf") embedding = EmbeddingSource::kTfidf;
        else if (value == "vectors") embedding = EmbeddingSource::kVectors;
        else throw ConfigError("config: embedding must be tfidf or vectors");
    } else if (key == "vectors") {
        vectors = value;
        embedding = EmbeddingSource::kVectors;
    } else if (key == "k_range") k_range = parse_range(key, value);
    else if (key == "a") a = parse_real(key, value);
    else if (key == "c") c = parse_real(key, value);
    else if (key == "budget" || key == "k") budget = parse_integer<std::size_t>(key, value);
    else if (key == "flexible") flexible = parse_bool(key, value);
    else if (key == "methods") {
        methods.clear();
        for (const auto& name : split_list(value)) {
            auto m = parse_method(name);
            if (!m) throw ConfigError("config: unknown method '" + name + "'");
            methods.push_back(*m);
        }
    } else if (key == "sweep_k") sweep_k = parse_size_list(key, value);
    else if (key == "sweep_m") sweep_m = parse_size_list(key, value);
    else if (key == "baseline") baseline = parse_bool(key, value);
    else if (key == "neighbors") cf.neighbors = parse_integer<int>(key, value);
    else if (key == "min_overlap") cf.min_overlap = parse_integer<int>(key, value);
    else if (key == "baseline_k") baseline_k = parse_integer<int>(key, value);
    else if (key == "seed") seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "out") out = value;
    else throw ConfigError("config: unknown key '" + raw_key + "'");
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
            // Lists: drop the brackets and any quotes around elements.
            std::string list;
            for (char ch : value.substr(1, value.size() - 2))
                if (ch != '"' && ch != '\'') list += ch;
            value = list;
        }
        out[key] = value;
    }
    return out;
}

IngestResult load_dataset(const PipelineConfig& config) {
    const FieldMap fields = config.effective_fields();
    if (config.format == DatasetFormat::kCsv) return ingest_csv_dropping_empty(config.dataset, fields);
    return ingest_jsonl(config.dataset, fields, config.placeholder);
}

EmbeddingMatrix embed_records(const PipelineConfig& config, const std::vector<ReviewRecord>& records) {
    if (records.empty()) throw DataError("no records to embed");
    std::vector<std::int64_t> ids;
    for (const auto& rec : records) ids.push_back(rec.seq);

    if (config.embedding == EmbeddingSource::kTfidf) {
        std::vector<std::string> texts;
        for (const auto& rec : records) texts.push_back(rec.review_text);
        return embed_tfidf(texts, std::move(ids));
    }

    const EmbeddingMatrix loaded = load_vectors(config.vectors);
    std::unordered_map<std::int64_t, Eigen::Index> row_of;
    for (std::size_t i = 0; i < loaded.ids.size(); ++i) row_of.emplace(loaded.ids[i], static_cast<Eigen::Index>(i));
    EmbeddingMatrix emb;
    emb.ids = ids;
    emb.rows.resize(static_cast<Eigen::Index>(ids.size()), loaded.dim());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = row_of.find(ids[i]);
        if (it == row_of.end())
            throw StageError("embedding", "id-mismatch: no vector for record " + std::to_string(ids[i]),
                             ExitCode::kData);
        emb.rows.row(static_cast<Eigen::Index>(i)) = loaded.rows.row(it->second);
    }
    return emb;
}

std::vector<Group> groups_from_labels(const std::map<std::string, int>& user_labels,
                                      const std::vector<PreferenceProfile>& profiles) {
    std::map<int, Group> by_label;
    for (const auto& profile : profiles) {
        auto it = user_labels.find(profile.user_id);
        if (it == user_labels.end()) continue;
        Group& g = by_label[it->second];
        g.group_id = it->second;
        g.members.push_back(profile);
    }
    std::vector<Group> out;
    for (auto& [_, g] : by_label) out.push_back(std::move(g));
    return out;
}

std::vector<std::string> group_catalog(const Group& group, const std::vector<std::string>& all_items,
                                       std::optional<std::size_t> m) {
    std::vector<std::string> own;
    std::unordered_set<std::string> seen;
    for (const auto& member : group.members)
        for (const auto& item : member.items)
            if (seen.insert(item).second) own.push_back(item);
    // Keep first-appearance order relative to the dataset.
    std::unordered_map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < all_items.size(); ++i) rank.emplace(all_items[i], i);
    std::stable_sort(own.begin(), own.end(), [&](const std::string& x, const std::string& y) {
        const auto rx = rank.count(x) ? rank.at(x) : all_items.size();
        const auto ry = rank.count(y) ? rank.at(y) : all_items.size();
        return rx < ry;
    });
    std::vector<std::string> catalog = own;
    for (const auto& item : all_items)
        if (!seen.count(item)) catalog.push_back(item);
    if (m && catalog.size() > *m) catalog.resize(*m);
    return catalog;
}

Group restrict_to_catalog(const Group& group, const std::vector<std::string>& catalog) {
    const std::unordered_set<std::string> allowed(catalog.begin(), catalog.end());
    Group out;
    out.group_id = group.group_id;
    for (const auto& member : group.members) {
        PreferenceProfile p{member.user_id, {}};
        for (const auto& item : member.items)
            if (allowed.count(item)) p.items.push_back(item);
        out.members.push_back(std::move(p));
    }
    return out;
}

std::vector<SweepRow> sweep(const std::vector<Group>& groups, const std::vector<std::string>& all_items,
                            const PipelineConfig& config) {
    std::vector<SweepRow> rows;
    if (groups.empty()) return rows;
    for (Method method : config.methods) {
        for (std::size_t k : config.sweep_k) {
            for (std::size_t m : config.sweep_m) {
                if (k > m || all_items.size() < m) continue;
                const ScoringParams params{config.a, config.c, k};
                double sum = 0.0;
                for (const auto& group : groups) {
                    const auto catalog = group_catalog(group, all_items, m);
                    const Group g = prepared_group(group, catalog, k, config.flexible);
                    sum += recommend(method, g, catalog, params).report.group_score;
                }
                rows.push_back({method, k, m, sum / static_cast<double>(groups.size())});
            }
        }
    }
    return rows;
}

ContingencyCounts compare_partitions(const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
    if (a.size() != b.size()) throw DataError("compare: partitions cover different users");
    std::vector<int> la, lb;
    auto ib = b.begin();
    for (const auto& [user, label] : a) {
        if (ib->first != user) throw DataError("compare: user '" + user + "' missing from the second partition");
        la.push_back(label);
        lb.push_back(ib->second);
        ++ib;
    }
    return contingency(la, lb);
}

PipelineSummary run_pipeline(const PipelineConfig& config) {
    namespace fs = std::filesystem;
    in_stage("config", [&] { config.validate(); });
    in_stage("output", [&] {
        fs::create_directories(config.out);
        fs::remove(config.out / "FAILED");
    });

    PipelineSummary summary;
    auto write = [&](const std::string& name, const std::string& text) {
        report::write_text(config.out / name, text);
        summary.files.push_back(config.out / name);
    };
    auto write_json = [&](const std::string& name, const nlohmann::json& j) { write(name, j.dump(2)); };

    try {
        const IngestResult ingested = in_stage("ingest", [&] { return load_dataset(config); });
        const auto records = in_stage("sample", [&] {
            auto sampled = sample_first_users(ingested.records, config.sample_n);
            if (distinct_users(sampled).size() < 2) throw DataError("need at least 2 users");
            return sampled;
        });
        summary.records = records.size();
        summary.users = distinct_users(records).size();

        const EmbeddingMatrix emb = in_stage("embedding", [&] { return embed_records(config, records); });
        const SimilarityMatrix sim = in_stage("similarity", [&] { return cosine_similarity_matrix(emb); });
        const SilhouetteReport sil = in_stage("select_k", [&] { return select_k(sim, config.k_range, config.seed); });
        summary.chosen_k = sil.chosen_k;
        const auto labels = in_stage("cluster", [&] { return spectral_cluster(sim, sil.chosen_k, config.seed); });
        const ClusterAssignment assignment = in_stage("assign", [&] { return assign_users(records, labels); });

        in_stage("write", [&] {
            write("clusters.csv", report::instance_clusters_csv(records, labels));
            write("users.csv", report::user_clusters_csv(assignment.user_labels));
            write_json("silhouette.json", report::silhouette_json(sil));
        });

        const auto profiles = preference_profiles(records);
        const auto all_items = distinct_items(records);
        const auto groups = groups_from_labels(assignment.user_labels, profiles);
        in_stage("recommend", [&] {
            write_json("recommendations.json", recommendations_for(groups, all_items, config));
            write("sweep.csv", sweep_csv(sweep(groups, all_items, config)));
        });

        if (config.baseline) {
            const ClusterAssignment pc = in_stage("baseline", [&] {
                const auto dense = predict_ratings(build_utility_matrix(records), config.cf);
                return cluster_users(dense, std::min<int>(config.baseline_k, static_cast<int>(dense.users.size())),
                                     config.seed);
            });
            const auto pc_groups = groups_from_labels(pc.user_labels, profiles);
            in_stage("baseline", [&] {
                write("baseline_users.csv", report::user_clusters_csv(pc.user_labels, "predict_and_cluster"));
                write_json("baseline_recommendations.json", recommendations_for(pc_groups, all_items, config));
                write("baseline_sweep.csv", sweep_csv(sweep(pc_groups, all_items, config)));
            });
            in_stage("compare", [&] {
                write_json("metrics.json",
                           report::metrics_json(compare_partitions(assignment.user_labels, pc.user_labels)));
            });
        }
    } catch (const StageError& e) {
        try {
            report::write_text(config.out / "FAILED", "stage: " + e.stage() + "\nerror: " + e.what() + "\n");
        } catch (...) {
        }
        throw;
    }
    return summary;
}

}  // namespace grouprec
