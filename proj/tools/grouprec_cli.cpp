// grouprec: text-similarity group detection and order-aware group
// recommendation from the command line.

#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "grouprec/baseline.hpp"
#include "grouprec/clustering.hpp"
#include "grouprec/consensus.hpp"
#include "grouprec/corpus.hpp"
#include "grouprec/embedding.hpp"
#include "grouprec/error.hpp"
#include "grouprec/pipeline.hpp"
#include "grouprec/report.hpp"
#include "grouprec/validation.hpp"

namespace fs = std::filesystem;
using namespace grouprec;

namespace {

// Flag values collected during parsing, applied over the config file.
using Overrides = std::map<std::string, std::string>;

void add_flag(CLI::App* app, Overrides& overrides, const std::string& flag, const std::string& key,
              const std::string& help) {
    app->add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
}

void add_dataset_flags(CLI::App* app, Overrides& o) {
    app->add_option("--config", "key = value configuration file (flags override it)");
    add_flag(app, o, "--dataset", "dataset", "review dataset path");
    add_flag(app, o, "--format", "format", "jsonl | csv");
    add_flag(app, o, "--user-field", "user_field", "user id attribute");
    add_flag(app, o, "--item-field", "item_field", "item id attribute");
    add_flag(app, o, "--rating-field", "rating_field", "rating attribute");
    add_flag(app, o, "--review-field", "review_field", "review text attribute");
    add_flag(app, o, "--placeholder", "placeholder", "stand-in for empty JSONL reviews (default: the)");
    add_flag(app, o, "--sample-n", "sample_n", "keep the first N distinct users (default 500)");
    add_flag(app, o, "--out", "out", "output directory");
}

void add_embedding_flags(CLI::App* app, Overrides& o) {
    add_flag(app, o, "--embedding", "embedding", "tfidf | vectors");
    add_flag(app, o, "--vectors", "vectors", "JSON-lines vector file {id, vector}");
}

void add_cluster_flags(CLI::App* app, Overrides& o) {
    add_flag(app, o, "--k-range", "k_range", "cluster counts tried by silhouette selection, e.g. 2-6");
    add_flag(app, o, "--seed", "seed", "PRNG seed (default 0)");
}

void add_scoring_flags(CLI::App* app, Overrides& o) {
    add_flag(app, o, "--budget", "budget", "group budget k (default 5)");
    add_flag(app, o, "--a", "a", "score base a (default 2)");
    add_flag(app, o, "--c", "c", "regularization factor c (default 1)");
    add_flag(app, o, "--methods", "methods", "comma list of LMM,LMMP,GRAM,HAM");
    add_flag(app, o, "--sweep-k", "sweep_k", "budgets for the sweep table (default 3,5,7,10)");
    add_flag(app, o, "--sweep-m", "sweep_m", "catalog sizes for the sweep table (default 10,20,50)");
    add_flag(app, o, "--flexible", "flexible", "truncate preference lists to the budget (true/false)");
}

void add_baseline_flags(CLI::App* app, Overrides& o) {
    add_flag(app, o, "--baseline", "baseline", "run the Predict & Cluster baseline (true/false)");
    add_flag(app, o, "--neighbors", "neighbors", "CF neighborhood size (default 20)");
    add_flag(app, o, "--min-overlap", "min_overlap", "minimum co-rated items for a similarity (default 2)");
    add_flag(app, o, "--baseline-k", "baseline_k", "baseline cluster count (default 2)");
}

PipelineConfig build_config(CLI::App* sub, const Overrides& overrides) {
    PipelineConfig config;
    if (auto* opt = sub->get_option_no_throw("--config"); opt && opt->count() > 0) {
        for (const auto& [key, value] : read_config_file(opt->as<std::string>())) config.set(key, value);
    }
    // Field flags depend on the final format; apply format first.
    if (auto it = overrides.find("format"); it != overrides.end()) config.set("format", it->second);
    for (const auto& [key, value] : overrides)
        if (key != "format") config.set(key, value);
    return config;
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<ReviewRecord> sampled_records(const PipelineConfig& config, IngestResult* full = nullptr) {
    IngestResult ingested = load_dataset(config);
    auto records = sample_first_users(ingested.records, config.sample_n);
    if (full) *full = std::move(ingested);
    return records;
}

int cmd_ingest(const PipelineConfig& config, bool write_profiles) {
    IngestResult full;
    const auto records = sampled_records(config, &full);
    nlohmann::json summary = {
        {"records", full.records.size()},
        {"users", distinct_users(full.records).size()},
        {"items", distinct_items(full.records).size()},
        {"rejected_ratings", full.rejected_ratings},
        {"dropped_empty", full.dropped_empty},
        {"sampled_records", records.size()},
        {"sampled_users", distinct_users(records).size()},
    };
    if (write_profiles) {
        fs::create_directories(config.out);
        nlohmann::json profiles = nlohmann::json::array();
        for (const auto& p : preference_profiles(records))
            profiles.push_back({{"user_id", p.user_id}, {"items", p.items}});
        report::write_json(config.out / "profiles.json", profiles);
    }
    print_json(summary);
    return 0;
}

int cmd_embed(const PipelineConfig& config) {
    const auto records = sampled_records(config);
    const auto emb = embed_records(config, records);
    fs::create_directories(config.out);
    save_vectors(emb, config.out / "embeddings.jsonl");
    print_json({{"instances", emb.size()}, {"dim", emb.dim()}});
    return 0;
}

int cmd_cluster(const PipelineConfig& config, int fixed_k) {
    config.validate();
    const auto records = sampled_records(config);
    const auto sim = cosine_similarity_matrix(embed_records(config, records));
    SilhouetteReport sil;
    if (fixed_k > 0) {
        sil.chosen_k = fixed_k;
    } else {
        sil = select_k(sim, config.k_range, config.seed);
    }
    const auto labels = spectral_cluster(sim, sil.chosen_k, config.seed);
    const auto assignment = assign_users(records, labels);
    fs::create_directories(config.out);
    report::write_text(config.out / "clusters.csv", report::instance_clusters_csv(records, labels));
    report::write_text(config.out / "users.csv", report::user_clusters_csv(assignment.user_labels));
    report::write_json(config.out / "silhouette.json", report::silhouette_json(sil));
    print_json(report::silhouette_json(sil));
    return 0;
}

int cmd_recommend(const PipelineConfig& config, const std::string& groups_path) {
    config.validate();
    const auto records = sampled_records(config);
    const auto user_labels = report::read_user_clusters(groups_path);
    const auto groups = groups_from_labels(user_labels, preference_profiles(records));
    const auto all_items = distinct_items(records);
    const ScoringParams params{config.a, config.c, config.budget};

    nlohmann::json out = nlohmann::json::array();
    for (const auto& group : groups) {
        const auto catalog = group_catalog(group, all_items);
        if (catalog.size() < params.k) continue;
        Group g = restrict_to_catalog(group, catalog);
        if (config.flexible)
            for (auto& m : g.members)
                if (m.items.size() > params.k) m.items.resize(params.k);
        for (Method method : config.methods)
            out.push_back(report::recommendation_json(group.group_id, params.k, recommend(method, g, catalog, params)));
    }
    fs::create_directories(config.out);
    report::write_json(config.out / "recommendations.json", out);
    report::write_text(config.out / "sweep.csv", sweep_csv(sweep(groups, all_items, config)));
    print_json(out);
    return 0;
}

int cmd_baseline(const PipelineConfig& config) {
    config.validate();
    const auto records = sampled_records(config);
    const auto dense = predict_ratings(build_utility_matrix(records), config.cf);
    const auto pc = cluster_users(dense, config.baseline_k, config.seed);
    fs::create_directories(config.out);
    report::write_text(config.out / "baseline_users.csv",
                       report::user_clusters_csv(pc.user_labels, "predict_and_cluster"));
    print_json({{"users", dense.users.size()}, {"items", dense.items.size()}, {"k", pc.n_clusters}});
    return 0;
}

int cmd_validate(const std::string& pred, const std::string& truth, const std::vector<long long>& counts,
                 bool legacy_recall) {
    ContingencyCounts c;
    if (!counts.empty()) {
        if (counts.size() != 4) throw ConfigError("--counts expects tp,fn,fp,tn");
        c = counts_from_pairs(counts[0], counts[1], counts[2], counts[3]);
    } else {
        if (pred.empty() || truth.empty()) throw ConfigError("validate needs --pred and --truth, or --counts");
        c = compare_partitions(report::read_user_clusters(pred), report::read_user_clusters(truth));
    }
    print_json(report::metrics_json(c, legacy_recall));
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& out) {
    const auto metrics =
        report::metrics_json(compare_partitions(report::read_user_clusters(a), report::read_user_clusters(b)));
    if (!out.empty()) report::write_json(out, metrics);
    print_json(metrics);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Auto-detect user groups from review-text similarity and recommend to them"};
    app.require_subcommand(1);

    Overrides ingest_o, embed_o, cluster_o, recommend_o, baseline_o, run_o;

    auto* ingest = app.add_subcommand("ingest", "parse a dataset and summarize it");
    add_dataset_flags(ingest, ingest_o);
    bool write_profiles = false;
    ingest->add_flag("--profiles", write_profiles, "write profiles.json to --out");

    auto* embed = app.add_subcommand("embed", "embed review texts to a vectors file");
    add_dataset_flags(embed, embed_o);
    add_embedding_flags(embed, embed_o);

    auto* cluster = app.add_subcommand("cluster", "spectral clustering with silhouette model selection");
    add_dataset_flags(cluster, cluster_o);
    add_embedding_flags(cluster, cluster_o);
    add_cluster_flags(cluster, cluster_o);
    int fixed_k = 0;
    cluster->add_option("--k", fixed_k, "use this cluster count instead of selecting one");

    auto* recommend_cmd = app.add_subcommand("recommend", "consensus recommendations for given groups");
    add_dataset_flags(recommend_cmd, recommend_o);
    add_scoring_flags(recommend_cmd, recommend_o);
    std::string groups_path;
    recommend_cmd->add_option("--groups", groups_path, "user_id,cluster table")->required();

    auto* baseline = app.add_subcommand("baseline", "Predict & Cluster baseline grouping");
    add_dataset_flags(baseline, baseline_o);
    add_baseline_flags(baseline, baseline_o);
    add_flag(baseline, baseline_o, "--seed", "seed", "PRNG seed (default 0)");

    auto* run = app.add_subcommand("run", "full pipeline");
    add_dataset_flags(run, run_o);
    add_embedding_flags(run, run_o);
    add_cluster_flags(run, run_o);
    add_scoring_flags(run, run_o);
    add_baseline_flags(run, run_o);

    auto* validate = app.add_subcommand("validate", "pair-counting validation metrics");
    std::string pred, truth;
    std::vector<long long> counts;
    bool legacy_recall = false;
    validate->add_option("--pred", pred, "predicted user_id,cluster table");
    validate->add_option("--truth", truth, "reference user_id,cluster table");
    validate->add_option("--counts", counts, "tp,fn,fp,tn instead of tables")->delimiter(',');
    validate->add_flag("--legacy-recall", legacy_recall, "recall as a/(a+d)");

    auto* compare = app.add_subcommand("compare", "compare two user partitions");
    std::string part_a, part_b, compare_out;
    compare->add_option("--a", part_a, "first user_id,cluster table")->required();
    compare->add_option("--b", part_b, "second user_id,cluster table")->required();
    compare->add_option("--out", compare_out, "also write the metrics JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
    }

    try {
        if (*ingest) return cmd_ingest(build_config(ingest, ingest_o), write_profiles);
        if (*embed) return cmd_embed(build_config(embed, embed_o));
        if (*cluster) return cmd_cluster(build_config(cluster, cluster_o), fixed_k);
        if (*recommend_cmd) return cmd_recommend(build_config(recommend_cmd, recommend_o), groups_path);
        if (*baseline) return cmd_baseline(build_config(baseline, baseline_o));
        if (*validate) return cmd_validate(pred, truth, counts, legacy_recall);
        if (*compare) return cmd_compare(part_a, part_b, compare_out);
        if (*run) {
            const PipelineConfig config = build_config(run, run_o);
            const PipelineSummary summary = run_pipeline(config);
            nlohmann::json files = nlohmann::json::array();
            for (const auto& f : summary.files) files.push_back(f.filename().string());
            print_json({{"records", summary.records},
                        {"users", summary.users},
                        {"chosen_k", summary.chosen_k},
                        {"files", files}});
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kData);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kNumerical);
    }
    return static_cast<int>(ExitCode::kUsage);
}
