#include "grouprec/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "grouprec/csv.hpp"
#include "grouprec/error.hpp"

namespace grouprec::report {

double fixed6(double x) {
    const double r = std::round(x * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
    if (!out) throw DataError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2)); }

nlohmann::json metrics_json(const ContingencyCounts& c, bool legacy_recall) {
    const PairScores s = precision_recall_f(c, legacy_recall);
    return {
        {"tp", c.tp},
        {"fn", c.fn},
        {"fp", c.fp},
        {"tn", c.tn},
        {"rand_index", fixed6(rand_index(c))},
        {"ari", fixed6(adjusted_rand_index(c))},
        {"precision", fixed6(s.precision)},
        {"recall", fixed6(s.recall)},
        {"f_measure", fixed6(s.f_measure)},
    };
}

nlohmann::json silhouette_json(const SilhouetteReport& r) {
    nlohmann::json per_k = nlohmann::json::object();
    for (const auto& [k, s] : r.per_k) per_k[std::to_string(k)] = fixed6(s);
    return {{"per_k", per_k}, {"chosen_k", r.chosen_k}};
}

nlohmann::json recommendation_json(int group_id, std::size_t k, const Recommendation& r) {
    nlohmann::json per_user = nlohmann::json::object();
    for (const auto& [user, s] : r.report.per_user) per_user[user] = fixed6(s);
    return {
        {"group_id", group_id},
        {"method", std::string(method_name(r.report.method))},
        {"k", k},
        {"items", r.rec.items},
        {"per_user", per_user},
        {"group_score", fixed6(r.report.group_score)},
    };
}

std::string instance_clusters_csv(const std::vector<ReviewRecord>& records, const std::vector<int>& labels) {
    std::string out = "instance_id,user_id,cluster\n";
    for (std::size_t i = 0; i < records.size(); ++i)
        out += csv::format_row({std::to_string(records[i].seq), records[i].user_id, std::to_string(labels.at(i))}) + "\n";
    return out;
}

std::string user_clusters_csv(const std::map<std::string, int>& user_labels, const std::string& method) {
    std::string out = method.empty() ? "user_id,cluster\n" : "user_id,cluster,method\n";
    for (const auto& [user, label] : user_labels) {
        csv::Row row{user, std::to_string(label)};
        if (!method.empty()) row.push_back(method);
        out += csv::format_row(row) + "\n";
    }
    return out;
}

std::map<std::string, int> read_user_clusters(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw DataError(path.string() + ": empty cluster table");
    const auto& header = rows.front();
    auto find = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw DataError(path.string() + ": missing column '" + name + "'");
    };
    const std::size_t user_col = find("user_id");
    const std::size_t cluster_col = find("cluster");
    std::map<std::string, int> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() <= std::max(user_col, cluster_col))
            throw DataError(path.string() + ":" + std::to_string(r + 1) + ": too few columns");
        try {
            std::size_t used = 0;
            const int label = std::stoi(row[cluster_col], &used);
            if (used != row[cluster_col].size()) throw std::invalid_argument("trailing");
            if (!out.emplace(row[user_col], label).second)
                throw DataError(path.string() + ": duplicate user '" + row[user_col] + "'");
        } catch (const std::logic_error&) {
            throw DataError(path.string() + ":" + std::to_string(r + 1) + ": bad cluster id '" + row[cluster_col] + "'");
        }
    }
    return out;
}

}  // namespace grouprec::report
