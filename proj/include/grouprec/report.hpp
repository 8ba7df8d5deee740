#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "grouprec/clustering.hpp"
#include "grouprec/consensus.hpp"
#include "grouprec/corpus.hpp"
#include "grouprec/validation.hpp"

namespace grouprec::report {

// Rounds to 6 decimal places; -0 becomes 0.
double fixed6(double x);

// Text written to a file ends with a newline; JSON is indented by 2.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json metrics_json(const ContingencyCounts& c, bool legacy_recall = false);
nlohmann::json silhouette_json(const SilhouetteReport& r);
nlohmann::json recommendation_json(int group_id, std::size_t k, const Recommendation& r);

// instance_id,user_id,cluster
std::string instance_clusters_csv(const std::vector<ReviewRecord>& records, const std::vector<int>& labels);
// user_id,cluster[,method]
std::string user_clusters_csv(const std::map<std::string, int>& user_labels, const std::string& method = {});

// Reads a user_id,cluster table (extra columns ignored).
std::map<std::string, int> read_user_clusters(const std::filesystem::path& path);

}  // namespace grouprec::report
