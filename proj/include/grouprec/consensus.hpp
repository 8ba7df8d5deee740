#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "grouprec/corpus.hpp"

namespace grouprec {

// Score base a, regularization c and group budget k.
struct ScoringParams {
    double a = 2.0;
    double c = 1.0;
    std::size_t k = 1;

    // Throws ConfigError unless a > 1, c > 0 and k >= 1.
    void validate() const;

    // Contribution of an item sitting at `pref_pos` in a user's list and at
    // `rec_pos` in the recommendation: a^(-|pref_pos - rec_pos| / c).
    double position_weight(std::size_t pref_pos, std::size_t rec_pos) const;
};

struct Group {
    int group_id = 0;
    std::vector<PreferenceProfile> members;
};

struct RecommendationVector {
    std::vector<std::string> items;
};

enum class Method { kLMM, kLMMP, kGRAM, kHAM };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct SatisfactionReport {
    std::map<std::string, double> per_user;
    double group_score = 0.0;  // mean of per_user / k
    Method method = Method::kGRAM;
};

struct Recommendation {
    RecommendationVector rec;
    SatisfactionReport report;
};

// Order-aware satisfaction of one user: sum over recommendation positions p of
// a^(-|q-p|/c) where q is the item's position in the profile; items missing
// from the profile add nothing.
double uso_score(const PreferenceProfile& profile, const RecommendationVector& rec,
                 const ScoringParams& params);

// W(p, t): summed position weight of catalog item t at recommendation
// position p over all members. Rows are positions 0..k-1.
// Throws std::invalid_argument if a preference item is missing from the
// catalog or the catalog has duplicates.
Eigen::MatrixXd position_score_matrix(const Group& group, const std::vector<std::string>& catalog,
                                      const ScoringParams& params);

// Least misery: each step serves the currently least satisfied member who
// still has unplaced items, placing the item from their list that adds the
// most group satisfaction at the next position.
Recommendation lmm(const Group& group, const std::vector<std::string>& catalog, const ScoringParams& params);

// Least misery with priority: equally unhappy members are ordered by how many
// of their items are already recommended (fewer first), then by user id.
Recommendation lmmp(const Group& group, const std::vector<std::string>& catalog, const ScoringParams& params);

// Greedy position-by-position argmax over W.
Recommendation gram(const Group& group, const std::vector<std::string>& catalog, const ScoringParams& params);

// Maximum-weight assignment of positions to items over W (Hungarian method).
Recommendation ham(const Group& group, const std::vector<std::string>& catalog, const ScoringParams& params);

Recommendation recommend(Method method, const Group& group, const std::vector<std::string>& catalog,
                         const ScoringParams& params);

SatisfactionReport evaluate(const Group& group, const RecommendationVector& rec, const ScoringParams& params,
                            Method method = Method::kGRAM);

// Sum of per-user scores (the unnormalized group satisfaction).
double total_satisfaction(const SatisfactionReport& report);

namespace detail {

struct MemberState {
    double satisfaction = 0.0;
    std::size_t included = 0;  // preference items already in the recommendation
    std::string user_id;
};

// Index of the least satisfied member among `eligible`. Satisfaction values
// within 1e-12 count as equal; ties go to fewer included items when
// `use_priority`, then to the smaller user id.
std::size_t least_satisfied(const std::vector<MemberState>& members, const std::vector<std::size_t>& eligible,
                            bool use_priority);

// Column per position, greedy by row order; ties to the lower column.
std::vector<std::size_t> greedy_assignment(const Eigen::MatrixXd& weights);

// Column per row maximizing the total weight, rows <= cols. Among optimal
// assignments returns the lexicographically smallest column sequence.
std::vector<std::size_t> optimal_assignment(const Eigen::MatrixXd& weights);

double assignment_total(const Eigen::MatrixXd& weights, const std::vector<std::size_t>& cols);

}  // namespace detail

}  // namespace grouprec
