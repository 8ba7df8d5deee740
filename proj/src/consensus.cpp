#include "grouprec/consensus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "grouprec/error.hpp"

namespace grouprec {

void ScoringParams::validate() const {
    if (!(a > 1.0) || !std::isfinite(a)) throw ConfigError("scoring: a must be a finite value > 1");
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("scoring: c must be a finite value > 0");
    if (k < 1) throw ConfigError("scoring: group budget k must be >= 1");
}

double ScoringParams::position_weight(std::size_t pref_pos, std::size_t rec_pos) const {
    const double gap = pref_pos > rec_pos ? static_cast<double>(pref_pos - rec_pos)
                                          : static_cast<double>(rec_pos - pref_pos);
    return std::pow(a, -gap / c);
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::kLMM: return "LMM";
        case Method::kLMMP: return "LMMP";
        case Method::kGRAM: return "GRAM";
        case Method::kHAM: return "HAM";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
    for (Method m : {Method::kLMM, Method::kLMMP, Method::kGRAM, Method::kHAM})
        if (method_name(m) == upper) return m;
    return std::nullopt;
}

namespace {

using PositionIndex = std::unordered_map<std::string, std::size_t>;

PositionIndex positions_of(const std::vector<std::string>& items) {
    PositionIndex index;
    for (std::size_t q = 0; q < items.size(); ++q) index.try_emplace(items[q], q);
    return index;
}

void check_group(const Group& group) {
    if (group.members.empty()) throw std::invalid_argument("group has no members");
    std::set<std::string> ids;
    for (const auto& member : group.members)
        if (!ids.insert(member.user_id).second)
            throw std::invalid_argument("group has duplicate member '" + member.user_id + "'");
}

PositionIndex catalog_index(const std::vector<std::string>& catalog) {
    PositionIndex index;
    for (std::size_t t = 0; t < catalog.size(); ++t)
        if (!index.try_emplace(catalog[t], t).second)
            throw std::invalid_argument("catalog has duplicate item '" + catalog[t] + "'");
    return index;
}

void check_budget(const std::vector<std::string>& catalog, const ScoringParams& params) {
    params.validate();
    if (catalog.size() < params.k)
        throw std::invalid_argument("catalog has " + std::to_string(catalog.size()) + " items, budget k is " +
                                    std::to_string(params.k));
}

RecommendationVector from_columns(const std::vector<std::string>& catalog, const std::vector<std::size_t>& cols) {
    RecommendationVector rec;
    for (std::size_t col : cols) rec.items.push_back(catalog[col]);
    return rec;
}

Recommendation least_misery(const Group& group, const std::vector<std::string>& catalog,
                            const ScoringParams& params, bool use_priority) {
    check_budget(catalog, params);
    const Eigen::MatrixXd weights = position_score_matrix(group, catalog, params);
    const PositionIndex columns = catalog_index(catalog);

    std::vector<PositionIndex> pref_pos;
    std::vector<detail::MemberState> states;
    for (const auto& member : group.members) {
        pref_pos.push_back(positions_of(member.items));
        states.push_back({0.0, 0, member.user_id});
    }

    std::vector<char> used(catalog.size(), 0);
    std::vector<std::size_t> chosen;
    for (std::size_t p = 0; p < params.k; ++p) {
        std::vector<std::size_t> eligible;
        for (std::size_t u = 0; u < group.members.size(); ++u) {
            const auto& items = group.members[u].items;
            if (std::any_of(items.begin(), items.end(), [&](const std::string& t) { return !used[columns.at(t)]; }))
                eligible.push_back(u);
        }

        std::size_t pick = catalog.size();
        if (eligible.empty()) {
            for (std::size_t t = 0; t < catalog.size(); ++t) {
                if (!used[t]) {
                    pick = t;
                    break;
                }
            }
        } else {
            const std::size_t target = detail::least_satisfied(states, eligible, use_priority);
            double best = -1.0;
            for (const auto& item : group.members[target].items) {
                const std::size_t col = columns.at(item);
                if (used[col]) continue;
                const double gain = weights(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(col));
                if (gain > best) {
                    best = gain;
                    pick = col;
                }
            }
        }

        used[pick] = 1;
        chosen.push_back(pick);
        for (std::size_t u = 0; u < states.size(); ++u) {
            auto it = pref_pos[u].find(catalog[pick]);
            if (it == pref_pos[u].end()) continue;
            states[u].satisfaction += params.position_weight(it->second, p);
            ++states[u].included;
        }
    }

    Recommendation out;
    out.rec = from_columns(catalog, chosen);
    out.report = evaluate(group, out.rec, params, use_priority ? Method::kLMMP : Method::kLMM);
    return out;
}

}  // namespace

double uso_score(const PreferenceProfile& profile, const RecommendationVector& rec, const ScoringParams& params) {
    const PositionIndex pos = positions_of(profile.items);
    double score = 0.0;
    for (std::size_t p = 0; p < rec.items.size(); ++p) {
        auto it = pos.find(rec.items[p]);
        if (it != pos.end()) score += params.position_weight(it->second, p);
    }
    return score;
}

Eigen::MatrixXd position_score_matrix(const Group& group, const std::vector<std::string>& catalog,
                                      const ScoringParams& params) {
    params.validate();
    const PositionIndex columns = catalog_index(catalog);
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(params.k),
                                                    static_cast<Eigen::Index>(catalog.size()));
    for (const auto& member : group.members) {
        for (const auto& [item, q] : positions_of(member.items)) {
            auto col = columns.find(item);
            if (col == columns.end())
                throw std::invalid_argument("preference item '" + item + "' of user '" + member.user_id +
                                            "' is not in the catalog");
            for (std::size_t p = 0; p < params.k; ++p)
                weights(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(col->second)) +=
                    params.position_weight(q, p);
        }
    }
    return weights;
}

Recommendation lmm(const Group& group, const std::vector<std::string>& catalog, const ScoringParams& params) {
    check_group(group);
    return least_misery(group, catalog, params, false);
}

Recommendation lmmp(const Group& group, const std::vector<std::string>& catalog, const ScoringParams& params) {
    check_group(group);
    return least_misery(group, catalog, params, true);
}

Recommendation gram(const Group& group, const std::vector<std::string>& catalog, const ScoringParams& params) {
    check_group(group);
    check_budget(catalog, params);
    const auto cols = detail::greedy_assignment(position_score_matrix(group, catalog, params));
    Recommendation out;
    out.rec = from_columns(catalog, cols);
    out.report = evaluate(group, out.rec, params, Method::kGRAM);
    return out;
}

Recommendation ham(const Group& group, const std::vector<std::string>& catalog, const ScoringParams& params) {
    check_group(group);
    check_budget(catalog, params);
    const auto cols = detail::optimal_assignment(position_score_matrix(group, catalog, params));
    Recommendation out;
    out.rec = from_columns(catalog, cols);
    out.report = evaluate(group, out.rec, params, Method::kHAM);
    return out;
}

Recommendation recommend(Method method, const Group& group, const std::vector<std::string>& catalog,
                         const ScoringParams& params) {
    switch (method) {
        case Method::kLMM: return lmm(group, catalog, params);
        case Method::kLMMP: return lmmp(group, catalog, params);
        case Method::kGRAM: return gram(group, catalog, params);
        case Method::kHAM: return ham(group, catalog, params);
    }
    throw std::invalid_argument("unknown consensus method");
}

SatisfactionReport evaluate(const Group& group, const RecommendationVector& rec, const ScoringParams& params,
                            Method method) {
    check_group(group);
    params.validate();
    if (rec.items.size() != params.k)
        throw std::invalid_argument("recommendation length " + std::to_string(rec.items.size()) +
                                    " differs from budget k = " + std::to_string(params.k));
    SatisfactionReport report;
    report.method = method;
    double sum = 0.0;
    for (const auto& member : group.members) {
        const double s = uso_score(member, rec, params);
        report.per_user[member.user_id] = s;
        sum += s;
    }
    report.group_score = sum / static_cast<double>(group.members.size()) / static_cast<double>(params.k);
    return report;
}

double total_satisfaction(const SatisfactionReport& report) {
    double sum = 0.0;
    for (const auto& [_, s] : report.per_user) sum += s;
    return sum;
}

namespace detail {

std::size_t least_satisfied(const std::vector<MemberState>& members, const std::vector<std::size_t>& eligible,
                            bool use_priority) {
    if (eligible.empty()) throw std::invalid_argument("least_satisfied: no eligible members");
    constexpr double kTie = 1e-12;
    std::size_t best = eligible.front();
    for (std::size_t idx : eligible) {
        const MemberState& cand = members[idx];
        const MemberState& cur = members[best];
        if (cand.satisfaction < cur.satisfaction - kTie) {
            best = idx;
            continue;
        }
        if (cand.satisfaction > cur.satisfaction + kTie) continue;
        if (use_priority && cand.included != cur.included) {
            if (cand.included < cur.included) best = idx;
            continue;
        }
        if (cand.user_id < cur.user_id) best = idx;
    }
    return best;
}

}  // namespace detail

}  // namespace grouprec
