#include "grouprec/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grouprec/error.hpp"
#include "grouprec/kmeans.hpp"

namespace grouprec {
namespace {

struct Neighbor {
    std::size_t user;
    double sim;
};

// Ratings per user as (item, rating) pairs sorted by item.
std::vector<std::vector<std::pair<std::size_t, int>>> rows_of(const UtilityMatrix& um) {
    std::vector<std::vector<std::pair<std::size_t, int>>> rows(um.num_users());
    for (const auto& [cell, r] : um.entries()) rows[cell.first].emplace_back(cell.second, r);
    return rows;
}

double pearson(const std::vector<std::pair<std::size_t, int>>& x, const std::vector<std::pair<std::size_t, int>>& y,
               int min_overlap) {
    std::vector<std::pair<double, double>> common;
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (i->first < j->first) ++i;
        else if (j->first < i->first) ++j;
        else {
            common.emplace_back(i->second, j->second);
            ++i;
            ++j;
        }
    }
    if (common.size() < static_cast<std::size_t>(std::max(min_overlap, 1))) return 0.0;

    double mx = 0.0, my = 0.0;
    for (const auto& [a, b] : common) {
        mx += a;
        my += b;
    }
    mx /= static_cast<double>(common.size());
    my /= static_cast<double>(common.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& [a, b] : common) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double pearson_similarity(const UtilityMatrix& um, std::size_t u, std::size_t v, int min_overlap) {
    const auto rows = rows_of(um);
    return pearson(rows.at(u), rows.at(v), min_overlap);
}

DenseRatingMatrix predict_ratings(const UtilityMatrix& um, const CfOptions& options) {
    if (um.empty()) throw DataError("predict_ratings: the utility matrix has no ratings");
    if (options.neighbors < 1 || options.min_overlap < 1)
        throw ConfigError("predict_ratings: neighbors and min_overlap must be >= 1");

    const auto n_users = static_cast<Eigen::Index>(um.num_users());
    const auto n_items = static_cast<Eigen::Index>(um.num_items());
    const auto rows = rows_of(um);

    DenseRatingMatrix out;
    out.users = um.users();
    out.items = um.items();
    out.values = Eigen::MatrixXd::Zero(n_users, n_items);
    out.observed = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n_users, n_items, false);

    double global = 0.0;
    for (const auto& [_, r] : um.entries()) global += r;
    global /= static_cast<double>(um.num_entries());

    std::vector<double> mean(static_cast<std::size_t>(n_users), global);
    for (Eigen::Index u = 0; u < n_users; ++u) {
        const auto& row = rows[static_cast<std::size_t>(u)];
        if (row.empty()) continue;
        double s = 0.0;
        for (const auto& [_, r] : row) s += r;
        mean[static_cast<std::size_t>(u)] = s / static_cast<double>(row.size());
    }

    // Similarities are symmetric; fill the upper triangle once.
    Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(n_users, n_users);
    for (Eigen::Index u = 0; u < n_users; ++u)
        for (Eigen::Index v = u + 1; v < n_users; ++v)
            sim(u, v) = sim(v, u) =
                pearson(rows[static_cast<std::size_t>(u)], rows[static_cast<std::size_t>(v)], options.min_overlap);

    // Raters per item, ascending user index.
    std::vector<std::vector<std::size_t>> raters(static_cast<std::size_t>(n_items));
    for (const auto& [cell, r] : um.entries()) {
        raters[cell.second].push_back(cell.first);
        out.values(static_cast<Eigen::Index>(cell.first), static_cast<Eigen::Index>(cell.second)) = r;
        out.observed(static_cast<Eigen::Index>(cell.first), static_cast<Eigen::Index>(cell.second)) = true;
    }
    for (auto& list : raters) std::sort(list.begin(), list.end());

    for (Eigen::Index u = 0; u < n_users; ++u) {
        const auto uu = static_cast<std::size_t>(u);
        for (Eigen::Index i = 0; i < n_items; ++i) {
            if (out.observed(u, i)) continue;
            std::vector<Neighbor> pool;
            for (std::size_t v : raters[static_cast<std::size_t>(i)]) {
                if (v == uu) continue;
                const double s = sim(u, static_cast<Eigen::Index>(v));
                if (s != 0.0) pool.push_back({v, s});
            }
            std::stable_sort(pool.begin(), pool.end(),
                             [](const Neighbor& x, const Neighbor& y) { return std::abs(x.sim) > std::abs(y.sim); });
            if (pool.size() > static_cast<std::size_t>(options.neighbors))
                pool.resize(static_cast<std::size_t>(options.neighbors));

            double num = 0.0, den = 0.0;
            for (const auto& nb : pool) {
                const double r_vi = *um.rating(nb.user, static_cast<std::size_t>(i));
                num += nb.sim * (r_vi - mean[nb.user]);
                den += std::abs(nb.sim);
            }
            const double predicted = den > 0.0 ? mean[uu] + num / den : mean[uu];
            out.values(u, i) = std::clamp(predicted, 1.0, 5.0);
        }
    }
    return out;
}

ClusterAssignment cluster_users(const DenseRatingMatrix& m, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("cluster_users: k must be >= 1");
    if (static_cast<std::size_t>(k) > m.users.size())
        throw std::invalid_argument("cluster_users: k exceeds the number of users");

    ClusterAssignment out;
    out.instance_labels = kmeans(m.values, k, seed);
    out.n_clusters = k;
    for (std::size_t u = 0; u < m.users.size(); ++u) out.user_labels[m.users[u]] = out.instance_labels[u];
    return out;
}

}  // namespace grouprec
