#pragma once
// Independent reference implementations used only by tests. None of these
// call into the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace oracle {

struct PairCounts {
    std::int64_t tp = 0, fn = 0, fp = 0, tn = 0;
};

// Enumerates every unordered pair.
inline PairCounts pair_counts(const std::vector<int>& pred, const std::vector<int>& truth) {
    PairCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        for (std::size_t j = i + 1; j < pred.size(); ++j) {
            const bool same_cluster = pred[i] == pred[j];
            const bool same_class = truth[i] == truth[j];
            if (same_cluster && same_class) ++c.tp;
            else if (same_cluster) ++c.fp;
            else if (same_class) ++c.fn;
            else ++c.tn;
        }
    }
    return c;
}

// ARI = (RI - E[RI]) / (max RI - E[RI]) with every quantity in Rand-index
// units; E[tp] = (tp+fp)(tp+fn)/N and E[tn] follows from the fixed margins.
inline double ari_via_rand_index(const std::vector<int>& pred, const std::vector<int>& truth) {
    const PairCounts c = pair_counts(pred, truth);
    const double n_pairs = static_cast<double>(c.tp + c.fn + c.fp + c.tn);
    const double same_cluster = static_cast<double>(c.tp + c.fp);
    const double same_class = static_cast<double>(c.tp + c.fn);
    const double ri = static_cast<double>(c.tp + c.tn) / n_pairs;
    const double e_tp = same_cluster * same_class / n_pairs;
    const double e_tn = n_pairs - same_cluster - same_class + e_tp;
    const double expected_ri = (e_tp + e_tn) / n_pairs;
    const double max_tp = 0.5 * (same_cluster + same_class);
    const double max_tn = n_pairs - same_cluster - same_class + max_tp;
    const double max_ri = (max_tp + max_tn) / n_pairs;
    if (max_ri == expected_ri) return ri == expected_ri ? 1.0 : 0.0;
    return (ri - expected_ri) / (max_ri - expected_ri);
}

// Direct per-point evaluation of s = (y - x) / max(x, y).
inline double silhouette(const std::vector<std::vector<double>>& dist, const std::vector<int>& labels) {
    const std::size_t n = labels.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x_sum = 0.0;
        int x_count = 0;
        std::map<int, std::pair<double, int>> other;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (labels[j] == labels[i]) {
                x_sum += dist[i][j];
                ++x_count;
            } else {
                other[labels[j]].first += dist[i][j];
                other[labels[j]].second += 1;
            }
        }
        if (x_count == 0) continue;  // singleton
        const double x = x_sum / x_count;
        double y = std::numeric_limits<double>::infinity();
        for (const auto& [_, acc] : other) y = std::min(y, acc.first / acc.second);
        const double m = std::max(x, y);
        total += m > 0 ? (y - x) / m : 0.0;
    }
    return total / static_cast<double>(n);
}

// Maximum over all injective row -> column maps.
inline double best_assignment(const std::vector<std::vector<double>>& w) {
    const std::size_t rows = w.size();
    const std::size_t cols = rows ? w[0].size() : 0;
    std::vector<std::size_t> pick(rows);
    std::vector<char> used(cols, 0);
    double best = -std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, double)> rec = [&](std::size_t r, double acc) {
        if (r == rows) {
            best = std::max(best, acc);
            return;
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (used[c]) continue;
            used[c] = 1;
            rec(r + 1, acc + w[r][c]);
            used[c] = 0;
        }
    };
    rec(0, 0.0);
    return best;
}

// Connected components of the graph with an edge wherever sim > 0.
inline std::vector<int> components(const std::vector<std::vector<double>>& sim) {
    const std::size_t n = sim.size();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = next;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (comp[v] < 0 && sim[u][v] > 0.0) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

// True when the two labelings induce the same partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    return true;
}

// Exhaustive 2-partition minimizing within-cluster sum of squares.
inline std::vector<int> best_two_partition(const std::vector<std::vector<double>>& pts) {
    const std::size_t n = pts.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_labels;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
        if (mask & 1) continue;  // fix point 0 in cluster 0
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = (mask >> i) & 1;
        double wcss = 0.0;
        for (int c = 0; c < 2; ++c) {
            std::vector<double> mean(pts[0].size(), 0.0);
            int count = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (labels[i] == c) {
                    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += pts[i][d];
                    ++count;
                }
            for (auto& m : mean) m /= count;
            for (std::size_t i = 0; i < n; ++i)
                if (labels[i] == c)
                    for (std::size_t d = 0; d < mean.size(); ++d) wcss += (pts[i][d] - mean[d]) * (pts[i][d] - mean[d]);
        }
        if (wcss < best) {
            best = wcss;
            best_labels = labels;
        }
    }
    return best_labels;
}

// sum over positions p of sum over users of a^(-|q-p|/c), written as a
// plain double loop over users, positions and preference slots.
inline std::vector<std::vector<double>> position_scores(const std::vector<std::vector<std::string>>& prefs,
                                                        const std::vector<std::string>& catalog, std::size_t k,
                                                        double a, double c) {
    std::vector<std::vector<double>> w(k, std::vector<double>(catalog.size(), 0.0));
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t t = 0; t < catalog.size(); ++t)
            for (const auto& pref : prefs)
                for (std::size_t q = 0; q < pref.size(); ++q)
                    if (pref[q] == catalog[t])
                        w[p][t] += std::pow(a, -std::fabs(static_cast<double>(q) - static_cast<double>(p)) / c);
    return w;
}

}  // namespace oracle
