// Position -> item assignment solvers behind GRAM and HAM.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "grouprec/consensus.hpp"

namespace grouprec::detail {
namespace {

// Kuhn-Munkres with potentials, O(rows^2 * cols), rows <= cols. Minimizes
// the summed cost; returns the column of each row.
std::vector<std::size_t> hungarian_min(const Eigen::MatrixXd& cost) {
    const auto n = static_cast<std::size_t>(cost.rows());
    const auto m = static_cast<std::size_t>(cost.cols());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // 1-based; index 0 is the virtual source row/column.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= m; ++j)
        if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

double best_total(const Eigen::MatrixXd& weights) {
    if (weights.rows() == 0) return 0.0;
    return assignment_total(weights, hungarian_min(-weights));
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& w, Eigen::Index first_row, const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd out(w.rows() - first_row, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        out.col(static_cast<Eigen::Index>(c)) = w.col(static_cast<Eigen::Index>(cols[c])).tail(w.rows() - first_row);
    return out;
}

}  // namespace

double assignment_total(const Eigen::MatrixXd& weights, const std::vector<std::size_t>& cols) {
    double total = 0.0;
    for (std::size_t p = 0; p < cols.size(); ++p)
        total += weights(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(cols[p]));
    return total;
}

std::vector<std::size_t> greedy_assignment(const Eigen::MatrixXd& weights) {
    if (weights.rows() > weights.cols()) throw std::invalid_argument("greedy_assignment: more rows than columns");
    std::vector<char> used(static_cast<std::size_t>(weights.cols()), 0);
    std::vector<std::size_t> out;
    for (Eigen::Index p = 0; p < weights.rows(); ++p) {
        Eigen::Index best = -1;
        for (Eigen::Index t = 0; t < weights.cols(); ++t) {
            if (used[static_cast<std::size_t>(t)]) continue;
            if (best < 0 || weights(p, t) > weights(p, best)) best = t;
        }
        used[static_cast<std::size_t>(best)] = 1;
        out.push_back(static_cast<std::size_t>(best));
    }
    return out;
}

std::vector<std::size_t> optimal_assignment(const Eigen::MatrixXd& weights) {
    const Eigen::Index rows = weights.rows();
    if (rows > weights.cols()) throw std::invalid_argument("optimal_assignment: more rows than columns");
    if (!weights.allFinite()) throw std::invalid_argument("optimal_assignment: non-finite weights");
    if (rows == 0) return {};

    // All-zero columns are interchangeable; only the first `rows` of them can
    // appear in the lexicographically smallest optimum.
    std::vector<std::size_t> candidates;
    Eigen::Index zero_kept = 0;
    for (Eigen::Index t = 0; t < weights.cols(); ++t) {
        if (weights.col(t).isZero(0.0)) {
            if (zero_kept >= rows) continue;
            ++zero_kept;
        }
        candidates.push_back(static_cast<std::size_t>(t));
    }

    const Eigen::MatrixXd reduced = select_columns(weights, 0, candidates);
    const double optimum = best_total(reduced);
    const double eps = 1e-9 * std::max(1.0, std::abs(optimum));

    // Fix positions one at a time to the smallest column that still admits an
    // optimal completion.
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> remaining(candidates.size());
    for (std::size_t c = 0; c < remaining.size(); ++c) remaining[c] = c;
    const Eigen::VectorXd row_max = reduced.rowwise().maxCoeff();
    double fixed = 0.0;
    for (Eigen::Index p = 0; p < rows; ++p) {
        // Cheap upper bound on what the later positions can still add.
        const double tail_bound = row_max.tail(rows - p - 1).sum();
        bool placed = false;
        for (std::size_t r = 0; r < remaining.size() && !placed; ++r) {
            const std::size_t col = remaining[r];
            if (fixed + reduced(p, static_cast<Eigen::Index>(col)) + tail_bound < optimum - eps) continue;
            std::vector<std::size_t> rest = remaining;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(r));
            const double tail = p + 1 < rows ? best_total(select_columns(reduced, p + 1, rest)) : 0.0;
            if (fixed + reduced(p, static_cast<Eigen::Index>(col)) + tail >= optimum - eps) {
                fixed += reduced(p, static_cast<Eigen::Index>(col));
                chosen.push_back(candidates[col]);
                remaining = std::move(rest);
                placed = true;
            }
        }
        if (!placed) throw std::logic_error("optimal_assignment: no optimal completion found");
    }
    return chosen;
}

}  // namespace grouprec::detail
