#include "grouprec/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "grouprec/error.hpp"
#include "grouprec/kmeans.hpp"

namespace grouprec {

std::map<int, std::vector<std::string>> ClusterAssignment::groups() const {
    std::map<int, std::vector<std::string>> out;
    for (const auto& [user, label] : user_labels) out[label].push_back(user);
    return out;
}

std::vector<int> spectral_cluster(const SimilarityMatrix& sim, int k, std::uint64_t seed) {
    const Eigen::Index m = sim.size();
    if (sim.values.cols() != m) throw std::invalid_argument("spectral_cluster: similarity matrix is not square");
    if (k < 2) throw std::invalid_argument("spectral_cluster: k must be >= 2");
    if (k > m) throw std::invalid_argument("spectral_cluster: k exceeds the number of instances");
    if (!sim.values.allFinite()) throw std::invalid_argument("spectral_cluster: non-finite similarity");
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j)
            if (std::abs(sim.values(i, j) - sim.values(j, i)) > 1e-12)
                throw std::invalid_argument("spectral_cluster: similarity matrix is not symmetric");

    const Eigen::MatrixXd affinity = sim.values.cwiseMax(0.0);
    const Eigen::VectorXd degree = affinity.rowwise().sum();
    Eigen::VectorXd inv_sqrt(m);
    for (Eigen::Index i = 0; i < m; ++i) inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;

    Eigen::MatrixXd laplacian = -(inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal());
    laplacian.diagonal().array() += 1.0;
    // Symmetrize away rounding from the diagonal scaling.
    laplacian = 0.5 * (laplacian + laplacian.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    if (solver.info() != Eigen::Success) throw NumericalError("spectral_cluster: eigendecomposition failed");

    // Eigenvalues come back ascending.
    Eigen::MatrixXd embedding = solver.eigenvectors().leftCols(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        for (Eigen::Index i = 0; i < m; ++i) {
            if (std::abs(embedding(i, c)) > 1e-12) {
                if (embedding(i, c) < 0.0) embedding.col(c) *= -1.0;
                break;
            }
        }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) embedding.row(i) /= norm;
    }
    if (!embedding.allFinite()) throw NumericalError("spectral_cluster: non-finite spectral embedding");

    KMeansOptions options;
    options.n_init = 10;
    return kmeans_fit(embedding, k, seed, options).labels;
}

double silhouette_mean(const Eigen::MatrixXd& dist, const std::vector<int>& labels) {
    const auto m = static_cast<Eigen::Index>(labels.size());
    if (dist.rows() != m || dist.cols() != m) throw std::invalid_argument("silhouette_mean: size mismatch");

    std::map<int, std::vector<Eigen::Index>> members;
    for (Eigen::Index i = 0; i < m; ++i) members[labels[static_cast<std::size_t>(i)]].push_back(i);
    if (members.size() < 2) throw std::invalid_argument("silhouette_mean: need at least 2 clusters");

    double sum = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const int own = labels[static_cast<std::size_t>(i)];
        const auto& own_members = members[own];
        if (own_members.size() < 2) continue;  // singleton contributes 0

        double within = 0.0;
        for (Eigen::Index j : own_members)
            if (j != i) within += dist(i, j);
        within /= static_cast<double>(own_members.size() - 1);

        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& [label, idx] : members) {
            if (label == own) continue;
            double total = 0.0;
            for (Eigen::Index j : idx) total += dist(i, j);
            nearest = std::min(nearest, total / static_cast<double>(idx.size()));
        }
        const double denom = std::max(within, nearest);
        if (denom > 0.0) sum += (nearest - within) / denom;
    }
    return sum / static_cast<double>(m);
}

Eigen::MatrixXd cosine_distance(const SimilarityMatrix& sim) {
    Eigen::MatrixXd dist = (1.0 - sim.values.array()).matrix();
    dist.diagonal().setZero();
    return dist;
}

SilhouetteReport select_k(const SimilarityMatrix& sim, KRange range, std::uint64_t seed) {
    const auto m = static_cast<int>(sim.size());
    if (range.lo > range.hi) throw std::invalid_argument("select_k: empty k range");
    if (range.lo < 2 || range.hi > m - 1)
        throw std::invalid_argument("select_k: k range must lie within [2, " + std::to_string(m - 1) + "]");

    const Eigen::MatrixXd dist = cosine_distance(sim);
    SilhouetteReport report;
    double best = -std::numeric_limits<double>::infinity();
    for (int k = range.lo; k <= range.hi; ++k) {
        const auto labels = spectral_cluster(sim, k, seed);
        const bool split = std::adjacent_find(labels.begin(), labels.end(), std::not_equal_to<>()) != labels.end();
        const double score = split ? silhouette_mean(dist, labels) : -1.0;
        report.per_k[k] = score;
        if (score > best) {
            best = score;
            report.chosen_k = k;
        }
    }
    return report;
}

ClusterAssignment assign_users(const std::vector<ReviewRecord>& records, const std::vector<int>& instance_labels) {
    if (records.size() != instance_labels.size())
        throw std::invalid_argument("assign_users: labels and records differ in length");

    std::map<std::string, std::map<int, int>> votes;
    ClusterAssignment out;
    out.instance_labels = instance_labels;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const int label = instance_labels[i];
        if (label < 0) throw std::invalid_argument("assign_users: negative cluster label");
        ++votes[records[i].user_id][label];
        out.n_clusters = std::max(out.n_clusters, label + 1);
    }
    for (const auto& [user, tally] : votes) {
        // std::map iterates labels ascending, so the first maximum is the smallest id.
        int best_label = tally.begin()->first;
        int best_count = 0;
        for (const auto& [label, count] : tally) {
            if (count > best_count) {
                best_count = count;
                best_label = label;
            }
        }
        out.user_labels[user] = best_label;
    }
    return out;
}

}  // namespace grouprec
