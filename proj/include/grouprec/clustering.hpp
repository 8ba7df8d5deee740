#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grouprec/corpus.hpp"
#include "grouprec/embedding.hpp"

namespace grouprec {

struct ClusterAssignment {
    std::vector<int> instance_labels;
    std::map<std::string, int> user_labels;
    int n_clusters = 0;

    // Members of each cluster id, user ids in sorted order.
    std::map<int, std::vector<std::string>> groups() const;
};

struct SilhouetteReport {
    std::map<int, double> per_k;
    int chosen_k = 0;
};

struct KRange {
    int lo = 2;
    int hi = 2;
};

// Normalized-Laplacian spectral clustering (Ng-Jordan-Weiss).
//
// Negative similarities are clipped to zero to form the affinity A. With
// D = diag(rowsum A), L = I - D^-1/2 A D^-1/2, where zero-degree rows use
// D^-1/2 = 0. The k eigenvectors of L with smallest eigenvalues form an
// m x k embedding; each eigenvector is flipped so its first nonzero entry is
// positive, each embedding row is scaled to unit length (zero rows stay
// zero), and k-means (10 seeded restarts) labels the rows.
//
// Throws std::invalid_argument when k < 2, k > m or the input is not
// symmetric, NumericalError if the eigensolver fails.
std::vector<int> spectral_cluster(const SimilarityMatrix& sim, int k, std::uint64_t seed);

// Mean silhouette over all samples with s_i = (y - x) / max(x, y): x is the
// mean distance to the other members of the sample's cluster, y the smallest
// mean distance to another nonempty cluster. Singleton clusters contribute
// s_i = 0, as do samples with max(x, y) = 0.
double silhouette_mean(const Eigen::MatrixXd& dist, const std::vector<int>& labels);

// distance = 1 - similarity with a zero diagonal.
Eigen::MatrixXd cosine_distance(const SimilarityMatrix& sim);

// Spectral clustering for each k in the range, scored by silhouette on
// cosine distance. The highest score wins, ties to the smaller k. A k whose
// clustering collapses to a single nonempty cluster scores -1.
SilhouetteReport select_k(const SimilarityMatrix& sim, KRange range, std::uint64_t seed);

// Majority vote of each user's instance labels, ties to the smaller id.
ClusterAssignment assign_users(const std::vector<ReviewRecord>& records,
                               const std::vector<int>& instance_labels);

}  // namespace grouprec
