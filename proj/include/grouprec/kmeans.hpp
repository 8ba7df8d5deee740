#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace grouprec {

struct KMeansOptions {
    int max_iter = 300;
    double tol = 1e-6;
    // Independent restarts; the run with the lowest inertia wins. Restart r
    // is seeded with seed + r.
    int n_init = 1;
};

struct KMeansResult {
    std::vector<int> labels;
    Eigen::MatrixXd centroids;  // k x d
    double inertia = 0.0;
    int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding, Euclidean distance.
//
// Randomness comes from std::mt19937_64 seeded with `seed`; uniform doubles
// are the top 53 bits of each draw scaled by 2^-53, so runs are reproducible
// across standard libraries. Ties in nearest-centroid assignment go to the
// lower cluster index. An empty cluster takes the point farthest from its
// current centroid (among clusters holding more than one point). Iteration
// stops when no label changes, when the largest centroid shift drops below
// `tol`, or after `max_iter` rounds.
//
// Throws std::invalid_argument unless 1 <= k <= rows.
KMeansResult kmeans_fit(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                        const KMeansOptions& options = {});

std::vector<int> kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                        int max_iter = 300, double tol = 1e-6);

}  // namespace grouprec
