#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grouprec/clustering.hpp"
#include "grouprec/corpus.hpp"

namespace grouprec {

// Utility matrix completed by collaborative filtering.
struct DenseRatingMatrix {
    std::vector<std::string> users;
    std::vector<std::string> items;
    Eigen::MatrixXd values;  // users x items
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> observed;
};

struct CfOptions {
    int neighbors = 20;
    int min_overlap = 2;
};

// Pearson correlation over co-rated items (means taken over the overlap).
// Zero when the overlap is below `min_overlap` or either side has no variance.
double pearson_similarity(const UtilityMatrix& um, std::size_t u, std::size_t v, int min_overlap);

// User-based neighborhood CF. For an unrated cell (u, i):
//   r(u,i) = mean_u + sum_v sim(u,v) (r(v,i) - mean_v) / sum_v |sim(u,v)|
// over the `neighbors` users with the largest |sim| that rated i (ties to the
// lower user index, zero similarities skipped). Without usable neighbors the
// user's mean is used, then the global mean. Predictions are clamped to
// [1, 5]; observed cells are copied unchanged.
//
// Throws DataError on an empty matrix.
DenseRatingMatrix predict_ratings(const UtilityMatrix& um, const CfOptions& options = {});

// k-means over user rows (Euclidean). instance_labels holds one label per
// user in matrix order.
ClusterAssignment cluster_users(const DenseRatingMatrix& m, int k = 2, std::uint64_t seed = 0);

}  // namespace grouprec
