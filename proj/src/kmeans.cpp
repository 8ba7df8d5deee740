#include "grouprec/kmeans.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace grouprec {
namespace {

// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
    const Eigen::Index m = points.rows();
    Eigen::MatrixXd centroids(k, points.cols());

    auto first = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(m));
    centroids.row(0) = points.row(std::min(first, m - 1));

    Eigen::VectorXd closest = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = closest.sum();
        Eigen::Index pick = m - 1;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (closest(i) <= 0.0) continue;
                pick = i;  // last positive candidate absorbs rounding at the tail
                acc += closest(i);
                if (acc > target) break;
            }
        } else {
            // Every point coincides with a chosen centroid.
            pick = std::min(static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(m)), m - 1);
        }
        centroids.row(c) = points.row(pick);
        closest = closest.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
    return centroids;
}

// Nearest centroid per point (ties to the lower index); returns inertia.
double assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids, std::vector<int>& labels,
              Eigen::VectorXd& dist2) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = (points.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                best_c = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = best_c;
        dist2(i) = best;
        inertia += best;
    }
    return inertia;
}

void repair_empty(const Eigen::MatrixXd& points, Eigen::MatrixXd& centroids, std::vector<int>& labels,
                  Eigen::VectorXd& dist2) {
    const int k = static_cast<int>(centroids.rows());
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (int c = 0; c < k; ++c) {
        if (sizes[static_cast<std::size_t>(c)] > 0) continue;
        Eigen::Index far = -1;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
            const int owner = labels[static_cast<std::size_t>(i)];
            if (sizes[static_cast<std::size_t>(owner)] < 2) continue;
            if (dist2(i) > far_d) {
                far_d = dist2(i);
                far = i;
            }
        }
        if (far < 0) return;  // k > distinct donors; cannot happen when k <= m
        --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
        labels[static_cast<std::size_t>(far)] = c;
        ++sizes[static_cast<std::size_t>(c)];
        dist2(far) = 0.0;
        centroids.row(c) = points.row(far);
    }
}

KMeansResult single_run(const Eigen::MatrixXd& points, int k, std::uint64_t seed, const KMeansOptions& options) {
    std::mt19937_64 rng(seed);
    const Eigen::Index m = points.rows();

    KMeansResult result;
    result.centroids = plus_plus_init(points, k, rng);
    result.labels.assign(static_cast<std::size_t>(m), -1);
    std::vector<int> previous;
    Eigen::VectorXd dist2(m);

    for (int iter = 0; iter < options.max_iter; ++iter) {
        result.iterations = iter + 1;
        assign(points, result.centroids, result.labels, dist2);
        repair_empty(points, result.centroids, result.labels, dist2);
        if (result.labels == previous) break;
        previous = result.labels;

        Eigen::MatrixXd updated = Eigen::MatrixXd::Zero(k, points.cols());
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
        for (Eigen::Index i = 0; i < m; ++i) {
            const int c = result.labels[static_cast<std::size_t>(i)];
            updated.row(c) += points.row(i);
            counts(c) += 1.0;
        }
        for (int c = 0; c < k; ++c) {
            if (counts(c) > 0.0) updated.row(c) /= counts(c);
            else updated.row(c) = result.centroids.row(c);
        }
        const double shift = (updated - result.centroids).rowwise().norm().maxCoeff();
        result.centroids = std::move(updated);
        if (shift < options.tol) {
            // Converged: one last assignment so labels match the final centroids.
            assign(points, result.centroids, result.labels, dist2);
            repair_empty(points, result.centroids, result.labels, dist2);
            break;
        }
    }
    result.inertia = dist2.sum();
    return result;
}

}  // namespace

KMeansResult kmeans_fit(const Eigen::MatrixXd& points, int k, std::uint64_t seed, const KMeansOptions& options) {
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > points.rows()) throw std::invalid_argument("kmeans: k exceeds the number of points");
    if (options.n_init < 1 || options.max_iter < 1) throw std::invalid_argument("kmeans: bad options");

    KMeansResult best;
    for (int r = 0; r < options.n_init; ++r) {
        KMeansResult run = single_run(points, k, seed + static_cast<std::uint64_t>(r), options);
        if (r == 0 || run.inertia < best.inertia) best = std::move(run);
    }
    return best;
}

std::vector<int> kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter, double tol) {
    KMeansOptions options;
    options.max_iter = max_iter;
    options.tol = tol;
    return kmeans_fit(points, k, seed, options).labels;
}

}  // namespace grouprec
