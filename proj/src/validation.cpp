#include "grouprec/validation.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace grouprec {
namespace {

std::int64_t choose2(std::int64_t x) { return x * (x - 1) / 2; }

}  // namespace

ContingencyCounts contingency(const std::vector<int>& pred_labels, const std::vector<int>& true_labels) {
    if (pred_labels.size() != true_labels.size())
        throw std::invalid_argument("contingency: labelings differ in length");
    if (pred_labels.size() < 2) throw std::invalid_argument("contingency: need at least 2 points");

    std::map<std::pair<int, int>, std::int64_t> table;
    std::map<int, std::int64_t> cluster_sizes;
    std::map<int, std::int64_t> class_sizes;
    for (std::size_t i = 0; i < pred_labels.size(); ++i) {
        ++table[{pred_labels[i], true_labels[i]}];
        ++cluster_sizes[pred_labels[i]];
        ++class_sizes[true_labels[i]];
    }

    std::int64_t same_both = 0;
    for (const auto& [_, count] : table) same_both += choose2(count);
    std::int64_t same_cluster = 0;
    for (const auto& [_, count] : cluster_sizes) same_cluster += choose2(count);
    std::int64_t same_class = 0;
    for (const auto& [_, count] : class_sizes) same_class += choose2(count);

    ContingencyCounts c;
    c.n = static_cast<std::int64_t>(pred_labels.size());
    c.tp = same_both;
    c.fp = same_cluster - same_both;
    c.fn = same_class - same_both;
    c.tn = c.total_pairs() - c.tp - c.fp - c.fn;
    return c;
}

ContingencyCounts counts_from_pairs(std::int64_t tp, std::int64_t fn, std::int64_t fp, std::int64_t tn) {
    if (tp < 0 || fn < 0 || fp < 0 || tn < 0) throw std::invalid_argument("pair counts must be non-negative");
    const std::int64_t total = tp + fn + fp + tn;
    // Smallest n with n(n-1)/2 == total.
    std::int64_t n = 2;
    while (choose2(n) < total) ++n;
    if (choose2(n) != total) throw std::invalid_argument("pair counts do not sum to n(n-1)/2 for any n");
    return {tp, fn, fp, tn, n};
}

double rand_index(const ContingencyCounts& c) {
    if (c.n < 2) throw std::invalid_argument("rand_index: need at least 2 points");
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total_pairs());
}

double adjusted_rand_index(const ContingencyCounts& c) {
    if (c.n < 2) throw std::invalid_argument("adjusted_rand_index: need at least 2 points");
    const double a = static_cast<double>(c.tp);
    const double same_cluster = static_cast<double>(c.tp + c.fp);
    const double same_class = static_cast<double>(c.tp + c.fn);
    const double expected = same_cluster * same_class / static_cast<double>(c.total_pairs());
    const double max_index = 0.5 * (same_cluster + same_class);
    const double numerator = a - expected;
    const double denominator = max_index - expected;
    if (denominator == 0.0) return numerator == 0.0 ? 1.0 : 0.0;
    return numerator / denominator;
}

PairScores precision_recall_f(const ContingencyCounts& c, bool legacy_recall) {
    const double a = static_cast<double>(c.tp);
    const std::int64_t p_denom = c.tp + c.fp;
    const std::int64_t r_denom = legacy_recall ? c.tp + c.tn : c.tp + c.fn;
    PairScores s;
    s.precision = p_denom > 0 ? a / static_cast<double>(p_denom) : 0.0;
    s.recall = r_denom > 0 ? a / static_cast<double>(r_denom) : 0.0;
    const double sum = s.precision + s.recall;
    s.f_measure = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
    return s;
}

}  // namespace grouprec
