#pragma once

#include <cstdint>
#include <vector>

namespace grouprec {

// Pair counts between a predicted clustering and a reference labeling.
// a = tp, b = fn, c = fp, d = tn.
struct ContingencyCounts {
    std::int64_t tp = 0;
    std::int64_t fn = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t n = 0;

    std::int64_t total_pairs() const { return n * (n - 1) / 2; }
};

struct PairScores {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

// Counts are derived from the cluster/class contingency table, not by
// enumerating pairs. Throws std::invalid_argument on a length mismatch or
// fewer than two points.
ContingencyCounts contingency(const std::vector<int>& pred_labels, const std::vector<int>& true_labels);

// Builds counts directly; throws std::invalid_argument if they do not sum to
// n(n-1)/2 or any is negative.
ContingencyCounts counts_from_pairs(std::int64_t tp, std::int64_t fn, std::int64_t fp, std::int64_t tn);

double rand_index(const ContingencyCounts& c);

// (a - P) / (((a+c) + (a+b)) / 2 - P) with P = (a+c)(a+b) / C(n,2).
// A zero denominator yields 1 when the numerator is also zero, else 0.
double adjusted_rand_index(const ContingencyCounts& c);

// Pair precision a/(a+c), recall a/(a+b) and their harmonic mean.
// `legacy_recall` switches recall to a/(a+d), a variant still seen in some
// reports (8/21 rather than 8/20 for counts 8,12,12,13).
PairScores precision_recall_f(const ContingencyCounts& c, bool legacy_recall = false);

}  // namespace grouprec
