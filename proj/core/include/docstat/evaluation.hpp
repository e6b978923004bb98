#pragma once

// Ground-truth evaluation of misclassification scores (ROC, AUC) and the
// chi-square independence test on 2x2 compliance counts.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docstat/bernoulli.hpp"
#include "docstat/matrix.hpp"

namespace docstat {

struct RocPoint {
  double threshold;  // log scale; flagged iff exceeds(score, threshold)
  double p_fa;
  double p_d;

  bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
  // Thresholds decreasing from +inf to -inf; p_fa and p_d nondecreasing.
  std::vector<RocPoint> points;
  double auc = 0.0;
  std::size_t n_misclassified = 0;
  std::size_t n_correct = 0;
  std::vector<std::string> excluded;  // indeterminate files
};

// Starts at threshold +inf and admits one distinct score at a time, in
// descending order; each point's threshold is the next lower score (the
// lowest finite double ahead of a -inf group, -inf at the end). Files sharing
// a score enter together, so ties move the curve diagonally. +inf scores are
// flagged at every finite threshold.
// `misclassified[i]` is the truth for `scores[i]`.
RocCurve roc(std::span<const MisclassificationScore> scores,
             const std::vector<bool>& misclassified);

// Trapezoidal area under the (p_fa, p_d) polyline.
double auc(const RocCurve& curve);

// Files whose truth label differs from `local_label` (the label that
// characterises the dataset) are misclassified. Every scored file must have
// a truth entry.
std::vector<bool> misclassified_flags(std::span<const MisclassificationScore> scores,
                                      const GroundTruth& truth, Label local_label);

// ROC CSV: `threshold,p_fa,p_d` rows followed by `# auc=<value>`.
std::string roc_to_csv(const RocCurve& curve);
RocCurve roc_from_csv(std::string_view text);

// counts[dataset][outcome], outcome 0 = valid, 1 = rejected.
struct ContingencyTable2x2 {
  std::array<std::array<std::uint64_t, 2>, 2> counts{};

  std::uint64_t total() const;
  ContingencyTable2x2 transposed() const;
};

struct ChiSquareResult {
  double statistic;
  double p_value;
};

// Pearson chi-square with one degree of freedom and no continuity
// correction; p = erfc(sqrt(x / 2)). Throws PreconditionError when a
// marginal is zero.
ChiSquareResult chi_square_independence(const ContingencyTable2x2& table);

}  // namespace docstat
