#pragma once

// Bernoulli pseudo-likelihood ratio misclassification statistic.
//
// Every message k is treated as an independent Bernoulli variable with a
// per-dataset occurrence probability p_k. A file's pseudo-likelihood under a
// dataset is the product over k of p_k (message present) or 1 - p_k (absent).
// The statistic compares the likelihood under the other dataset with the
// likelihood under the file's own dataset:
//
//   lambda(f) = L_other(f) / L_own(f)
//
// Large values mean the file behaves like the other dataset. Everything is
// computed in the log domain; zero likelihoods become -inf.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docstat/matrix.hpp"

namespace docstat {

struct ErrorProbabilities {
  std::string dataset_label;
  std::vector<double> p;
  double smoothing_alpha = 0.0;
};

// p_k = (ones_k + alpha) / (M + 2 alpha). alpha = 0 is the plain row mean.
ErrorProbabilities estimate_probabilities(const BinaryRelationMatrix& m, double alpha = 0.0);

// Sum over k of log(p_k f_k + (1 - p_k)(1 - f_k)) for the column whose ones
// sit at `ones` (sorted 0-based row positions). -inf iff some factor is 0.
double pseudo_log_likelihood(std::span<const std::uint32_t> ones, const ErrorProbabilities& probs);
double pseudo_log_likelihood(std::span<const std::uint8_t> dense_column,
                             const ErrorProbabilities& probs);

struct MisclassificationScore {
  std::string file_id;
  double log_lambda = 0.0;
  // Both pseudo-likelihoods were zero; log_lambda is NaN and has no ordering.
  bool indeterminate = false;

  bool operator==(const MisclassificationScore&) const = default;
};

// log_lambda = log L_other - log L_own, with (-inf) - (-inf) indeterminate.
MisclassificationScore lambda_statistic(std::span<const std::uint32_t> ones,
                                        const ErrorProbabilities& own,
                                        const ErrorProbabilities& other,
                                        std::string file_id = {});

// Combines two log-likelihoods under the rules above.
MisclassificationScore combine_log_likelihoods(double log_own, double log_other,
                                               std::string file_id = {});

struct ScoreOptions {
  double alpha = 0.0;
  // Estimate own-dataset probabilities without the scored file.
  bool leave_one_out = false;
};

// One score per column of m_own, in column order.
std::vector<MisclassificationScore> score_dataset(const BinaryRelationMatrix& m_own,
                                                  const BinaryRelationMatrix& m_other,
                                                  const ScoreOptions& options = {});

struct Classification {
  std::vector<std::string> flagged;
  std::vector<std::string> indeterminate;
};

// True when a score exceeds the threshold. Thresholds are on the log scale
// (log T). A threshold of -inf stands for the limit below every value and so
// admits -inf scores; +inf admits nothing.
bool exceeds(double log_lambda, double log_threshold);

// Flags determinate files with log_lambda > log_threshold; indeterminate
// files are listed separately and never flagged.
Classification classify(std::span<const MisclassificationScore> scores, double log_threshold);

// Score CSV: `file_id,log_lambda,indeterminate` with `+inf` / `-inf` literals.
std::string scores_to_csv(std::span<const MisclassificationScore> scores);
std::vector<MisclassificationScore> scores_from_csv(std::string_view text);

}  // namespace docstat
