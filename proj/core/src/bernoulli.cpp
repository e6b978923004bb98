#include "docstat/bernoulli.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "docstat/csv.hpp"
#include "docstat/errors.hpp"

namespace docstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of the single-message factor; -inf when the factor is exactly zero.
inline double log_factor(double p, bool present) {
  const double factor = present ? p : 1.0 - p;
  return factor > 0.0 ? std::log(factor) : -kInf;
}

template <typename IsPresent>
double sum_log_factors(std::span<const double> p, IsPresent&& present) {
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double lf = log_factor(p[k], present(k));
    if (lf == -kInf) return -kInf;
    total += lf;
  }
  return total;
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw PreconditionError("smoothing alpha must be finite and nonnegative");
}

}  // namespace

ErrorProbabilities estimate_probabilities(const BinaryRelationMatrix& m, double alpha) {
  check_alpha(alpha);
  if (m.n_cols() == 0)
    throw PreconditionError("estimate_probabilities: dataset '" + m.dataset_label() +
                            "' has no files");
  const auto counts = m.row_counts();
  const double denom = static_cast<double>(m.n_cols()) + 2.0 * alpha;
  ErrorProbabilities probs{m.dataset_label(), std::vector<double>(counts.size()), alpha};
  for (std::size_t k = 0; k < counts.size(); ++k)
    probs.p[k] = (static_cast<double>(counts[k]) + alpha) / denom;
  return probs;
}

double pseudo_log_likelihood(std::span<const std::uint32_t> ones,
                             const ErrorProbabilities& probs) {
  std::size_t next = 0;
  for (const auto r : ones)
    if (r >= probs.p.size()) throw PreconditionError("column row position out of range");
  return sum_log_factors(probs.p, [&](std::size_t k) {
    if (next < ones.size() && ones[next] == k) {
      ++next;
      return true;
    }
    return false;
  });
}

double pseudo_log_likelihood(std::span<const std::uint8_t> dense_column,
                             const ErrorProbabilities& probs) {
  if (dense_column.size() != probs.p.size())
    throw PreconditionError("column length " + std::to_string(dense_column.size()) +
                            " does not match " + std::to_string(probs.p.size()) +
                            " probabilities");
  return sum_log_factors(probs.p, [&](std::size_t k) { return dense_column[k] != 0; });
}

MisclassificationScore combine_log_likelihoods(double log_own, double log_other,
                                               std::string file_id) {
  MisclassificationScore s;
  s.file_id = std::move(file_id);
  if (log_own == -kInf && log_other == -kInf) {
    s.indeterminate = true;
    s.log_lambda = std::numeric_limits<double>::quiet_NaN();
  } else if (log_own == -kInf) {
    s.log_lambda = kInf;
  } else if (log_other == -kInf) {
    s.log_lambda = -kInf;
  } else {
    s.log_lambda = log_other - log_own;
  }
  return s;
}

MisclassificationScore lambda_statistic(std::span<const std::uint32_t> ones,
                                        const ErrorProbabilities& own,
                                        const ErrorProbabilities& other, std::string file_id) {
  if (own.p.size() != other.p.size())
    throw PreconditionError("probability vectors differ in length");
  return combine_log_likelihoods(pseudo_log_likelihood(ones, own),
                                 pseudo_log_likelihood(ones, other), std::move(file_id));
}

std::vector<MisclassificationScore> score_dataset(const BinaryRelationMatrix& m_own,
                                                  const BinaryRelationMatrix& m_other,
                                                  const ScoreOptions& options) {
  if (m_own.row_ids() != m_other.row_ids())
    throw PreconditionError("score_dataset: matrices do not share a row space");
  const auto own = estimate_probabilities(m_own, options.alpha);
  const auto other = estimate_probabilities(m_other, options.alpha);

  std::vector<MisclassificationScore> scores;
  scores.reserve(m_own.n_cols());
  if (!options.leave_one_out) {
    for (std::size_t j = 0; j < m_own.n_cols(); ++j)
      scores.push_back(lambda_statistic(m_own.column(j), own, other, m_own.column_ids()[j]));
    return scores;
  }

  const double denom = static_cast<double>(m_own.n_cols()) - 1.0 + 2.0 * options.alpha;
  if (!(denom > 0.0))
    throw PreconditionError("leave-one-out needs at least two files or alpha > 0");
  const auto counts = m_own.row_counts();
  ErrorProbabilities loo{own.dataset_label, std::vector<double>(counts.size()), options.alpha};
  for (std::size_t j = 0; j < m_own.n_cols(); ++j) {
    const auto dense = m_own.dense_column(j);
    for (std::size_t k = 0; k < counts.size(); ++k)
      loo.p[k] = (static_cast<double>(counts[k] - dense[k]) + options.alpha) / denom;
    scores.push_back(combine_log_likelihoods(pseudo_log_likelihood(dense, loo),
                                             pseudo_log_likelihood(dense, other),
                                             m_own.column_ids()[j]));
  }
  return scores;
}

bool exceeds(double log_lambda, double log_threshold) {
  if (log_threshold == -kInf) return true;
  return log_lambda > log_threshold;
}

Classification classify(std::span<const MisclassificationScore> scores, double log_threshold) {
  Classification out;
  for (const auto& s : scores) {
    if (s.indeterminate)
      out.indeterminate.push_back(s.file_id);
    else if (exceeds(s.log_lambda, log_threshold))
      out.flagged.push_back(s.file_id);
  }
  return out;
}

std::string scores_to_csv(std::span<const MisclassificationScore> scores) {
  std::ostringstream out;
  out << "file_id,log_lambda,indeterminate\n";
  for (const auto& s : scores)
    out << s.file_id << ',' << csv::format_real(s.log_lambda) << ','
        << (s.indeterminate ? "true" : "false") << '\n';
  return out.str();
}

std::vector<MisclassificationScore> scores_from_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || csv::trim(rows[0]) != "file_id,log_lambda,indeterminate")
    throw ParseError("score CSV: expected header 'file_id,log_lambda,indeterminate'");
  std::vector<MisclassificationScore> scores;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (csv::trim(rows[i]).empty()) continue;
    const auto f = csv::split(rows[i]);
    if (f.size() != 3)
      throw ParseError("score CSV line " + std::to_string(i + 1) + ": expected 3 fields");
    MisclassificationScore s;
    s.file_id = std::string(csv::trim(f[0]));
    s.log_lambda = csv::parse_real(f[1]);
    const auto flag = csv::trim(f[2]);
    if (flag != "true" && flag != "false")
      throw ParseError("score CSV line " + std::to_string(i + 1) + ": bad indeterminate flag");
    s.indeterminate = flag == "true";
    scores.push_back(std::move(s));
  }
  return scores;
}

}  // namespace docstat
