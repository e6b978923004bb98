#include "docstat/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "docstat/csv.hpp"
#include "docstat/errors.hpp"

namespace docstat {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RocCurve roc(std::span<const MisclassificationScore> scores, const std::vector<bool>& misclassified) {
  if (scores.size() != misclassified.size())
    throw PreconditionError("roc: " + std::to_string(scores.size()) + " scores but " +
                            std::to_string(misclassified.size()) + " truth flags");
  RocCurve curve;
  std::vector<std::pair<double, bool>> items;
  items.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].indeterminate) {
      curve.excluded.push_back(scores[i].file_id);
      continue;
    }
    items.emplace_back(scores[i].log_lambda, misclassified[i]);
    ++(misclassified[i] ? curve.n_misclassified : curve.n_correct);
  }
  if (curve.n_misclassified == 0 || curve.n_correct == 0)
    throw PreconditionError("roc: ground truth needs both misclassified and correct files");

  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  // One point per distinct score, admitted in descending order. Each point's
  // threshold sits just below the admitted group: the next distinct score, or
  // the lowest finite value when the next group is -inf (a threshold of -inf
  // would admit that group as well).
  const auto n_mis = static_cast<double>(curve.n_misclassified);
  const auto n_ok = static_cast<double>(curve.n_correct);
  std::size_t hit = 0, false_alarm = 0;
  curve.points.push_back({kInf, 0.0, 0.0});
  for (std::size_t i = 0; i < items.size();) {
    const double s = items[i].first;
    for (; i < items.size() && items[i].first == s; ++i) ++(items[i].second ? hit : false_alarm);
    double t = -kInf;
    if (i < items.size())
      t = items[i].first == -kInf ? std::numeric_limits<double>::lowest() : items[i].first;
    curve.points.push_back({t, static_cast<double>(false_alarm) / n_ok,
                            static_cast<double>(hit) / n_mis});
  }
  curve.auc = auc(curve);
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  double x = 0.0, y = 0.0;
  for (const auto& pt : curve.points) {
    area += (pt.p_fa - x) * (pt.p_d + y) / 2.0;
    x = pt.p_fa;
    y = pt.p_d;
  }
  area += (1.0 - x) * (1.0 + y) / 2.0;
  return area;
}

std::vector<bool> misclassified_flags(std::span<const MisclassificationScore> scores,
                                      const GroundTruth& truth, Label local_label) {
  std::vector<bool> flags;
  flags.reserve(scores.size());
  for (const auto& s : scores) {
    const auto it = truth.labels.find(s.file_id);
    if (it == truth.labels.end())
      throw PreconditionError("no ground truth for file '" + s.file_id + "'");
    flags.push_back(it->second != local_label);
  }
  return flags;
}

std::string roc_to_csv(const RocCurve& curve) {
  std::ostringstream out;
  out << "threshold,p_fa,p_d\n";
  for (const auto& pt : curve.points)
    out << csv::format_real(pt.threshold) << ',' << csv::format_real(pt.p_fa) << ','
        << csv::format_real(pt.p_d) << '\n';
  out << "# auc=" << csv::format_real(curve.auc) << '\n';
  return out.str();
}

RocCurve roc_from_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || csv::trim(rows[0]) != "threshold,p_fa,p_d")
    throw ParseError("ROC CSV: expected header 'threshold,p_fa,p_d'");
  RocCurve curve;
  bool have_auc = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto line = csv::trim(rows[i]);
    if (line.empty()) continue;
    if (line.rfind("# auc=", 0) == 0) {
      curve.auc = csv::parse_real(line.substr(6));
      have_auc = true;
      continue;
    }
    const auto f = csv::split(line);
    if (f.size() != 3)
      throw ParseError("ROC CSV line " + std::to_string(i + 1) + ": expected 3 fields");
    curve.points.push_back({csv::parse_real(f[0]), csv::parse_real(f[1]), csv::parse_real(f[2])});
  }
  if (!have_auc) throw ParseError("ROC CSV: missing '# auc=' summary");
  return curve;
}

std::uint64_t ContingencyTable2x2::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

ContingencyTable2x2 ContingencyTable2x2::transposed() const {
  ContingencyTable2x2 t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) t.counts[i][j] = counts[j][i];
  return t;
}

ChiSquareResult chi_square_independence(const ContingencyTable2x2& table) {
  const auto& c = table.counts;
  const double n = static_cast<double>(table.total());
  const std::array<double, 2> row{static_cast<double>(c[0][0] + c[0][1]),
                                  static_cast<double>(c[1][0] + c[1][1])};
  const std::array<double, 2> col{static_cast<double>(c[0][0] + c[1][0]),
                                  static_cast<double>(c[0][1] + c[1][1])};
  if (row[0] == 0 || row[1] == 0 || col[0] == 0 || col[1] == 0)
    throw PreconditionError("chi-square: table has a zero marginal");

  double stat = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected = row[i] * col[j] / n;
      const double d = static_cast<double>(c[i][j]) - expected;
      stat += d * d / expected;
    }
  }
  return {stat, std::erfc(std::sqrt(stat / 2.0))};
}

}  // namespace docstat
