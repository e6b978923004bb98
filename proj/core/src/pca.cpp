#include "docstat/pca.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "docstat/csv.hpp"
#include "docstat/errors.hpp"

namespace docstat {

namespace {

struct Spectrum {
  Eigen::VectorXd values;     // nonincreasing, clamped at 0
  Eigen::MatrixXd directions; // one unit direction per row (only when requested)
};

// Eigen-decomposes the sample covariance of the centred points `xc` (P x D),
// going through the smaller of the D x D covariance and the P x P Gram
// matrix. Returns the top `count` eigenpairs.
Spectrum covariance_spectrum(const Eigen::MatrixXd& xc, std::size_t count, bool with_vectors) {
  const auto p = static_cast<double>(xc.rows());
  const auto n = static_cast<Eigen::Index>(count);
  Spectrum out;
  const bool use_gram = xc.rows() < xc.cols();
  const Eigen::MatrixXd gram = use_gram
                                   ? Eigen::MatrixXd(xc * xc.transpose() / (p - 1.0))
                                   : Eigen::MatrixXd(xc.transpose() * xc / (p - 1.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      gram, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");

  const auto dim = gram.rows();
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.values(i) = std::max(0.0, solver.eigenvalues()(dim - 1 - i));
  if (!with_vectors) return out;

  out.directions.resize(n, xc.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = use_gram ? Eigen::VectorXd(xc.transpose() * solver.eigenvectors().col(dim - 1 - i))
                                 : Eigen::VectorXd(solver.eigenvectors().col(dim - 1 - i));
    out.directions.row(i) = v.transpose();
  }

  // Modified Gram-Schmidt; directions lost to a zero eigenvalue (Gram route)
  // are completed from the standard basis.
  Eigen::Index next_basis = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < i; ++j)
        out.directions.row(i) -= out.directions.row(i).dot(out.directions.row(j)) *
                                 out.directions.row(j);
    double norm = out.directions.row(i).norm();
    const double scale = use_gram ? std::sqrt(std::max(out.values(i), 0.0) * (p - 1.0)) : 1.0;
    while (!(norm > 1e-10 * std::max(scale, 1.0))) {
      if (next_basis >= xc.cols()) throw Error("pca: cannot complete orthonormal basis");
      Eigen::RowVectorXd e = Eigen::RowVectorXd::Unit(xc.cols(), next_basis++);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < i; ++j)
          e -= e.dot(out.directions.row(j)) * out.directions.row(j);
      out.directions.row(i) = e;
      norm = e.norm();
    }
    out.directions.row(i) /= norm;
  }
  return out;
}

void fix_signs(PcaResult& r) {
  for (Eigen::Index i = 0; i < r.components.rows(); ++i) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index d = 0; d < r.components.cols(); ++d) {
      const double a = std::abs(r.components(i, d));
      if (a > best_abs) {
        best_abs = a;
        best = d;
      }
    }
    if (r.components(i, best) < 0.0) {
      r.components.row(i) *= -1.0;
      r.projections.col(i) *= -1.0;
    }
  }
}

std::size_t cap_k(std::size_t k, std::size_t points, std::size_t dims) {
  if (points < 2) throw PreconditionError("pca needs at least two points");
  return std::max<std::size_t>(1, std::min({k, points - 1, dims}));
}

}  // namespace

PcaResult pca(const Eigen::MatrixXd& points, std::size_t k) {
  const auto p = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  if (p < 2) throw PreconditionError("pca needs at least two points, got " + std::to_string(p));
  if (k < 1 || k > std::min(p - 1, d))
    throw PreconditionError("pca: k=" + std::to_string(k) + " outside 1.." +
                            std::to_string(std::min(p - 1, d)));

  PcaResult r;
  r.mean = points.colwise().mean();
  const Eigen::MatrixXd xc = points.rowwise() - r.mean;
  r.total_variance = xc.squaredNorm() / (static_cast<double>(p) - 1.0);
  auto spec = covariance_spectrum(xc, k, true);
  r.variances = std::move(spec.values);
  r.components = std::move(spec.directions);
  r.projections = xc * r.components.transpose();
  fix_signs(r);
  return r;
}

Eigen::MatrixXd file_points(const BinaryRelationMatrix& m) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.n_cols()),
                                            static_cast<Eigen::Index>(m.n_rows()));
  for (std::size_t j = 0; j < m.n_cols(); ++j)
    for (const auto r : m.column(j)) x(static_cast<Eigen::Index>(j), r) = 1.0;
  return x;
}

Eigen::MatrixXd parser_points(const ParserCountMatrix& agg) {
  const auto np = static_cast<Eigen::Index>(agg.parsers.size());
  const auto nf = static_cast<Eigen::Index>(agg.column_ids.size());
  Eigen::MatrixXd x(np, nf);
  for (Eigen::Index i = 0; i < np; ++i)
    for (Eigen::Index j = 0; j < nf; ++j)
      x(i, j) = static_cast<double>(agg.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  return x;
}

PcaResult project_files(const BinaryRelationMatrix& m, std::size_t k) {
  return pca(file_points(m), cap_k(k, m.n_cols(), m.n_rows()));
}

PcaResult project_parsers(const ParserCountMatrix& agg, std::size_t k) {
  return pca(parser_points(agg), cap_k(k, agg.parsers.size(), agg.column_ids.size()));
}

ScreeResult scree(const Eigen::MatrixXd& points) {
  const auto p = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  if (p < 2) throw PreconditionError("scree needs at least two points");
  if (d < 1) throw PreconditionError("scree needs at least one dimension");
  const Eigen::MatrixXd xc = points.rowwise() - points.colwise().mean();
  const auto spec = covariance_spectrum(xc, std::min(p - 1, d), false);

  ScreeResult out;
  out.total_variance = xc.squaredNorm() / (static_cast<double>(p) - 1.0);
  out.variances.assign(spec.values.begin(), spec.values.end());
  out.fractions.resize(out.variances.size(), 0.0);
  if (out.total_variance > 0.0)
    for (std::size_t i = 0; i < out.variances.size(); ++i)
      out.fractions[i] = out.variances[i] / out.total_variance;
  return out;
}

std::string projections_to_csv(const std::vector<std::string>& point_ids, const PcaResult& result) {
  if (point_ids.size() != static_cast<std::size_t>(result.projections.rows()))
    throw PreconditionError("projections_to_csv: point id count mismatch");
  std::ostringstream out;
  out << "point_id";
  for (Eigen::Index c = 0; c < result.projections.cols(); ++c) out << ",pc" << (c + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < result.projections.rows(); ++i) {
    out << point_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < result.projections.cols(); ++c)
      out << ',' << csv::format_real(result.projections(i, c));
    out << '\n';
  }
  return out.str();
}

ProjectionTable projections_from_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty()) throw ParseError("projection CSV: empty");
  const auto header = csv::split(rows[0]);
  if (header.size() < 2 || header[0] != "point_id")
    throw ParseError("projection CSV: expected header 'point_id,pc1,...'");
  for (std::size_t c = 1; c < header.size(); ++c)
    if (csv::trim(header[c]) != "pc" + std::to_string(c))
      throw ParseError("projection CSV: bad column '" + header[c] + "'");

  ProjectionTable t;
  std::vector<std::vector<double>> coords;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (csv::trim(rows[i]).empty()) continue;
    const auto f = csv::split(rows[i]);
    if (f.size() != header.size())
      throw ParseError("projection CSV line " + std::to_string(i + 1) + ": wrong field count");
    t.point_ids.push_back(f[0]);
    auto& row = coords.emplace_back();
    for (std::size_t c = 1; c < f.size(); ++c) row.push_back(csv::parse_real(f[c]));
  }
  t.coordinates.resize(static_cast<Eigen::Index>(coords.size()),
                       static_cast<Eigen::Index>(header.size() - 1));
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t c = 0; c < coords[i].size(); ++c)
      t.coordinates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = coords[i][c];
  return t;
}

std::string scree_to_csv(const ScreeResult& result) {
  std::ostringstream out;
  out << "index,variance,fraction\n";
  for (std::size_t i = 0; i < result.variances.size(); ++i)
    out << (i + 1) << ',' << csv::format_real(result.variances[i]) << ','
        << csv::format_real(result.fractions[i]) << '\n';
  return out.str();
}

ScreeResult scree_from_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || csv::trim(rows[0]) != "index,variance,fraction")
    throw ParseError("scree CSV: expected header 'index,variance,fraction'");
  ScreeResult out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (csv::trim(rows[i]).empty()) continue;
    const auto f = csv::split(rows[i]);
    if (f.size() != 3 || csv::parse_integer(f[0]) != static_cast<long long>(out.variances.size() + 1))
      throw ParseError("scree CSV line " + std::to_string(i + 1) + ": malformed");
    out.variances.push_back(csv::parse_real(f[1]));
    out.fractions.push_back(csv::parse_real(f[2]));
  }
  for (const double v : out.variances) out.total_variance += v;
  return out;
}

}  // namespace docstat
