#pragma once

// Mean-centred principal components analysis, used both for files (points
// are matrix columns, coordinates are binary message indicators) and for
// parsers (points are parsers, coordinates are per-file message totals).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "docstat/matrix.hpp"

namespace docstat {

struct PcaResult {
  // k x D; rows are orthonormal. The largest-magnitude entry of each row is
  // positive (the first one on exact ties).
  Eigen::MatrixXd components;
  // Top-k eigenvalues of the sample covariance (divisor P - 1), nonincreasing.
  Eigen::VectorXd variances;
  double total_variance = 0.0;
  Eigen::RowVectorXd mean;
  // P x k coordinates of the centred points.
  Eigen::MatrixXd projections;
};

// `points` is P x D, one point per row. Requires P >= 2 and
// 1 <= k <= min(P - 1, D).
PcaResult pca(const Eigen::MatrixXd& points, std::size_t k);

// File-space PCA: one point per column of `m`. k is capped at
// min(M - 1, N).
PcaResult project_files(const BinaryRelationMatrix& m, std::size_t k = 3);

// Parser-space PCA on raw per-file totals. k is capped at
// min(parsers - 1, files).
PcaResult project_parsers(const ParserCountMatrix& agg, std::size_t k = 3);

struct ScreeResult {
  std::vector<double> variances;  // all min(P - 1, D) eigenvalues, nonincreasing
  std::vector<double> fractions;  // variances / total; all zero when total is zero
  double total_variance = 0.0;
};

ScreeResult scree(const Eigen::MatrixXd& points);

Eigen::MatrixXd file_points(const BinaryRelationMatrix& m);
Eigen::MatrixXd parser_points(const ParserCountMatrix& agg);

// Projection CSV: `point_id,pc1,...,pck`.
std::string projections_to_csv(const std::vector<std::string>& point_ids, const PcaResult& result);
struct ProjectionTable {
  std::vector<std::string> point_ids;
  Eigen::MatrixXd coordinates;
};
ProjectionTable projections_from_csv(std::string_view text);

// Scree CSV: `index,variance,fraction` with 1-based index.
std::string scree_to_csv(const ScreeResult& result);
ScreeResult scree_from_csv(std::string_view text);

}  // namespace docstat
