#pragma once

// Parser redundancy: Pearson correlation between message rows, aggregated
// to a parser x parser matrix of median correlations, and a ranking of
// parsers from least to most redundant.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docstat/catalog.hpp"
#include "docstat/matrix.hpp"

namespace docstat {

struct MessageCorrelation {
  std::vector<RowIndex> rows;     // surviving catalog rows
  std::vector<RowIndex> removed;  // constant rows dropped before correlating
  std::vector<double> r;          // row-major rows.size() x rows.size(), symmetric, unit diagonal

  double at(std::size_t i, std::size_t j) const { return r[i * rows.size() + j]; }
};

// Drops constant rows first. Throws PreconditionError when M < 2 or fewer
// than two rows survive.
MessageCorrelation message_correlations(const BinaryRelationMatrix& m);

struct ParserRedundancy {
  std::vector<std::string> parsers;   // parsers with at least one surviving row, catalog order
  std::vector<std::string> excluded;  // parsers without surviving rows
  std::vector<double> median;         // row-major, symmetric

  double at(std::size_t i, std::size_t j) const { return median[i * parsers.size() + j]; }
};

// Off-diagonal (A, B): median of r(i, j) over i owned by A, j owned by B.
// Diagonal (A, A): median over distinct pairs within A, or 1 for a single
// row. Even-sized sets take the mean of the two middle values.
ParserRedundancy parser_median_correlation(const MessageCorrelation& c,
                                           const MessageCatalog& catalog);

struct RankedParser {
  std::string name;
  std::optional<double> sort_key;  // absent when there is no other parser
  std::size_t rank = 0;            // 1-based
};

// Sort key = median of the parser's off-diagonal entries. Ascending key
// (least redundant first), ties broken by name.
std::vector<RankedParser> rank_parsers(const ParserRedundancy& r);

// Median with the mean-of-middle-two convention. Throws on empty input.
double median(std::vector<double> values);

// CSV matrix with a `parser` header column, rows and columns in `order`.
std::string redundancy_matrix_to_csv(const ParserRedundancy& r,
                                     const std::vector<std::string>& order);
ParserRedundancy redundancy_matrix_from_csv(std::string_view text);

// `parser,sort_key,rank`.
std::string ranking_to_csv(const std::vector<RankedParser>& ranking);
std::vector<RankedParser> ranking_from_csv(std::string_view text);

}  // namespace docstat
