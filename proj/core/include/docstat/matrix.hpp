#pragma once

// Relation matrices: message rows x file columns, stored sparse by column.
//
// Rows carry their catalog row index (1-based) so that a matrix with some rows
// removed still knows which messages it holds. Columns carry a string id: the
// decimal file id for a single corpus, `<dataset>/<file id>` after hconcat.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docstat/catalog.hpp"
#include "docstat/harness.hpp"

namespace docstat {

struct CountEntry {
  std::uint32_t row;    // 0-based row position
  std::uint32_t count;  // always > 0

  bool operator==(const CountEntry&) const = default;
};

class RelationMatrix {
 public:
  RelationMatrix() = default;
  // `columns[j]` lists the nonzero entries of column j; entries are sorted and
  // validated on construction.
  RelationMatrix(std::string dataset_label, std::vector<RowIndex> row_ids,
                 std::vector<std::string> column_ids,
                 std::vector<std::vector<CountEntry>> columns);

  const std::string& dataset_label() const noexcept { return label_; }
  std::size_t n_rows() const noexcept { return row_ids_.size(); }
  std::size_t n_cols() const noexcept { return column_ids_.size(); }
  std::size_t nonzeros() const noexcept { return entries_.size(); }
  const std::vector<RowIndex>& row_ids() const noexcept { return row_ids_; }
  const std::vector<std::string>& column_ids() const noexcept { return column_ids_; }

  std::span<const CountEntry> column(std::size_t j) const;
  std::uint32_t count(std::size_t row, std::size_t col) const;

  bool operator==(const RelationMatrix&) const = default;

 private:
  std::string label_;
  std::vector<RowIndex> row_ids_;
  std::vector<std::string> column_ids_;
  std::vector<std::size_t> col_start_{0};
  std::vector<CountEntry> entries_;
};

class BinaryRelationMatrix {
 public:
  BinaryRelationMatrix() = default;
  // `columns[j]` lists the 0-based row positions holding a 1 in column j.
  BinaryRelationMatrix(std::string dataset_label, std::vector<RowIndex> row_ids,
                       std::vector<std::string> column_ids,
                       std::vector<std::vector<std::uint32_t>> columns);

  const std::string& dataset_label() const noexcept { return label_; }
  std::size_t n_rows() const noexcept { return row_ids_.size(); }
  std::size_t n_cols() const noexcept { return column_ids_.size(); }
  std::size_t nonzeros() const noexcept { return ones_.size(); }
  const std::vector<RowIndex>& row_ids() const noexcept { return row_ids_; }
  const std::vector<std::string>& column_ids() const noexcept { return column_ids_; }

  std::span<const std::uint32_t> column(std::size_t j) const;
  bool at(std::size_t row, std::size_t col) const;
  std::vector<std::uint8_t> dense_column(std::size_t j) const;
  // Number of ones in each row.
  std::vector<std::size_t> row_counts() const;

  bool operator==(const BinaryRelationMatrix&) const = default;

 private:
  std::string label_;
  std::vector<RowIndex> row_ids_;
  std::vector<std::string> column_ids_;
  std::vector<std::size_t> col_start_{0};
  std::vector<std::uint32_t> ones_;
};

// file id -> label; keys are column ids.
struct GroundTruth {
  std::map<std::string, Label> labels;

  bool operator==(const GroundTruth&) const = default;
};

// Row ids 1..n and column ids "1".."m".
std::vector<RowIndex> default_row_ids(std::size_t n);
std::vector<std::string> default_column_ids(std::size_t m);

// Entry (k, f) is the total count of message k over every run of file f.
// Columns are the distinct file ids in ascending order. A (file, parser)
// pair seen twice is a ValidationError.
RelationMatrix build_relation_matrix(const std::vector<ParserRun>& runs,
                                     const MessageCatalog& catalog,
                                     std::string dataset_label);

BinaryRelationMatrix binarize(const RelationMatrix& m);
inline BinaryRelationMatrix binarize(const BinaryRelationMatrix& m) { return m; }
RelationMatrix to_counts(const BinaryRelationMatrix& m);

// Columns of a followed by columns of b. Column ids without a dataset prefix
// are namespaced as `<dataset>/<id>`. Rows must match exactly.
BinaryRelationMatrix hconcat(const BinaryRelationMatrix& a, const BinaryRelationMatrix& b);
RelationMatrix hconcat(const RelationMatrix& a, const RelationMatrix& b);

struct RowFilterResult {
  BinaryRelationMatrix matrix;
  std::vector<RowIndex> removed;  // catalog row ids, ascending
};

// Removes constant rows (all zero or all one).
RowFilterResult drop_zero_variance_rows(const BinaryRelationMatrix& m);

// Fraction of ones per row. Throws PreconditionError when M == 0.
std::vector<double> row_means(const BinaryRelationMatrix& m);

// Parser x file totals of raw counts.
struct ParserCountMatrix {
  std::vector<std::string> parsers;  // catalog declaration order
  std::vector<std::string> column_ids;
  std::vector<std::uint64_t> counts;  // row-major, parsers.size() x column_ids.size()

  std::uint64_t at(std::size_t parser, std::size_t col) const {
    return counts[parser * column_ids.size() + col];
  }
};

ParserCountMatrix aggregate_by_parser(const RelationMatrix& m, const MessageCatalog& catalog);

// Matrix CSV:
//   # dataset=<label> n_rows=<N> n_cols=<M>
//   [# row_ids=<id>;<id>;...]      only when rows are not 1..N
//   [# column_ids=<id>;<id>;...]   only when columns are not "1".."M"
//   row,col,count
//   <row id>,<1-based column position>,<count>
std::string matrix_to_csv(const RelationMatrix& m);
RelationMatrix matrix_from_csv(std::string_view text);
void write_matrix(const RelationMatrix& m, const std::filesystem::path& path);
RelationMatrix read_matrix(const std::filesystem::path& path);

// CSV `file_id,label`.
std::string ground_truth_to_csv(const GroundTruth& truth);
GroundTruth ground_truth_from_csv(std::string_view text);

}  // namespace docstat
