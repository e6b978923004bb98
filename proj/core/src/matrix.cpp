#include "docstat/matrix.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "docstat/csv.hpp"
#include "docstat/errors.hpp"

namespace docstat {

namespace {

void check_shape(std::size_t n_rows, std::size_t n_cols, std::size_t n_columns_given) {
  if (n_cols != n_columns_given)
    throw PreconditionError("column id count " + std::to_string(n_cols) +
                            " does not match column data " + std::to_string(n_columns_given));
  if (n_rows > UINT32_MAX) throw PreconditionError("too many rows");
}

std::string join_ids(const auto& ids) {
  std::ostringstream ss;
  bool first = true;
  for (const auto& id : ids) {
    if (!first) ss << ';';
    ss << id;
    first = false;
  }
  return ss.str();
}

bool natural_less(const std::string& a, const std::string& b) {
  const bool a_num = !a.empty() && std::all_of(a.begin(), a.end(), ::isdigit);
  const bool b_num = !b.empty() && std::all_of(b.begin(), b.end(), ::isdigit);
  if (a_num && b_num) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
  return a < b;
}

}  // namespace

std::vector<RowIndex> default_row_ids(std::size_t n) {
  std::vector<RowIndex> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i + 1;
  return ids;
}

std::vector<std::string> default_column_ids(std::size_t m) {
  std::vector<std::string> ids(m);
  for (std::size_t j = 0; j < m; ++j) ids[j] = std::to_string(j + 1);
  return ids;
}

RelationMatrix::RelationMatrix(std::string dataset_label, std::vector<RowIndex> row_ids,
                               std::vector<std::string> column_ids,
                               std::vector<std::vector<CountEntry>> columns)
    : label_(std::move(dataset_label)),
      row_ids_(std::move(row_ids)),
      column_ids_(std::move(column_ids)) {
  check_shape(row_ids_.size(), column_ids_.size(), columns.size());
  col_start_.reserve(columns.size() + 1);
  for (auto& col : columns) {
    std::sort(col.begin(), col.end(),
              [](const CountEntry& x, const CountEntry& y) { return x.row < y.row; });
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (col[i].row >= row_ids_.size())
        throw PreconditionError("entry row position out of range");
      if (col[i].count == 0) throw PreconditionError("stored counts must be positive");
      if (i > 0 && col[i].row == col[i - 1].row)
        throw PreconditionError("duplicate entry in column");
    }
    entries_.insert(entries_.end(), col.begin(), col.end());
    col_start_.push_back(entries_.size());
  }
}

std::span<const CountEntry> RelationMatrix::column(std::size_t j) const {
  return std::span<const CountEntry>(entries_).subspan(col_start_.at(j),
                                                       col_start_.at(j + 1) - col_start_[j]);
}

std::uint32_t RelationMatrix::count(std::size_t row, std::size_t col) const {
  const auto c = column(col);
  const auto it = std::lower_bound(c.begin(), c.end(), row,
                                   [](const CountEntry& e, std::size_t r) { return e.row < r; });
  return it != c.end() && it->row == row ? it->count : 0;
}

BinaryRelationMatrix::BinaryRelationMatrix(std::string dataset_label,
                                           std::vector<RowIndex> row_ids,
                                           std::vector<std::string> column_ids,
                                           std::vector<std::vector<std::uint32_t>> columns)
    : label_(std::move(dataset_label)),
      row_ids_(std::move(row_ids)),
      column_ids_(std::move(column_ids)) {
  check_shape(row_ids_.size(), column_ids_.size(), columns.size());
  col_start_.reserve(columns.size() + 1);
  for (auto& col : columns) {
    std::sort(col.begin(), col.end());
    if (std::adjacent_find(col.begin(), col.end()) != col.end())
      throw PreconditionError("duplicate entry in column");
    if (!col.empty() && col.back() >= row_ids_.size())
      throw PreconditionError("entry row position out of range");
    ones_.insert(ones_.end(), col.begin(), col.end());
    col_start_.push_back(ones_.size());
  }
}

std::span<const std::uint32_t> BinaryRelationMatrix::column(std::size_t j) const {
  return std::span<const std::uint32_t>(ones_).subspan(col_start_.at(j),
                                                       col_start_.at(j + 1) - col_start_[j]);
}

bool BinaryRelationMatrix::at(std::size_t row, std::size_t col) const {
  const auto c = column(col);
  return std::binary_search(c.begin(), c.end(), static_cast<std::uint32_t>(row));
}

std::vector<std::uint8_t> BinaryRelationMatrix::dense_column(std::size_t j) const {
  std::vector<std::uint8_t> out(n_rows(), 0);
  for (const auto r : column(j)) out[r] = 1;
  return out;
}

std::vector<std::size_t> BinaryRelationMatrix::row_counts() const {
  std::vector<std::size_t> counts(n_rows(), 0);
  for (const auto r : ones_) ++counts[r];
  return counts;
}

RelationMatrix build_relation_matrix(const std::vector<ParserRun>& runs,
                                     const MessageCatalog& catalog, std::string dataset_label) {
  std::set<std::pair<FileId, std::string>> seen;
  std::map<FileId, std::map<RowIndex, std::size_t>> by_file;
  for (const auto& run : runs) {
    if (catalog.find_parser(run.parser) == nullptr)
      throw PreconditionError("run for undeclared parser '" + run.parser + "'");
    if (!seen.insert({run.file_id, run.parser}).second)
      throw ValidationError("duplicate run for file " + std::to_string(run.file_id) +
                            ", parser '" + run.parser + "'");
    auto& column = by_file[run.file_id];
    for (const auto& [row, n] : match_messages(run, catalog)) column[row] += n;
  }

  std::vector<std::string> column_ids;
  std::vector<std::vector<CountEntry>> columns;
  column_ids.reserve(by_file.size());
  columns.reserve(by_file.size());
  for (const auto& [file_id, counts] : by_file) {
    column_ids.push_back(std::to_string(file_id));
    auto& col = columns.emplace_back();
    for (const auto& [row, n] : counts) {
      if (n > UINT32_MAX) throw ValidationError("message count overflow", row);
      col.push_back({static_cast<std::uint32_t>(row - 1), static_cast<std::uint32_t>(n)});
    }
  }
  return RelationMatrix(std::move(dataset_label), default_row_ids(catalog.size()),
                        std::move(column_ids), std::move(columns));
}

BinaryRelationMatrix binarize(const RelationMatrix& m) {
  std::vector<std::vector<std::uint32_t>> columns(m.n_cols());
  for (std::size_t j = 0; j < m.n_cols(); ++j)
    for (const auto& e : m.column(j)) columns[j].push_back(e.row);
  return BinaryRelationMatrix(m.dataset_label(), m.row_ids(), m.column_ids(), std::move(columns));
}

RelationMatrix to_counts(const BinaryRelationMatrix& m) {
  std::vector<std::vector<CountEntry>> columns(m.n_cols());
  for (std::size_t j = 0; j < m.n_cols(); ++j)
    for (const auto r : m.column(j)) columns[j].push_back({r, 1});
  return RelationMatrix(m.dataset_label(), m.row_ids(), m.column_ids(), std::move(columns));
}

namespace {

void check_same_rows(const std::vector<RowIndex>& a, const std::vector<RowIndex>& b) {
  if (a == b) return;
  const auto n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  std::string where = i < n ? "row " + std::to_string(a[i]) + " vs " + std::to_string(b[i])
                            : "row count " + std::to_string(a.size()) + " vs " +
                                  std::to_string(b.size());
  throw ValidationError("hconcat: row sets differ at position " + std::to_string(i + 1) + " (" +
                            where + ")",
                        i < n ? a[i] : 0);
}

template <typename Matrix, typename Entry>
Matrix hconcat_impl(const Matrix& a, const Matrix& b) {
  check_same_rows(a.row_ids(), b.row_ids());
  auto qualify = [](const Matrix& m, const std::string& id) {
    return id.find('/') == std::string::npos ? m.dataset_label() + "/" + id : id;
  };
  std::vector<std::string> ids;
  std::vector<std::vector<Entry>> columns;
  ids.reserve(a.n_cols() + b.n_cols());
  columns.reserve(a.n_cols() + b.n_cols());
  for (const auto* m : {&a, &b}) {
    for (std::size_t j = 0; j < m->n_cols(); ++j) {
      ids.push_back(qualify(*m, m->column_ids()[j]));
      const auto c = m->column(j);
      columns.emplace_back(c.begin(), c.end());
    }
  }
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size())
    throw ValidationError("hconcat: column ids collide after namespacing");
  std::string label = a.dataset_label() == b.dataset_label()
                          ? a.dataset_label()
                          : a.dataset_label() + "+" + b.dataset_label();
  return Matrix(std::move(label), a.row_ids(), std::move(ids), std::move(columns));
}

}  // namespace

BinaryRelationMatrix hconcat(const BinaryRelationMatrix& a, const BinaryRelationMatrix& b) {
  return hconcat_impl<BinaryRelationMatrix, std::uint32_t>(a, b);
}

RelationMatrix hconcat(const RelationMatrix& a, const RelationMatrix& b) {
  return hconcat_impl<RelationMatrix, CountEntry>(a, b);
}

RowFilterResult drop_zero_variance_rows(const BinaryRelationMatrix& m) {
  const auto counts = m.row_counts();
  std::vector<std::uint32_t> new_pos(m.n_rows(), UINT32_MAX);
  std::vector<RowIndex> kept;
  RowFilterResult result;
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    if (counts[i] == 0 || counts[i] == m.n_cols()) {
      result.removed.push_back(m.row_ids()[i]);
    } else {
      new_pos[i] = static_cast<std::uint32_t>(kept.size());
      kept.push_back(m.row_ids()[i]);
    }
  }
  std::vector<std::vector<std::uint32_t>> columns(m.n_cols());
  for (std::size_t j = 0; j < m.n_cols(); ++j)
    for (const auto r : m.column(j))
      if (new_pos[r] != UINT32_MAX) columns[j].push_back(new_pos[r]);
  result.matrix =
      BinaryRelationMatrix(m.dataset_label(), std::move(kept), m.column_ids(), std::move(columns));
  std::sort(result.removed.begin(), result.removed.end());
  return result;
}

std::vector<double> row_means(const BinaryRelationMatrix& m) {
  if (m.n_cols() == 0) throw PreconditionError("row_means: matrix has no files");
  const auto counts = m.row_counts();
  std::vector<double> means(counts.size());
  const auto total = static_cast<double>(m.n_cols());
  for (std::size_t i = 0; i < counts.size(); ++i) means[i] = static_cast<double>(counts[i]) / total;
  return means;
}

ParserCountMatrix aggregate_by_parser(const RelationMatrix& m, const MessageCatalog& catalog) {
  if (m.n_rows() != catalog.size())
    throw PreconditionError("aggregate_by_parser: matrix has " + std::to_string(m.n_rows()) +
                            " rows, catalog has " + std::to_string(catalog.size()));
  ParserCountMatrix out;
  std::map<std::string, std::size_t, std::less<>> index;
  for (const auto& p : catalog.parsers()) {
    index.emplace(p.name, out.parsers.size());
    out.parsers.push_back(p.name);
  }
  std::vector<std::size_t> owner(m.n_rows());
  for (std::size_t i = 0; i < m.n_rows(); ++i)
    owner[i] = index.find(catalog.owner(m.row_ids()[i]))->second;

  out.column_ids = m.column_ids();
  out.counts.assign(out.parsers.size() * m.n_cols(), 0);
  for (std::size_t j = 0; j < m.n_cols(); ++j)
    for (const auto& e : m.column(j)) out.counts[owner[e.row] * m.n_cols() + j] += e.count;
  return out;
}

std::string matrix_to_csv(const RelationMatrix& m) {
  std::ostringstream out;
  out << "# dataset=" << m.dataset_label() << " n_rows=" << m.n_rows() << " n_cols=" << m.n_cols()
      << "\n";
  if (m.row_ids() != default_row_ids(m.n_rows())) out << "# row_ids=" << join_ids(m.row_ids()) << "\n";
  if (m.column_ids() != default_column_ids(m.n_cols()))
    out << "# column_ids=" << join_ids(m.column_ids()) << "\n";
  out << "row,col,count\n";
  for (std::size_t j = 0; j < m.n_cols(); ++j)
    for (const auto& e : m.column(j))
      out << m.row_ids()[e.row] << "," << (j + 1) << "," << e.count << "\n";
  return out.str();
}

RelationMatrix matrix_from_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  std::size_t line = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("matrix CSV line " + std::to_string(line + 1) + ": " + msg);
  };

  if (rows.empty() || rows[0].rfind("# dataset=", 0) != 0) throw fail("missing '# dataset=' header");
  std::string label;
  long long n_rows = -1, n_cols = -1;
  {
    std::istringstream hs(rows[0].substr(2));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw fail("bad header token '" + tok + "'");
      const auto key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "dataset") label = value;
      else if (key == "n_rows") n_rows = csv::parse_integer(value);
      else if (key == "n_cols") n_cols = csv::parse_integer(value);
    }
    if (n_rows < 0 || n_cols < 0) throw fail("header needs n_rows and n_cols");
  }

  auto row_ids = default_row_ids(static_cast<std::size_t>(n_rows));
  auto column_ids = default_column_ids(static_cast<std::size_t>(n_cols));
  for (line = 1; line < rows.size() && rows[line].rfind("#", 0) == 0; ++line) {
    const auto& r = rows[line];
    if (r.rfind("# row_ids=", 0) == 0) {
      row_ids.clear();
      for (const auto& f : csv::split(r.substr(10), ';'))
        row_ids.push_back(static_cast<RowIndex>(csv::parse_integer(f)));
    } else if (r.rfind("# column_ids=", 0) == 0) {
      column_ids = csv::split(r.substr(13), ';');
      if (n_cols == 0) column_ids.clear();
    }
  }
  if (row_ids.size() != static_cast<std::size_t>(n_rows)) throw fail("row_ids length mismatch");
  if (column_ids.size() != static_cast<std::size_t>(n_cols))
    throw fail("column_ids length mismatch");
  if (line >= rows.size() || csv::trim(rows[line]) != "row,col,count")
    throw fail("expected 'row,col,count' header");

  std::map<RowIndex, std::uint32_t> position;
  for (std::size_t i = 0; i < row_ids.size(); ++i)
    position[row_ids[i]] = static_cast<std::uint32_t>(i);

  std::vector<std::vector<CountEntry>> columns(static_cast<std::size_t>(n_cols));
  for (++line; line < rows.size(); ++line) {
    if (csv::trim(rows[line]).empty()) continue;
    const auto f = csv::split(rows[line]);
    if (f.size() != 3) throw fail("expected 3 fields");
    const auto row = csv::parse_integer(f[0]);
    const auto col = csv::parse_integer(f[1]);
    const auto count = csv::parse_integer(f[2]);
    const auto it = position.find(static_cast<RowIndex>(row));
    if (row < 1 || it == position.end()) throw fail("unknown row " + f[0]);
    if (col < 1 || col > n_cols) throw fail("column out of range " + f[1]);
    if (count < 1 || count > UINT32_MAX) throw fail("count must be a positive 32-bit value");
    columns[static_cast<std::size_t>(col - 1)].push_back(
        {it->second, static_cast<std::uint32_t>(count)});
  }
  try {
    return RelationMatrix(std::move(label), std::move(row_ids), std::move(column_ids),
                          std::move(columns));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("matrix CSV: ") + e.what());
  }
}

void write_matrix(const RelationMatrix& m, const std::filesystem::path& path) {
  csv::write_file_atomic(path, matrix_to_csv(m));
}

RelationMatrix read_matrix(const std::filesystem::path& path) {
  return matrix_from_csv(csv::read_file(path));
}

std::string ground_truth_to_csv(const GroundTruth& truth) {
  std::vector<std::string> keys;
  keys.reserve(truth.labels.size());
  for (const auto& [id, _] : truth.labels) keys.push_back(id);
  std::sort(keys.begin(), keys.end(), natural_less);
  std::string out = "file_id,label\n";
  for (const auto& id : keys) {
    out += id;
    out += ',';
    out += to_string(truth.labels.at(id));
    out += '\n';
  }
  return out;
}

GroundTruth ground_truth_from_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || csv::trim(rows[0]) != "file_id,label")
    throw ParseError("ground truth CSV: expected header 'file_id,label'");
  GroundTruth truth;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (csv::trim(rows[i]).empty()) continue;
    const auto f = csv::split(rows[i]);
    if (f.size() != 2)
      throw ParseError("ground truth CSV line " + std::to_string(i + 1) + ": expected 2 fields");
    const auto label = parse_label(f[1]);
    if (!label) continue;
    if (!truth.labels.emplace(std::string(csv::trim(f[0])), *label).second)
      throw ParseError("ground truth CSV: duplicate file id " + f[0]);
  }
  return truth;
}

}  // namespace docstat
