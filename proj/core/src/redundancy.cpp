#include "docstat/redundancy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

#include "docstat/csv.hpp"
#include "docstat/errors.hpp"

namespace docstat {

double median(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("median of an empty set");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

MessageCorrelation message_correlations(const BinaryRelationMatrix& m) {
  if (m.n_cols() < 2) throw PreconditionError("message_correlations needs at least two files");
  auto filtered = drop_zero_variance_rows(m);
  const auto& x = filtered.matrix;
  const std::size_t n = x.n_rows();
  if (n < 2)
    throw PreconditionError("message_correlations: only " + std::to_string(n) +
                            " rows vary across files");

  // Rows as bitsets; r follows from integer co-occurrence counts:
  //   r = (M n11 - a b) / sqrt(a (M - a) b (M - b)).
  const std::size_t words = (x.n_cols() + 63) / 64;
  std::vector<std::uint64_t> bits(n * words, 0);
  for (std::size_t j = 0; j < x.n_cols(); ++j)
    for (const auto r : x.column(j)) bits[r * words + j / 64] |= std::uint64_t{1} << (j % 64);
  const auto ones = x.row_counts();
  const auto total = static_cast<long long>(x.n_cols());

  MessageCorrelation out;
  out.rows = x.row_ids();
  out.removed = std::move(filtered.removed);
  out.r.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.r[i * n + i] = 1.0;
    const auto a = static_cast<long long>(ones[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      long long both = 0;
      for (std::size_t w = 0; w < words; ++w)
        both += std::popcount(bits[i * words + w] & bits[j * words + w]);
      const auto b = static_cast<long long>(ones[j]);
      const double num = static_cast<double>(total * both - a * b);
      const double den = std::sqrt(static_cast<double>(a * (total - a)) *
                                   static_cast<double>(b * (total - b)));
      const double r = std::clamp(num / den, -1.0, 1.0);
      out.r[i * n + j] = r;
      out.r[j * n + i] = r;
    }
  }
  return out;
}

ParserRedundancy parser_median_correlation(const MessageCorrelation& c,
                                           const MessageCatalog& catalog) {
  std::map<std::string, std::vector<std::size_t>, std::less<>> owned;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const auto row = c.rows[i];
    if (row < 1 || row > catalog.size())
      throw PreconditionError("correlation row " + std::to_string(row) + " not in catalog");
    owned[catalog.owner(row)].push_back(i);
  }

  ParserRedundancy out;
  std::vector<const std::vector<std::size_t>*> groups;
  for (const auto& p : catalog.parsers()) {
    const auto it = owned.find(p.name);
    if (it == owned.end()) {
      out.excluded.push_back(p.name);
    } else {
      out.parsers.push_back(p.name);
      groups.push_back(&it->second);
    }
  }

  const auto np = out.parsers.size();
  out.median.assign(np * np, 0.0);
  std::vector<double> values;
  for (std::size_t a = 0; a < np; ++a) {
    for (std::size_t b = a; b < np; ++b) {
      values.clear();
      const auto& ra = *groups[a];
      const auto& rb = *groups[b];
      if (a == b) {
        for (std::size_t x = 0; x < ra.size(); ++x)
          for (std::size_t y = x + 1; y < ra.size(); ++y) values.push_back(c.at(ra[x], ra[y]));
        if (values.empty()) values.push_back(1.0);
      } else {
        for (const auto i : ra)
          for (const auto j : rb) values.push_back(c.at(i, j));
      }
      const double med = median(values);
      out.median[a * np + b] = med;
      out.median[b * np + a] = med;
    }
  }
  return out;
}

std::vector<RankedParser> rank_parsers(const ParserRedundancy& r) {
  const auto np = r.parsers.size();
  std::vector<RankedParser> ranked(np);
  for (std::size_t a = 0; a < np; ++a) {
    ranked[a].name = r.parsers[a];
    std::vector<double> off;
    for (std::size_t b = 0; b < np; ++b)
      if (b != a) off.push_back(r.at(a, b));
    if (!off.empty()) ranked[a].sort_key = median(std::move(off));
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedParser& x, const RankedParser& y) {
    const double kx = x.sort_key.value_or(0.0), ky = y.sort_key.value_or(0.0);
    if (kx != ky) return kx < ky;
    return x.name < y.name;
  });
  for (std::size_t i = 0; i < np; ++i) ranked[i].rank = i + 1;
  return ranked;
}

std::string redundancy_matrix_to_csv(const ParserRedundancy& r,
                                     const std::vector<std::string>& order) {
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < r.parsers.size(); ++i) index.emplace(r.parsers[i], i);
  std::vector<std::size_t> pos;
  for (const auto& name : order) {
    const auto it = index.find(name);
    if (it == index.end()) throw PreconditionError("unknown parser in order: " + name);
    pos.push_back(it->second);
  }
  std::ostringstream out;
  out << "parser";
  for (const auto& name : order) out << ',' << name;
  out << '\n';
  for (std::size_t a = 0; a < pos.size(); ++a) {
    out << order[a];
    for (const auto b : pos) out << ',' << csv::format_real(r.at(pos[a], b));
    out << '\n';
  }
  return out.str();
}

ParserRedundancy redundancy_matrix_from_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty()) throw ParseError("redundancy CSV: empty");
  const auto header = csv::split(rows[0]);
  if (header.empty() || header[0] != "parser")
    throw ParseError("redundancy CSV: expected header starting with 'parser'");
  ParserRedundancy r;
  r.parsers.assign(header.begin() + 1, header.end());
  const auto np = r.parsers.size();
  r.median.assign(np * np, 0.0);
  std::size_t a = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (csv::trim(rows[i]).empty()) continue;
    const auto f = csv::split(rows[i]);
    if (f.size() != np + 1 || a >= np || f[0] != r.parsers[a])
      throw ParseError("redundancy CSV line " + std::to_string(i + 1) + ": malformed");
    for (std::size_t b = 0; b < np; ++b) r.median[a * np + b] = csv::parse_real(f[b + 1]);
    ++a;
  }
  if (a != np) throw ParseError("redundancy CSV: matrix is not square");
  return r;
}

std::string ranking_to_csv(const std::vector<RankedParser>& ranking) {
  std::ostringstream out;
  out << "parser,sort_key,rank\n";
  for (const auto& p : ranking)
    out << p.name << ',' << (p.sort_key ? csv::format_real(*p.sort_key) : std::string{}) << ','
        << p.rank << '\n';
  return out.str();
}

std::vector<RankedParser> ranking_from_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || csv::trim(rows[0]) != "parser,sort_key,rank")
    throw ParseError("ranking CSV: expected header 'parser,sort_key,rank'");
  std::vector<RankedParser> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (csv::trim(rows[i]).empty()) continue;
    const auto f = csv::split(rows[i]);
    if (f.size() != 3)
      throw ParseError("ranking CSV line " + std::to_string(i + 1) + ": expected 3 fields");
    RankedParser p;
    p.name = f[0];
    if (!csv::trim(f[1]).empty()) p.sort_key = csv::parse_real(f[1]);
    p.rank = static_cast<std::size_t>(csv::parse_integer(f[2]));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace docstat
