#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "docstat/docstat.hpp"

namespace support {

namespace fs = std::filesystem;

inline fs::path fixture_dir() { return fs::path(DOCSTAT_FIXTURE_DIR); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("docstat-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// (parser, first row, last row) as published for the 955-row PDF catalog.
// The published listing stops at row 953; the closing xpdf_pdftops block
// (954-955) is inferred from the "two extra rows per parser" pattern.
inline const std::vector<std::tuple<std::string, std::size_t, std::size_t>>& table2_blocks() {
  static const std::vector<std::tuple<std::string, std::size_t, std::size_t>> blocks{
      {"caradoc_extract", 1, 196},       {"caradoc_stats", 197, 392},
      {"caradoc_stats_strict", 393, 588}, {"hammer", 589, 589},
      {"mutool_show", 590, 635},          {"mutool_clean", 636, 681},
      {"origami_pdfcop", 682, 682},       {"pdfium", 683, 683},
      {"pdfminer_dumppdf", 684, 703},     {"pdfminer_pdf2txt", 704, 723},
      {"pdftk_server", 724, 724},         {"pdftools_pdfid", 725, 729},
      {"pdftools_pdfparser", 730, 734},   {"peepdf", 735, 735},
      {"poppler_pdfinfo", 736, 792},      {"poppler_pdftocairo", 793, 849},
      {"poppler_pdftops", 850, 906},      {"qpdf", 907, 907},
      {"verapdf_greenfield", 908, 908},   {"verapdf_pdfbox", 909, 909},
      {"xpdf_pdfinfo", 910, 910},         {"xpdf_pdftops", 911, 911},
      {"caradoc_extract", 912, 913},      {"caradoc_stats", 914, 915},
      {"caradoc_stats_strict", 916, 917}, {"hammer", 918, 919},
      {"mutool_clean", 920, 921},         {"mutool_show", 922, 923},
      {"origami_pdfcop", 924, 925},       {"pdfium", 926, 927},
      {"pdfminer_dumppdf", 928, 929},     {"pdfminer_pdf2txt", 930, 931},
      {"pdftk_server", 932, 933},         {"pdftools_pdfid", 934, 935},
      {"pdftools_pdfparser", 936, 937},   {"peepdf", 938, 939},
      {"poppler_pdfinfo", 940, 941},      {"poppler_pdftocairo", 942, 943},
      {"poppler_pdftops", 944, 945},      {"qpdf", 946, 947},
      {"verapdf_greenfield", 948, 949},   {"verapdf_pdfbox", 950, 951},
      {"xpdf_pdfinfo", 952, 953},         {"xpdf_pdftops", 954, 955},
  };
  return blocks;
}

// With `pass_name`, each parser is invoked as `command <name> <file>`, which is
// how the stub parser script tells the parsers apart.
inline docstat::MessageCatalog table2_catalog(const std::string& command = "true",
                                              bool pass_name = false) {
  std::vector<docstat::ParserSpec> parsers;
  std::vector<docstat::MessagePattern> patterns;
  for (const auto& [name, first, last] : table2_blocks()) {
    bool known = false;
    for (const auto& p : parsers) known = known || p.name == name;
    if (!known) {
      std::vector<std::string> args{"{file}"};
      if (pass_name) args.insert(args.begin(), name);
      parsers.push_back({name, command, args, std::chrono::duration<double>(10.0)});
    }
    for (auto row = first; row <= last; ++row)
      patterns.push_back({row, name, "^" + name + ": message " + std::to_string(row) + "$",
                          "row " + std::to_string(row), docstat::PatternKind::kRegex});
  }
  return {std::move(parsers), std::move(patterns)};
}

// Stub corpus over the published catalog: file i mentions a few rows of a
// few parsers. Writes the files and manifest.csv into `dir`.
inline void write_stub_corpus(const fs::path& dir, std::size_t n_files) {
  std::ofstream manifest(dir / "manifest.csv");
  manifest << "file_id,path,ground_truth\n";
  const auto& blocks = table2_blocks();
  for (std::size_t i = 1; i <= n_files; ++i) {
    const auto name = "doc" + std::to_string(i) + ".pdf";
    std::ofstream f(dir / name);
    for (std::size_t b = 0; b < blocks.size(); b += i + 1) {
      const auto& [parser, first, last] = blocks[b];
      const auto row = first + (i * 7) % (last - first + 1);
      f << parser << ": message " << row << "\n";
      if (i % 2 == 0) f << parser << ": message " << row << "\n";
    }
    f << "caradoc_extract: unrelated noise\n";
    if (i == 3) f << "qpdf: fatal\n";
    manifest << i << "," << name << "," << (i % 3 == 0 ? "rejected" : "valid") << "\n";
  }
}

struct CommandResult {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

// Runs a shell command line; `status` is the exit code, or -1 on abnormal exit.
inline CommandResult run_command(const std::string& command) {
  CommandResult r;
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int raw = ::pclose(pipe);
  if (WIFEXITED(raw)) r.status = WEXITSTATUS(raw);
  return r;
}

inline std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

inline docstat::BinaryRelationMatrix random_binary(docstat::SplitRng& rng, std::size_t n,
                                                   std::size_t m, double density,
                                                   std::string label = "r") {
  std::vector<std::vector<std::uint32_t>> cols(m);
  for (auto& c : cols)
    for (std::uint32_t k = 0; k < n; ++k)
      if (rng.uniform() < density) c.push_back(k);
  return {std::move(label), docstat::default_row_ids(n), docstat::default_column_ids(m),
          std::move(cols)};
}

inline std::vector<std::vector<int>> dense(const docstat::BinaryRelationMatrix& m) {
  std::vector<std::vector<int>> d(m.n_rows(), std::vector<int>(m.n_cols(), 0));
  for (std::size_t j = 0; j < m.n_cols(); ++j)
    for (const auto k : m.column(j)) d[k][j] = 1;
  return d;
}

// Direct product formula, no logs until the end.
inline double product_likelihood(const std::vector<int>& f, const std::vector<double>& p) {
  double l = 1.0;
  for (std::size_t k = 0; k < f.size(); ++k) l *= f[k] ? p[k] : 1.0 - p[k];
  return l;
}

// AUC as the Mann-Whitney probability that a misclassified file outscores a
// correct one, ties counting one half. Scores may be +-inf.
inline double mann_whitney_auc(const std::vector<double>& scores, const std::vector<bool>& pos) {
  double wins = 0.0;
  std::size_t np = 0, nn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) (pos[i] ? np : nn)++;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!pos[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (pos[j]) continue;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(np) * static_cast<double>(nn));
}

// Two-pass textbook Pearson correlation.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Sum over cells of (O - E)^2 / E.
inline double chi_square_oracle(double a, double b, double c, double d) {
  const double obs[2][2] = {{a, b}, {c, d}};
  const double n = a + b + c + d;
  double x = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double e = (obs[i][0] + obs[i][1]) * (obs[0][j] + obs[1][j]) / n;
      x += (obs[i][j] - e) * (obs[i][j] - e) / e;
    }
  return x;
}

inline double kl_bernoulli(double p, double q) {
  double d = 0.0;
  if (p > 0) d += p * std::log(p / q);
  if (p < 1) d += (1 - p) * std::log((1 - p) / (1 - q));
  return d;
}

}  // namespace support
