#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace docstat::cli {

namespace fs = std::filesystem;

struct RunConfig {
  fs::path catalog;
  fs::path manifest;
  fs::path out;
  std::string dataset;  // defaults to the manifest file stem
  std::size_t parallelism = 1;
  bool exit_rows = false;
  fs::path logs;  // ingest only
};

struct AnalyzeConfig {
  fs::path matrix_a;
  fs::path matrix_b;
  std::optional<fs::path> truth_a;
  std::optional<fs::path> truth_b;
  fs::path out;
  double alpha = 0.0;
  double threshold = 1.0;  // lambda scale
  bool leave_one_out = false;
  bool plot = true;
};

struct ExploreConfig {
  std::vector<fs::path> matrices;
  std::vector<fs::path> truths;  // aligned with matrices when given
  std::optional<fs::path> catalog;
  fs::path out;
  std::size_t components = 3;
  bool plot = true;
};

struct SynthConfig {
  fs::path out;
  std::size_t n_messages = 200;
  std::size_t size_a = 2000;
  std::size_t size_b = 2000;
  double contamination_a = 0.2;
  double contamination_b = 0.5;
  double p_low = 0.01;
  double p_high = 0.3;
  bool identical = false;
  double b_only_fraction = 0.0;  // messages with p_a = 0
  std::size_t parsers = 10;
  std::uint64_t seed = 1;
  std::string label_a = "a";
  std::string label_b = "b";
};

struct ChisqConfig {
  std::uint64_t a_valid = 0, a_rejected = 0, b_valid = 0, b_rejected = 0;
};

// Each command writes its reports into the output directory and a short
// summary to `log`. Library errors propagate as exceptions.
void cmd_run(const RunConfig& config, std::ostream& log);
void cmd_ingest(const RunConfig& config, std::ostream& log);
void cmd_analyze(const AnalyzeConfig& config, std::ostream& log);
void cmd_explore(const ExploreConfig& config, std::ostream& log);
void cmd_synth(const SynthConfig& config, std::ostream& log);
void cmd_chisq(const ChisqConfig& config, std::ostream& log);

}  // namespace docstat::cli
