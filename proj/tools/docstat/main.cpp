#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "docstat/errors.hpp"

namespace {

using docstat::cli::fs::path;

void add_plot_flag(CLI::App* cmd, bool& plot) {
  cmd->add_flag("--plot,!--no-plot", plot, "Write SVG plots")->envname("DOCSTAT_PLOT");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace docstat::cli;

  CLI::App app{"Statistical file-format compliance analysis over parser ensembles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "docstat 0.1.0");

  RunConfig run;
  auto add_corpus_options = [](CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--catalog", c.catalog, "Message catalog JSON")
        ->required()
        ->envname("DOCSTAT_CATALOG");
    cmd->add_option("--manifest", c.manifest, "Corpus manifest CSV")
        ->required()
        ->envname("DOCSTAT_MANIFEST");
    cmd->add_option("--out", c.out, "Output directory")->required()->envname("DOCSTAT_OUT");
    cmd->add_option("--dataset", c.dataset, "Dataset label (default: manifest file stem)");
    cmd->add_flag("--exit-rows", c.exit_rows, "Add one nonzero-exit row per parser");
  };
  auto* run_cmd = app.add_subcommand("run", "Run every parser over a corpus");
  add_corpus_options(run_cmd, run);
  run_cmd->add_option("--parallelism", run.parallelism, "Concurrent parser processes")
      ->check(CLI::PositiveNumber)
      ->envname("DOCSTAT_PARALLELISM");

  RunConfig ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build a matrix from captured stderr logs");
  add_corpus_options(ingest_cmd, ingest);
  ingest_cmd->add_option("--logs", ingest.logs, "Directory of captured logs")
      ->required()
      ->check(CLI::ExistingDirectory);

  AnalyzeConfig analyze;
  std::string truth_a, truth_b;
  auto* analyze_cmd = app.add_subcommand("analyze", "Score both corpora with the lambda statistic");
  analyze_cmd->add_option("--matrix-a", analyze.matrix_a, "Matrix CSV of corpus A (mostly valid)")
      ->required();
  analyze_cmd->add_option("--matrix-b", analyze.matrix_b, "Matrix CSV of corpus B (mostly rejected)")
      ->required();
  analyze_cmd->add_option("--truth-a", truth_a, "Ground truth CSV for A");
  analyze_cmd->add_option("--truth-b", truth_b, "Ground truth CSV for B");
  analyze_cmd->add_option("--out", analyze.out, "Output directory")
      ->required()
      ->envname("DOCSTAT_OUT");
  analyze_cmd->add_option("--alpha", analyze.alpha, "Additive smoothing")
      ->check(CLI::NonNegativeNumber)
      ->envname("DOCSTAT_ALPHA");
  analyze_cmd->add_option("--threshold", analyze.threshold, "Flag files with lambda > T")
      ->check(CLI::NonNegativeNumber)
      ->envname("DOCSTAT_THRESHOLD");
  analyze_cmd->add_flag("--leave-one-out", analyze.leave_one_out,
                        "Estimate own probabilities without the scored file");
  add_plot_flag(analyze_cmd, analyze.plot);

  ExploreConfig explore;
  std::string explore_catalog;
  auto* explore_cmd = app.add_subcommand("explore", "PCA and parser redundancy reports");
  explore_cmd->add_option("--matrix", explore.matrices, "Matrix CSV (repeatable)")->required();
  explore_cmd->add_option("--truth", explore.truths, "Ground truth CSV, one per --matrix");
  explore_cmd->add_option("--catalog", explore_catalog, "Message catalog JSON")
      ->envname("DOCSTAT_CATALOG");
  explore_cmd->add_option("--out", explore.out, "Output directory")
      ->required()
      ->envname("DOCSTAT_OUT");
  explore_cmd->add_option("--components", explore.components, "Principal components to keep")
      ->check(CLI::PositiveNumber);
  add_plot_flag(explore_cmd, explore.plot);

  SynthConfig synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic pair of corpora");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required()->envname("DOCSTAT_OUT");
  synth_cmd->add_option("--messages", synth.n_messages)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--size-a", synth.size_a)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--size-b", synth.size_b)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--contamination-a", synth.contamination_a)->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--contamination-b", synth.contamination_b)->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--p-low", synth.p_low)->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--p-high", synth.p_high)->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_flag("--identical", synth.identical, "Use the same probabilities for A and B");
  synth_cmd->add_option("--b-only-fraction", synth.b_only_fraction,
                        "Fraction of messages that never fire in A");
  synth_cmd->add_option("--parsers", synth.parsers, "Parsers in the synthetic catalog")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed)->envname("DOCSTAT_SEED");
  synth_cmd->add_option("--label-a", synth.label_a);
  synth_cmd->add_option("--label-b", synth.label_b);

  ChisqConfig chisq;
  auto* chisq_cmd = app.add_subcommand("chisq", "Chi-square test on a 2x2 table");
  chisq_cmd->add_option("a_valid", chisq.a_valid)->required();
  chisq_cmd->add_option("a_rejected", chisq.a_rejected)->required();
  chisq_cmd->add_option("b_valid", chisq.b_valid)->required();
  chisq_cmd->add_option("b_rejected", chisq.b_rejected)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) cmd_run(run, std::cout);
    if (*ingest_cmd) cmd_ingest(ingest, std::cout);
    if (*analyze_cmd) {
      if (!truth_a.empty()) analyze.truth_a = path(truth_a);
      if (!truth_b.empty()) analyze.truth_b = path(truth_b);
      cmd_analyze(analyze, std::cout);
    }
    if (*explore_cmd) {
      if (!explore_catalog.empty()) explore.catalog = path(explore_catalog);
      cmd_explore(explore, std::cout);
    }
    if (*synth_cmd) cmd_synth(synth, std::cout);
    if (*chisq_cmd) cmd_chisq(chisq, std::cout);
  } catch (const docstat::Error& e) {
    std::cerr << "docstat: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "docstat: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
