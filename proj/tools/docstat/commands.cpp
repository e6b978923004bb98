#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "docstat/docstat.hpp"
#include "svg.hpp"

namespace docstat::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void write(const fs::path& path, const std::string& content) {
  csv::write_file_atomic(path, content);
}

std::string sanitize(std::string s) {
  for (auto& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '_';
  return s.empty() ? std::string("dataset") : s;
}

// key=value lines, in insertion order.
class Summary {
 public:
  template <typename T>
  void add(const std::string& key, const T& value) {
    std::ostringstream ss;
    if constexpr (std::is_floating_point_v<T>)
      ss << csv::format_real(value);
    else
      ss << value;
    lines_.push_back(key + "=" + ss.str());
  }
  std::string str() const {
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

void write_corpus_outputs(const fs::path& out, const CorpusManifest& manifest,
                          const MessageCatalog& catalog, const std::vector<ParserRun>& runs,
                          std::ostream& log) {
  const auto matrix = build_relation_matrix(runs, catalog, manifest.dataset_label);
  write_matrix(matrix, out / "matrix.csv");

  std::ostringstream runs_csv;
  runs_csv << "file_id,parser,exit_code,duration_s,timed_out\n";
  std::size_t timeouts = 0;
  for (const auto& r : runs) {
    runs_csv << r.file_id << ',' << r.parser << ','
             << (r.exit_code ? std::to_string(*r.exit_code) : std::string{}) << ','
             << csv::format_real(r.duration_s) << ',' << (r.timed_out ? "true" : "false") << '\n';
    timeouts += r.timed_out ? 1 : 0;
  }
  write(out / "runs.csv", runs_csv.str());

  GroundTruth truth;
  for (const auto& e : manifest.entries)
    if (e.ground_truth) truth.labels.emplace(std::to_string(e.file_id), *e.ground_truth);
  if (!truth.labels.empty()) write(out / "truth.csv", ground_truth_to_csv(truth));

  std::uint64_t firings = 0;
  for (std::size_t j = 0; j < matrix.n_cols(); ++j)
    for (const auto& e : matrix.column(j)) firings += e.count;

  Summary s;
  s.add("dataset", manifest.dataset_label);
  s.add("files", manifest.entries.size());
  s.add("parsers", catalog.parsers().size());
  s.add("messages", catalog.size());
  s.add("runs", runs.size());
  s.add("timeouts", timeouts);
  s.add("message_firings", firings);
  s.add("nonzero_entries", matrix.nonzeros());
  write(out / "summary.txt", s.str());
  log << s.str();
}

MessageCatalog catalog_for(const RunConfig& config) {
  auto catalog = load_catalog(config.catalog);
  return config.exit_rows ? catalog.with_exit_rows() : catalog;
}

CorpusManifest manifest_for(const RunConfig& config) {
  const auto label = config.dataset.empty() ? config.manifest.stem().string() : config.dataset;
  return load_manifest(config.manifest, label);
}

// Histogram of log10(lambda) over the finite scores.
std::string lambda_histogram(const std::vector<MisclassificationScore>& scores,
                             const std::string& title) {
  std::vector<double> finite;
  std::size_t pos_inf = 0, neg_inf = 0, indeterminate = 0;
  for (const auto& s : scores) {
    if (s.indeterminate) ++indeterminate;
    else if (s.log_lambda == kInf) ++pos_inf;
    else if (s.log_lambda == -kInf) ++neg_inf;
    else finite.push_back(s.log_lambda / std::log(10.0));
  }
  constexpr std::size_t kBins = 40;
  double lo = 0.0, hi = 0.0;
  if (!finite.empty()) {
    lo = std::min(0.0, *std::min_element(finite.begin(), finite.end()));
    hi = std::max(0.0, *std::max_element(finite.begin(), finite.end()));
  }
  if (hi <= lo) hi = lo + 1.0;
  std::vector<double> edges(kBins + 1), counts(kBins, 0.0);
  for (std::size_t i = 0; i <= kBins; ++i) edges[i] = lo + (hi - lo) * static_cast<double>(i) / kBins;
  for (const double v : finite) {
    auto bin = static_cast<std::size_t>((v - lo) / (hi - lo) * kBins);
    counts[std::min(bin, kBins - 1)] += 1.0;
  }
  std::ostringstream note;
  note << "+inf: " << pos_inf << "  -inf: " << neg_inf << "  indeterminate: " << indeterminate;
  return svg::histogram(edges, counts, {title, "log10 lambda", "files"}, 0.0, note.str());
}

std::string roc_plot(const RocCurve& curve, const std::string& title) {
  svg::Series s{"ROC", {}, {}};
  for (const auto& p : curve.points) {
    s.x.push_back(p.p_fa);
    s.y.push_back(p.p_d);
  }
  return svg::line_chart({s}, {title + " (AUC " + csv::format_real(curve.auc) + ")",
                               "probability of false alarm", "probability of detection"},
                         true, true);
}

std::string flagged_csv(const std::vector<std::string>& ids) {
  std::string out = "file_id\n";
  for (const auto& id : ids) out += id + "\n";
  return out;
}

void analyze_direction(const std::string& tag, const BinaryRelationMatrix& own,
                       const BinaryRelationMatrix& other, const std::optional<fs::path>& truth_path,
                       Label local_label, const AnalyzeConfig& config, Summary& summary,
                       std::ostream& log) {
  const auto scores = score_dataset(own, other, {config.alpha, config.leave_one_out});
  write(config.out / ("scores_" + tag + ".csv"), scores_to_csv(scores));

  const double log_t = config.threshold > 0.0 ? std::log(config.threshold) : -kInf;
  const auto cls = classify(scores, log_t);
  write(config.out / ("flagged_" + tag + ".csv"), flagged_csv(cls.flagged));

  std::size_t pos_inf = 0, neg_inf = 0;
  for (const auto& s : scores) {
    if (s.indeterminate) continue;
    pos_inf += s.log_lambda == kInf;
    neg_inf += s.log_lambda == -kInf;
  }
  summary.add("dataset_" + tag, own.dataset_label());
  summary.add("files_" + tag, own.n_cols());
  summary.add("flagged_" + tag, cls.flagged.size());
  summary.add("indeterminate_" + tag, cls.indeterminate.size());
  summary.add("plus_inf_" + tag, pos_inf);
  summary.add("minus_inf_" + tag, neg_inf);

  const std::string title = "lambda_" + own.dataset_label();
  if (config.plot) write(config.out / ("hist_" + tag + ".svg"), lambda_histogram(scores, title));

  if (!truth_path) {
    log << "notice: no ground truth for " << own.dataset_label() << "; ROC skipped\n";
    return;
  }
  const auto truth = ground_truth_from_csv(csv::read_file(*truth_path));
  const auto flags = misclassified_flags(scores, truth, local_label);
  const auto curve = roc(scores, flags);
  write(config.out / ("roc_" + tag + ".csv"), roc_to_csv(curve));
  summary.add("auc_" + tag, curve.auc);
  summary.add("misclassified_" + tag, curve.n_misclassified);
  if (config.plot) write(config.out / ("roc_" + tag + ".svg"), roc_plot(curve, title));
}

svg::ScatterGroup group(std::string name, std::string color) {
  return {std::move(name), std::move(color), {}, {}};
}

std::string file_scatter(const PcaResult& r, const BinaryRelationMatrix& m,
                         const GroundTruth* truth) {
  auto valid = group("valid", "#000000");
  auto rejected = group("rejected", "#999999");
  auto unknown = group("unknown", "#1f77b4");
  const bool two_d = r.projections.cols() >= 2;
  for (Eigen::Index i = 0; i < r.projections.rows(); ++i) {
    auto* g = &unknown;
    if (truth) {
      const auto it = truth->labels.find(m.column_ids()[static_cast<std::size_t>(i)]);
      if (it != truth->labels.end()) g = it->second == Label::kValid ? &valid : &rejected;
    }
    g->x.push_back(r.projections(i, 0));
    g->y.push_back(two_d ? r.projections(i, 1) : 0.0);
  }
  std::vector<svg::ScatterGroup> groups;
  for (auto* g : {&valid, &rejected, &unknown})
    if (!g->x.empty()) groups.push_back(std::move(*g));
  return svg::scatter(groups, {"file PCA: " + m.dataset_label(), "pc1", "pc2"});
}

std::string scree_plot(const ScreeResult& s, const std::string& title) {
  svg::Series series{"fraction", {}, s.fractions};
  for (std::size_t i = 0; i < s.fractions.size(); ++i) series.x.push_back(static_cast<double>(i + 1));
  return svg::line_chart({series}, {title, "component", "fraction of variance"});
}

}  // namespace

void cmd_run(const RunConfig& config, std::ostream& log) {
  const auto catalog = catalog_for(config);
  const auto manifest = manifest_for(config);
  fs::create_directories(config.out);
  const auto runs = run_corpus(manifest, catalog, {config.parallelism});
  write_captured(config.out / "logs", runs);
  write_corpus_outputs(config.out, manifest, catalog, runs, log);
}

void cmd_ingest(const RunConfig& config, std::ostream& log) {
  const auto catalog = catalog_for(config);
  const auto manifest = manifest_for(config);
  fs::create_directories(config.out);
  const auto ingested = ingest_captured(config.logs, manifest, catalog);
  for (const auto& w : ingested.warnings) log << "warning: " << w << "\n";
  write_corpus_outputs(config.out, manifest, catalog, ingested.runs, log);
}

void cmd_analyze(const AnalyzeConfig& config, std::ostream& log) {
  const auto a = binarize(read_matrix(config.matrix_a));
  const auto b = binarize(read_matrix(config.matrix_b));
  if (a.row_ids() != b.row_ids())
    throw ValidationError("matrices do not share a row space (" + a.dataset_label() + " vs " +
                          b.dataset_label() + ")");
  fs::create_directories(config.out);

  Summary summary;
  summary.add("alpha", config.alpha);
  summary.add("threshold", config.threshold);
  summary.add("leave_one_out", config.leave_one_out ? "true" : "false");
  analyze_direction("a", a, b, config.truth_a, Label::kValid, config, summary, log);
  analyze_direction("b", b, a, config.truth_b, Label::kRejected, config, summary, log);
  write(config.out / "summary.txt", summary.str());
  log << summary.str();
}

void cmd_explore(const ExploreConfig& config, std::ostream& log) {
  if (config.matrices.empty()) throw PreconditionError("explore needs at least one --matrix");
  if (!config.truths.empty() && config.truths.size() != config.matrices.size())
    throw PreconditionError("--truth must be given once per --matrix");
  fs::create_directories(config.out);

  std::vector<RelationMatrix> counts;
  for (const auto& p : config.matrices) counts.push_back(read_matrix(p));

  Summary summary;
  std::set<std::string> used;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto m = binarize(counts[i]);
    auto tag = sanitize(m.dataset_label());
    if (!used.insert(tag).second) tag += "_" + std::to_string(i + 1);
    if (m.n_cols() < 2) {
      log << "notice: " << m.dataset_label() << " has fewer than two files; file PCA skipped\n";
      continue;
    }
    const auto r = project_files(m, config.components);
    write(config.out / ("files_" + tag + ".pca.csv"), projections_to_csv(m.column_ids(), r));
    const auto s = scree(file_points(m));
    write(config.out / ("files_" + tag + ".scree.csv"), scree_to_csv(s));
    summary.add("files_" + tag, m.n_cols());
    double top = 0.0;
    for (Eigen::Index c = 0; c < r.variances.size(); ++c) top += r.variances(c);
    summary.add("variance_explained_" + tag, s.total_variance > 0 ? top / s.total_variance : 0.0);
    if (config.plot) {
      std::optional<GroundTruth> truth;
      if (!config.truths.empty()) truth = ground_truth_from_csv(csv::read_file(config.truths[i]));
      write(config.out / ("files_" + tag + ".pca.svg"),
            file_scatter(r, m, truth ? &*truth : nullptr));
      write(config.out / ("files_" + tag + ".scree.svg"), scree_plot(s, "scree: " + m.dataset_label()));
    }
  }

  auto combined = counts.front();
  for (std::size_t i = 1; i < counts.size(); ++i) combined = hconcat(combined, counts[i]);
  const auto combined_bin = binarize(combined);
  const auto filtered = drop_zero_variance_rows(combined_bin);
  {
    std::string removed = "row\n";
    for (const auto r : filtered.removed) removed += std::to_string(r) + "\n";
    write(config.out / "removed_rows.csv", removed);
  }
  std::size_t never = 0;
  for (const auto c : combined_bin.row_counts()) never += c == 0;
  summary.add("combined_files", combined.n_cols());
  summary.add("rows_total", combined.n_rows());
  summary.add("rows_never_firing", never);
  summary.add("rows_removed", filtered.removed.size());

  if (!config.catalog) {
    log << "notice: no catalog given; parser analyses skipped\n";
  } else {
    const auto catalog = load_catalog(*config.catalog);
    if (combined.row_ids() != default_row_ids(catalog.size()))
      throw ValidationError("matrix rows do not match the catalog's " +
                            std::to_string(catalog.size()) + " rows");
    const auto agg = aggregate_by_parser(combined, catalog);
    if (agg.parsers.size() >= 2 && agg.column_ids.size() >= 1) {
      const auto r = project_parsers(agg, config.components);
      write(config.out / "parsers.pca.csv", projections_to_csv(agg.parsers, r));
      if (config.plot) {
        auto g = group("parsers", "#1f77b4");
        for (Eigen::Index i = 0; i < r.projections.rows(); ++i) {
          g.x.push_back(r.projections(i, 0));
          g.y.push_back(r.projections.cols() >= 2 ? r.projections(i, 1) : 0.0);
        }
        write(config.out / "parsers.pca.svg",
              svg::scatter({g}, {"parser PCA", "pc1", "pc2"}, agg.parsers));
      }
    } else {
      log << "notice: fewer than two parsers; parser PCA skipped\n";
    }

    if (combined.n_cols() >= 2 && filtered.matrix.n_rows() >= 2) {
      const auto corr = message_correlations(combined_bin);
      const auto red = parser_median_correlation(corr, catalog);
      const auto ranking = rank_parsers(red);
      std::vector<std::string> order;
      for (const auto& p : ranking) order.push_back(p.name);
      write(config.out / "redundancy.csv", redundancy_matrix_to_csv(red, order));
      write(config.out / "ranking.csv", ranking_to_csv(ranking));
      summary.add("parsers_ranked", ranking.size());
      summary.add("parsers_without_varying_rows", red.excluded.size());
      if (config.plot) {
        const auto sorted = redundancy_matrix_from_csv(redundancy_matrix_to_csv(red, order));
        write(config.out / "redundancy.svg",
              svg::heatmap(sorted.parsers, sorted.median, "median message correlation"));
      }
    } else {
      log << "notice: fewer than two varying rows; redundancy analysis skipped\n";
    }
  }
  write(config.out / "summary.txt", summary.str());
  log << summary.str();
}

void cmd_synth(const SynthConfig& config, std::ostream& log) {
  SyntheticSpec spec;
  spec.n_messages = config.n_messages;
  spec.size_a = config.size_a;
  spec.size_b = config.size_b;
  spec.contamination_a = config.contamination_a;
  spec.contamination_b = config.contamination_b;
  spec.seed = config.seed;
  spec.label_a = config.label_a;
  spec.label_b = config.label_b;
  spec.p_a = random_probabilities(config.n_messages, config.p_low, config.p_high, config.seed + 1);
  spec.p_b = config.identical
                 ? spec.p_a
                 : random_probabilities(config.n_messages, config.p_low, config.p_high,
                                        config.seed + 2);
  if (!(config.b_only_fraction >= 0.0 && config.b_only_fraction <= 1.0))
    throw PreconditionError("--b-only-fraction must lie in [0, 1]");
  const auto n_b_only = static_cast<std::size_t>(
      std::llround(config.b_only_fraction * static_cast<double>(config.n_messages)));
  for (std::size_t k = config.n_messages - n_b_only; k < config.n_messages; ++k) spec.p_a[k] = 0.0;

  const auto data = generate(spec);
  fs::create_directories(config.out);
  write_matrix(to_counts(data.a), config.out / "a.csv");
  write_matrix(to_counts(data.b), config.out / "b.csv");
  write(config.out / "truth_a.csv", ground_truth_to_csv(data.truth_a));
  write(config.out / "truth_b.csv", ground_truth_to_csv(data.truth_b));
  save_catalog(synthetic_catalog(config.n_messages, std::min(config.parsers, config.n_messages)),
               config.out / "catalog.json");
  std::ostringstream probs;
  probs << "row,p_a,p_b\n";
  for (std::size_t k = 0; k < config.n_messages; ++k)
    probs << (k + 1) << ',' << csv::format_real(spec.p_a[k]) << ','
          << csv::format_real(spec.p_b[k]) << '\n';
  write(config.out / "probabilities.csv", probs.str());

  Summary s;
  s.add("messages", config.n_messages);
  s.add("files_a", config.size_a);
  s.add("files_b", config.size_b);
  s.add("contaminated_a", std::count(data.contaminated_a.begin(), data.contaminated_a.end(), true));
  s.add("contaminated_b", std::count(data.contaminated_b.begin(), data.contaminated_b.end(), true));
  s.add("seed", config.seed);
  write(config.out / "summary.txt", s.str());
  log << s.str();
}

void cmd_chisq(const ChisqConfig& config, std::ostream& log) {
  ContingencyTable2x2 t;
  t.counts = {{{config.a_valid, config.a_rejected}, {config.b_valid, config.b_rejected}}};
  const auto r = chi_square_independence(t);
  log << "statistic=" << csv::format_real(r.statistic) << "\n"
      << "p_value=" << csv::format_real(r.p_value) << "\n";
}

}  // namespace docstat::cli
