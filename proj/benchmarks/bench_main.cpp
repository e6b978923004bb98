#include <benchmark/benchmark.h>

#include <string>

#include "docstat/docstat.hpp"

using namespace docstat;

namespace {

SyntheticDataset corpus(std::size_t n, std::size_t m) {
  SyntheticSpec s;
  s.n_messages = n;
  s.size_a = m;
  s.size_b = m;
  s.p_a = random_probabilities(n, 0.01, 0.3, 1);
  s.p_b = random_probabilities(n, 0.01, 0.3, 2);
  s.contamination_a = 0.2;
  s.contamination_b = 0.5;
  s.seed = 3;
  return generate(s);
}

void BM_ScoreDataset(benchmark::State& state) {
  const auto d = corpus(955, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(score_dataset(d.a, d.b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreDataset)->Arg(1000)->Arg(9000);

void BM_MessageCorrelations(benchmark::State& state) {
  const auto d = corpus(static_cast<std::size_t>(state.range(0)), 5000);
  const auto both = hconcat(d.a, d.b);
  for (auto _ : state) benchmark::DoNotOptimize(message_correlations(both));
}
BENCHMARK(BM_MessageCorrelations)->Arg(200)->Arg(955)->Unit(benchmark::kMillisecond);

void BM_FilePca(benchmark::State& state) {
  const auto d = corpus(955, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(project_files(d.a, 3));
}
BENCHMARK(BM_FilePca)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_MatchMessages(benchmark::State& state) {
  std::vector<ParserSpec> parsers{{"p", "true", {"{file}"}, std::chrono::duration<double>(1.0)}};
  std::vector<MessagePattern> patterns;
  for (std::size_t k = 1; k <= 57; ++k)
    patterns.push_back({k, "p", "^Syntax Error \\(\\d+\\): code " + std::to_string(k) + "\\b", "",
                        PatternKind::kRegex});
  const MessageCatalog catalog(parsers, patterns);
  std::string text;
  for (int i = 0; i < state.range(0); ++i)
    text += "Syntax Error (" + std::to_string(1000 + i) + "): code " + std::to_string(i % 60) + " in stream\n";
  const ParserRun run{1, "p", 0, text, 0.0, false};
  for (auto _ : state) benchmark::DoNotOptimize(match_messages(run, catalog));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MatchMessages)->Arg(100)->Arg(1000);

}  // namespace
BENCHMARK_MAIN();
