#include "docstat/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "docstat/errors.hpp"

namespace docstat {

namespace {

struct Corpus {
  BinaryRelationMatrix matrix;
  GroundTruth truth;
  std::vector<bool> contaminated;
};

Corpus draw_corpus(SplitRng& rng, const std::string& label, std::size_t size,
                   double contamination, const std::vector<double>& p_local,
                   const std::vector<double>& p_foreign, Label local_label) {
  const auto n_foreign =
      static_cast<std::size_t>(std::llround(contamination * static_cast<double>(size)));
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_foreign; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(size - i));
    std::swap(order[i], order[j]);
  }
  Corpus c;
  c.contaminated.assign(size, false);
  for (std::size_t i = 0; i < n_foreign; ++i) c.contaminated[order[i]] = true;

  const Label foreign_label = local_label == Label::kValid ? Label::kRejected : Label::kValid;
  auto ids = default_column_ids(size);
  std::vector<std::vector<std::uint32_t>> columns(size);
  for (std::size_t j = 0; j < size; ++j) {
    const auto& p = c.contaminated[j] ? p_foreign : p_local;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (rng.uniform() < p[k]) columns[j].push_back(static_cast<std::uint32_t>(k));
    c.truth.labels.emplace(ids[j], c.contaminated[j] ? foreign_label : local_label);
  }
  c.matrix = BinaryRelationMatrix(label, default_row_ids(p_local.size()), std::move(ids),
                                  std::move(columns));
  return c;
}

}  // namespace

double SplitRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SplitRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t SplitRng::below(std::uint64_t n) {
  if (n == 0) throw PreconditionError("SplitRng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

void SyntheticSpec::validate() const {
  if (size_a < 1 || size_b < 1) throw PreconditionError("synthetic corpus sizes must be >= 1");
  if (p_a.size() != n_messages || p_b.size() != n_messages)
    throw PreconditionError("probability vectors must have n_messages entries");
  for (const auto* p : {&p_a, &p_b})
    for (const double v : *p)
      if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("probabilities must lie in [0, 1]");
  for (const double c : {contamination_a, contamination_b})
    if (!(c >= 0.0 && c < 1.0)) throw PreconditionError("contamination must lie in [0, 1)");
  if (label_a == label_b) throw PreconditionError("corpus labels must differ");
}

SyntheticDataset generate(const SyntheticSpec& spec) {
  spec.validate();
  SplitRng rng(spec.seed);
  auto a = draw_corpus(rng, spec.label_a, spec.size_a, spec.contamination_a, spec.p_a, spec.p_b,
                       Label::kValid);
  auto b = draw_corpus(rng, spec.label_b, spec.size_b, spec.contamination_b, spec.p_b, spec.p_a,
                       Label::kRejected);
  return {std::move(a.matrix), std::move(b.matrix), std::move(a.truth),
          std::move(b.truth),  std::move(a.contaminated), std::move(b.contaminated)};
}

std::vector<double> random_probabilities(std::size_t n, double lo, double hi, std::uint64_t seed) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
    throw PreconditionError("probability range must satisfy 0 <= lo <= hi <= 1");
  SplitRng rng(seed);
  std::vector<double> p(n);
  for (auto& v : p) v = rng.uniform(lo, hi);
  return p;
}

MessageCatalog synthetic_catalog(std::size_t n_messages, std::size_t n_parsers) {
  if (n_parsers < 1 || n_parsers > n_messages)
    throw PreconditionError("need 1 <= parsers <= messages");
  std::vector<ParserSpec> parsers;
  for (std::size_t i = 0; i < n_parsers; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "parser%02zu", i + 1);
    parsers.push_back({name, "true", {"{file}"}, std::chrono::duration<double>(10.0)});
  }
  std::vector<MessagePattern> patterns;
  for (std::size_t k = 0; k < n_messages; ++k) {
    const auto owner = k * n_parsers / n_messages;
    patterns.push_back({k + 1, parsers[owner].name, ".+", "synthetic message " + std::to_string(k + 1),
                        PatternKind::kRegex});
  }
  return MessageCatalog(std::move(parsers), std::move(patterns));
}

}  // namespace docstat
