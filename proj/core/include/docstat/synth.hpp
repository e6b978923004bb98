#pragma once

// Synthetic two-corpus generator with known Bernoulli message probabilities
// and a known set of contaminated (misclassified) files.
//
// Corpus A plays the mostly-compliant role: files drawn from p_a are labelled
// valid and files drawn from p_b rejected, in both corpora. A file is
// contaminated when its true origin differs from the corpus it sits in.

#include <cstdint>
#include <random>
#include <vector>

#include "docstat/catalog.hpp"
#include "docstat/matrix.hpp"

namespace docstat {

struct SyntheticSpec {
  std::size_t n_messages = 0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  std::vector<double> p_a;
  std::vector<double> p_b;
  double contamination_a = 0.0;  // in [0, 1)
  double contamination_b = 0.0;
  std::uint64_t seed = 0;
  std::string label_a = "a";
  std::string label_b = "b";

  void validate() const;
};

struct SyntheticDataset {
  BinaryRelationMatrix a;
  BinaryRelationMatrix b;
  GroundTruth truth_a;
  GroundTruth truth_b;
  std::vector<bool> contaminated_a;  // per column of a
  std::vector<bool> contaminated_b;
};

// Deterministic for a fixed spec. Exactly round(contamination * size) files
// per corpus come from the other distribution; which ones is drawn from the
// seeded stream.
SyntheticDataset generate(const SyntheticSpec& spec);

// Bit-reproducible helpers over mt19937_64 (no std distributions, whose
// output is implementation-defined).
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}
  double uniform();                        // [0, 1) with 53 random bits
  double uniform(double lo, double hi);    // [lo, hi)
  std::uint64_t below(std::uint64_t n);    // [0, n), unbiased

 private:
  std::mt19937_64 engine_;
};

std::vector<double> random_probabilities(std::size_t n, double lo, double hi, std::uint64_t seed);

// One regex `.+` row per message, split into `n_parsers` contiguous blocks
// owned by parser01, parser02, ... Useful for exploring synthetic matrices.
MessageCatalog synthetic_catalog(std::size_t n_messages, std::size_t n_parsers);

}  // namespace docstat
