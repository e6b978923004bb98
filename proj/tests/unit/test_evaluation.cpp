#include <doctest.h>

#include <limits>

#include "support.hpp"

using namespace docstat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<MisclassificationScore> scored(const std::vector<double>& values) {
  std::vector<MisclassificationScore> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.push_back({std::to_string(i + 1), values[i], false});
  return out;
}

}  // namespace

TEST_SUITE("evaluation") {
  TEST_CASE("perfect and inverted separation") {
    const auto s = scored({3, 2, 1, 0});
    CHECK(roc(s, {true, true, false, false}).auc == 1.0);
    CHECK(roc(s, {false, false, true, true}).auc == 0.0);
  }

  TEST_CASE("ties move the curve diagonally") {
    const auto c = roc(scored({1, 1, 1, 1}), {true, false, true, false});
    REQUIRE(c.points.size() == 2);
    CHECK(c.points[0].p_fa == 0.0);
    CHECK(c.points[0].p_d == 0.0);
    CHECK(c.points[1].p_fa == 1.0);
    CHECK(c.points[1].p_d == 1.0);
    CHECK(c.auc == 0.5);
  }

  TEST_CASE("infinite scores produce a plateau") {
    const auto s = scored({kInf, kInf, 0.5, -1.0, -kInf, 2.0});
    const std::vector<bool> mis{true, true, true, false, false, false};
    const auto c = roc(s, mis);
    CHECK(c.points.front().threshold == kInf);
    CHECK(c.points.front().p_d == 0.0);
    // At the first finite threshold both +inf files are detected with no false alarm.
    CHECK(c.points[1].threshold == 2.0);
    CHECK(c.points[1].p_fa == 0.0);
    CHECK(c.points[1].p_d == doctest::Approx(2.0 / 3.0));
    CHECK(c.points.back().threshold == -kInf);
    CHECK(c.points.back().p_fa == 1.0);
    CHECK(c.points.back().p_d == 1.0);
  }

  TEST_CASE("the lowest finite group is separated from -inf") {
    const auto c = roc(scored({-kInf, -3.0, kInf}), {false, true, true});
    REQUIRE(c.points.size() == 4);
    CHECK(c.points[2].threshold == std::numeric_limits<double>::lowest());
    CHECK(c.points[2].p_d == 1.0);
    CHECK(c.points[2].p_fa == 0.0);
    CHECK(c.auc == 1.0);
  }

  TEST_CASE("indeterminate scores are excluded") {
    auto s = scored({1.0, 0.0, 2.0});
    s.push_back({"nan", std::nan(""), true});
    const auto c = roc(s, {true, false, false, true});
    CHECK(c.excluded == std::vector<std::string>{"nan"});
    CHECK(c.n_misclassified == 1);
    CHECK(c.n_correct == 2);
    CHECK(c.auc == doctest::Approx(0.5));
  }

  TEST_CASE("degenerate truth is rejected") {
    CHECK_THROWS_AS(roc(scored({1, 2}), {true, true}), PreconditionError);
    CHECK_THROWS_AS(roc(scored({1, 2}), {true}), PreconditionError);
  }

  TEST_CASE("auc equals the Mann-Whitney statistic") {
    SplitRng rng(5);
    for (int t = 0; t < 200; ++t) {
      const auto n = 2 + rng.below(39);
      std::vector<double> v(n);
      std::vector<bool> mis(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = rng.below(12);
        v[i] = r == 0 ? kInf : r == 1 ? -kInf : static_cast<double>(rng.below(6)) - 2.5;
        mis[i] = rng.uniform() < 0.4;
      }
      mis[0] = true;
      mis[1] = false;
      const auto c = roc(scored(v), mis);
      CHECK(c.auc == doctest::Approx(support::mann_whitney_auc(v, mis)).epsilon(1e-12));

      for (std::size_t i = 1; i < c.points.size(); ++i) {
        CHECK(c.points[i].threshold < c.points[i - 1].threshold);
        CHECK(c.points[i].p_fa >= c.points[i - 1].p_fa);
        CHECK(c.points[i].p_d >= c.points[i - 1].p_d);
      }
      CHECK(c.points.back().p_fa == 1.0);
      CHECK(c.points.back().p_d == 1.0);
    }
  }

  TEST_CASE("misclassification flags follow the local label") {
    GroundTruth t;
    t.labels = {{"1", Label::kValid}, {"2", Label::kRejected}};
    const auto s = scored({0, 0});
    CHECK(misclassified_flags(s, t, Label::kValid) == std::vector<bool>{false, true});
    CHECK(misclassified_flags(s, t, Label::kRejected) == std::vector<bool>{true, false});
    t.labels.erase("2");
    CHECK_THROWS_AS(misclassified_flags(s, t, Label::kValid), PreconditionError);
  }

  TEST_CASE("roc csv round trip") {
    const auto c = roc(scored({kInf, 1.5, 0.25, -kInf}), {true, false, true, false});
    const auto back = roc_from_csv(roc_to_csv(c));
    CHECK(back.points == c.points);
    CHECK(back.auc == c.auc);
  }

  TEST_CASE("chi-square against the cell-sum oracle") {
    ContingencyTable2x2 t;
    t.counts = {{{7206, 1794}, {488, 516}}};
    const auto r = chi_square_independence(t);
    CHECK(r.statistic == doctest::Approx(support::chi_square_oracle(7206, 1794, 488, 516)));
    CHECK(r.p_value < 1e-4);
    CHECK(chi_square_independence(t.transposed()).statistic == doctest::Approx(r.statistic));

    SplitRng rng(6);
    for (int i = 0; i < 50; ++i) {
      ContingencyTable2x2 x;
      for (auto& row : x.counts)
        for (auto& c : row) c = 1 + rng.below(1000);
      const auto& k = x.counts;
      CHECK(chi_square_independence(x).statistic ==
            doctest::Approx(support::chi_square_oracle(k[0][0], k[0][1], k[1][0], k[1][1]))
                .epsilon(1e-10));
    }
  }

  TEST_CASE("chi-square p-values") {
    ContingencyTable2x2 even;
    even.counts = {{{10, 10}, {10, 10}}};
    CHECK(chi_square_independence(even).statistic == 0.0);
    CHECK(chi_square_independence(even).p_value == 1.0);
    ContingencyTable2x2 t;
    t.counts = {{{30, 20}, {20, 30}}};
    const auto r = chi_square_independence(t);
    CHECK(r.statistic == doctest::Approx(4.0));
    CHECK(r.p_value == doctest::Approx(std::erfc(std::sqrt(2.0))));
    ContingencyTable2x2 zero;
    zero.counts = {{{0, 0}, {3, 4}}};
    CHECK_THROWS_AS(chi_square_independence(zero), PreconditionError);
  }
}
