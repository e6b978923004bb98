#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "support.hpp"

using namespace docstat;

namespace {

Eigen::MatrixXd random_points(SplitRng& rng, Eigen::Index p, Eigen::Index d) {
  Eigen::MatrixXd x(p, d);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rng.uniform(-1.0, 1.0) * static_cast<double>(j + 1);
  return x;
}

// Eigenvalues of the sample covariance, descending, computed directly.
std::vector<double> covariance_eigenvalues(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(x.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.rbegin(), v.rend());
  return v;
}

void check_orthonormal(const Eigen::MatrixXd& w, double tol) {
  const Eigen::MatrixXd g = w * w.transpose();
  CHECK((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < tol);
}

}  // namespace

TEST_SUITE("pca") {
  TEST_CASE("diamond corners split variance evenly") {
    Eigen::MatrixXd x(4, 2);
    x << 1, 0, -1, 0, 0, 1, 0, -1;
    const auto s = scree(x);
    REQUIRE(s.fractions.size() == 2);
    CHECK(s.fractions[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.fractions[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.total_variance == doctest::Approx(4.0 / 3.0));
    const auto r = pca(x, 2);
    check_orthonormal(r.components, 1e-12);
  }

  TEST_CASE("collinear points have a single component") {
    Eigen::MatrixXd x(5, 3);
    for (int i = 0; i < 5; ++i) x.row(i) << i, 2.0 * i, -3.0 * i;
    const auto s = scree(x);
    CHECK(s.fractions[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.fractions[1]) < 1e-12);
    const auto r = pca(x, 1);
    const Eigen::Vector3d dir = Eigen::Vector3d(1, 2, -3).normalized();
    CHECK(std::abs(std::abs(r.components.row(0).dot(dir)) - 1.0) < 1e-12);
    // -3 is the largest-magnitude entry, so the sign flips it positive.
    CHECK(r.components(0, 2) > 0);
  }

  TEST_CASE("eigenvalues match a direct covariance decomposition") {
    SplitRng rng(1);
    for (const auto [p, d] : {std::pair{20, 10}, std::pair{6, 15}, std::pair{12, 12}}) {
      const auto x = random_points(rng, p, d);
      const auto expected = covariance_eigenvalues(x);
      const auto s = scree(x);
      REQUIRE(s.variances.size() == static_cast<std::size_t>(std::min(p - 1, d)));
      for (std::size_t i = 0; i < s.variances.size(); ++i)
        CHECK(s.variances[i] == doctest::Approx(expected[i]).epsilon(1e-9));
      double trace = 0;
      for (const double v : expected) trace += v;
      CHECK(s.total_variance == doctest::Approx(trace).epsilon(1e-12));
    }
  }

  TEST_CASE("projection variance equals the eigenvalue") {
    SplitRng rng(2);
    for (int t = 0; t < 50; ++t) {
      const auto x = random_points(rng, 20, 10);
      const auto r = pca(x, 5);
      check_orthonormal(r.components, 1e-9);
      for (Eigen::Index j = 0; j < 5; ++j) {
        const Eigen::VectorXd col = r.projections.col(j);
        CHECK(std::abs(col.mean()) < 1e-9);
        const double var = col.squaredNorm() / 19.0;
        CHECK(std::abs(var - r.variances(j)) < 1e-9 * std::max(1.0, r.variances(j)));
        if (j > 0) CHECK(r.variances(j) <= r.variances(j - 1));
        Eigen::Index arg = 0;
        r.components.row(j).cwiseAbs().maxCoeff(&arg);
        CHECK(r.components(j, arg) > 0);
      }
    }
  }

  TEST_CASE("wide inputs use the same conventions") {
    SplitRng rng(3);
    const auto x = random_points(rng, 5, 30);
    const auto r = pca(x, 4);
    check_orthonormal(r.components, 1e-9);
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    CHECK((c * r.components.transpose() - r.projections).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("preconditions") {
    Eigen::MatrixXd one(1, 3);
    one << 1, 2, 3;
    CHECK_THROWS_AS(pca(one, 1), PreconditionError);
    Eigen::MatrixXd x(3, 2);
    x << 1, 2, 3, 4, 5, 7;
    CHECK_THROWS_AS(pca(x, 0), PreconditionError);
    CHECK_THROWS_AS(pca(x, 3), PreconditionError);
    CHECK_NOTHROW(pca(x, 2));
  }

  TEST_CASE("file and parser projections cap k") {
    SplitRng rng(4);
    const auto m = support::random_binary(rng, 4, 3, 0.5);
    const auto r = project_files(m, 10);
    CHECK(r.projections.rows() == 3);
    CHECK(r.projections.cols() == 2);

    ParserCountMatrix agg{{"p", "q"}, {"1", "2", "3"}, {1, 2, 3, 3, 2, 1}};
    const auto rp = project_parsers(agg, 3);
    CHECK(rp.projections.rows() == 2);
    CHECK(rp.projections.cols() == 1);
  }

  TEST_CASE("csv round trips") {
    SplitRng rng(5);
    const auto x = random_points(rng, 6, 4);
    const auto r = pca(x, 3);
    const std::vector<std::string> ids{"a", "b", "c", "d", "e", "f"};
    const auto table = projections_from_csv(projections_to_csv(ids, r));
    CHECK(table.point_ids == ids);
    CHECK(table.coordinates == r.projections);

    const auto s = scree(x);
    const auto back = scree_from_csv(scree_to_csv(s));
    CHECK(back.variances == s.variances);
    CHECK(back.fractions == s.fractions);
  }
}
