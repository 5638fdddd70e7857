#include <cmath>
#include <random>

#include <doctest.h>

#include "gaussbound/gaussian.hpp"
#include "gaussbound/problem.hpp"

using namespace gaussbound;

TEST_SUITE_BEGIN("gaussian");

TEST_CASE("kl_scalar matches hand-computed values") {
  // Mean shift only: KL(N(1,1) || N(0,1)) = 1/2.
  CHECK(kl_scalar({1.0, 1.0}, {0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-13));
  // Variance only: KL(N(0,2) || N(0,1)) = (2 - 1 - ln 2) / 2.
  CHECK(kl_scalar({0.0, 2.0}, {0.0, 1.0}) ==
        doctest::Approx(0.5 * (2.0 - 1.0 - std::log(2.0))).epsilon(1e-13));
  CHECK(kl_scalar({0.7, 1.3}, {0.7, 1.3}) == doctest::Approx(0.0));
}

TEST_CASE("kl_scalar degenerate cases") {
  CHECK(kl_scalar({0.0, 1.0}, {0.0, 0.0}) == kInf);
  CHECK(kl_scalar({1.0, 0.0}, {0.0, 1.0}) == kInf);
  CHECK_THROWS_AS(kl_scalar({0.0, -1.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(kl_scalar({0.0, 1.0}, {0.0, -2.0}), std::invalid_argument);
}

TEST_CASE("kl_scalar is non-negative on random pairs") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> mean(-5.0, 5.0);
  std::uniform_real_distribution<double> var(0.01, 10.0);
  for (int k = 0; k < 50; ++k) {
    const ScalarGaussian p{mean(gen), var(gen)};
    const ScalarGaussian q{mean(gen), var(gen)};
    CHECK(kl_scalar(p, q) >= 0.0);
  }
}

TEST_CASE("kl_mvn agrees with kl_scalar in one dimension") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> mean(-3.0, 3.0);
  std::uniform_real_distribution<double> var(0.05, 4.0);
  for (int k = 0; k < 20; ++k) {
    const double mp = mean(gen), vp = var(gen), mq = mean(gen), vq = var(gen);
    Eigen::VectorXd m1(1), m2(1);
    m1 << mp;
    m2 << mq;
    Eigen::MatrixXd c1(1, 1), c2(1, 1);
    c1 << vp;
    c2 << vq;
    const double got = kl_mvn({m1, c1}, {m2, c2});
    const double want = kl_scalar({mp, vp}, {mq, vq});
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("kl_mvn closed form for a diagonal pair") {
  Eigen::VectorXd mp(2), mq(2);
  mp << 1.0, 0.0;
  mq << 0.0, 0.0;
  Eigen::MatrixXd cp(2, 2), cq(2, 2);
  cp << 2.0, 0.0, 0.0, 1.0;
  cq << 1.0, 0.0, 0.0, 1.0;
  // (tr + quad - d - ln det ratio) / 2 = (3 + 1 - 2 - ln 2) / 2.
  const double want = 0.5 * (2.0 + 1.0 + 1.0 - 2.0 - std::log(2.0));
  CHECK(kl_mvn({mp, cp}, {mq, cq}) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("kl_mvn is non-negative and zero on identical laws") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + static_cast<int>(gen() % 4);
    Eigen::MatrixXd b(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) b(r, c) = entry(gen);
    Eigen::MatrixXd cov1 = b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd cov2 = Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd m1 = Eigen::VectorXd::Zero(d), m2 = Eigen::VectorXd::Zero(d);
    for (int r = 0; r < d; ++r) m1[r] = entry(gen);
    CHECK(kl_mvn({m1, cov1}, {m2, cov2}) >= 0.0);
    CHECK(kl_mvn({m1, cov1}, {m1, cov1}) == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("MultivariateGaussian rejects bad covariances") {
  Eigen::VectorXd m(2);
  m << 0.0, 0.0;
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(MultivariateGaussian(m, asym), std::invalid_argument);
  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(MultivariateGaussian(m, indef), std::invalid_argument);
  Eigen::MatrixXd singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK(MultivariateGaussian(m, singular).degenerate);
}

TEST_CASE("per-index mutual information for uniform weights") {
  // n = 2, sigma^2 = 1, no noise: I(W; Z_i) = ln(2) / 2.
  const auto p = ScalarLocationProblem::uniform(2);
  CHECK(mi_weighted_average_scalar(p, 0) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-13));
  CHECK(mi_weighted_average_scalar(p, 1) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("per-index mutual information general formula") {
  // I = ln((v_i + w_i^2 s2) / v_i) / 2 with v_i the leave-one-out variance.
  const ScalarLocationProblem p{0.5, 2.0, {0.6, 0.4}, 0.3};
  const double v0 = 0.4 * 0.4 * 2.0 + 0.3;
  const double want0 = 0.5 * std::log((v0 + 0.36 * 2.0) / v0);
  CHECK(mi_weighted_average_scalar(p, 0) == doctest::Approx(want0).epsilon(1e-13));
}

TEST_CASE("mutual information edge cases") {
  const ScalarLocationProblem zero{0.0, 1.0, {0.0, 0.0, 0.0}, 0.0};
  CHECK(mi_weighted_average_scalar(zero, 1) == 0.0);
  CHECK(mi_full_sample_scalar(zero) == 0.0);

  // One-hot, no noise: conditioning on the hot sample pins W exactly.
  const auto hot = ScalarLocationProblem::one_hot(3);
  CHECK(mi_weighted_average_scalar(hot, 0) == kInf);
  CHECK(mi_weighted_average_scalar(hot, 1) == 0.0);
  CHECK(mi_full_sample_scalar(hot) == kInf);
}

TEST_CASE("full-sample mutual information closed form") {
  // n = 4 uniform, s2 = 1, noise 1: Var(W) = 1/4 + 1 so I = ln(1.25) / 2.
  const auto p = ScalarLocationProblem::uniform(4, 0.0, 1.0, 1.0);
  CHECK(mi_full_sample_scalar(p) == doctest::Approx(0.5 * std::log(1.25)).epsilon(1e-13));
}

TEST_SUITE_END();
