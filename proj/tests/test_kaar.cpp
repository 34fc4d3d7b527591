#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latreg/aar.hpp"
#include "latreg/kaar.hpp"
#include "latreg/rng.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numeric>

using namespace latreg;

namespace {

kaar::GramMatrix random_psd(Rng& rng, int size) {
  Eigen::MatrixXd factor(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) factor(i, j) = rng.normal();
  return kaar::GramMatrix::from_factor(factor);
}

}  // namespace

TEST_CASE("single-step prediction with a zeroed label vector is zero") {
  const auto gram = kaar::GramMatrix::from(Eigen::MatrixXd::Constant(1, 1, 3.0));
  CHECK(kaar::predict(gram, Eigen::VectorXd::Zero(1), 1.0) == 0.0);
}

TEST_CASE("dot-product gram reproduces the coordinate solver") {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0, 1, 0;  // two copies of e_1
  const auto gram = kaar::GramMatrix::from_factor(x);
  Eigen::VectorXd labels(2);
  labels << 1, 0;
  CHECK(kaar::predict(gram, labels, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("zero gram gives zero predictions") {
  const auto gram = kaar::GramMatrix::from(Eigen::MatrixXd::Zero(3, 3));
  Eigen::VectorXd labels(3);
  labels << 1, -1, 0;
  CHECK(kaar::predict(gram, labels, 1.0) == 0.0);
}

TEST_CASE("prediction preconditions") {
  const auto gram = kaar::GramMatrix::from(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd bad(2);
  bad << 1, 1;  // current slot must be zero
  CHECK_THROWS_AS(kaar::predict(gram, bad, 1.0), std::invalid_argument);
  Eigen::VectorXd ok(2);
  ok << 1, 0;
  CHECK_THROWS_AS(kaar::predict(gram, ok, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kaar::predict(gram, Eigen::VectorXd::Zero(3), 1.0), std::invalid_argument);
}

TEST_CASE("log-determinant regret values") {
  CHECK(kaar::logdet_regret(kaar::GramMatrix::from(Eigen::MatrixXd::Zero(2, 2)), 1.0, 1.0,
                            0.0) == doctest::Approx(0.0));
  CHECK(kaar::logdet_regret(kaar::GramMatrix::from(Eigen::MatrixXd::Identity(2, 2)), 1.0,
                            1.0, 0.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("diagonal relaxation dominates the full matrix") {
  Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    const int size = rng.uniform_int(1, 8);
    const auto gram = random_psd(rng, size);
    const double ridge = rng.uniform(0.2, 3.0);
    const auto diag =
        kaar::GramMatrix::from(Eigen::MatrixXd(gram.matrix().diagonal().asDiagonal()));
    CHECK(kaar::logdet_regret(diag, ridge, 1.0, 0.0) >=
          kaar::logdet_regret(gram, ridge, 1.0, 0.0) - 1e-10);
  }
}

TEST_CASE("linearized regret values and dominance") {
  CHECK(kaar::linearized_regret(4, 0.0, 1.0, 1.0, 0.0) == doctest::Approx(0.0));
  CHECK(kaar::linearized_regret(4, 1.0, 2.0, 1.0, 0.0) == doctest::Approx(2.0));

  Rng rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    const int size = rng.uniform_int(1, 8);
    const auto gram = random_psd(rng, size);
    const double ridge = rng.uniform(0.2, 3.0);
    const double comp = rng.uniform(0.0, 2.0);
    const double max_diag = gram.matrix().diagonal().maxCoeff();
    CHECK(kaar::linearized_regret(size, max_diag, ridge, 1.0, comp) >=
          kaar::logdet_regret(gram, ridge, 1.0, comp) - 1e-10);
  }
}

TEST_CASE("spectral repair accepts tiny negatives and rejects real ones") {
  Eigen::MatrixXd nearly = Eigen::MatrixXd::Identity(2, 2);
  nearly(0, 0) = -1e-12;  // within tolerance of the unit-scale spectrum
  const auto repaired = kaar::GramMatrix::from(nearly);
  CHECK(repaired.matrix()(0, 0) >= 0.0);

  Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(2, 2);
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(kaar::GramMatrix::from(indefinite), std::invalid_argument);
}

TEST_CASE("nonnegative regret with a zero comparator") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gram = random_psd(rng, rng.uniform_int(1, 6));
    CHECK(kaar::logdet_regret(gram, rng.uniform(0.1, 5.0), 1.0, 0.0) >= 0.0);
  }
}

TEST_CASE("coordinate and kernel runs agree step by step") {
  Rng rng(2024);
  for (int game = 0; game < 40; ++game) {
    Rng local = rng.fork(game);
    const int dim = local.uniform_int(1, 5);
    const int horizon = local.uniform_int(1, 20);
    const double ridge = local.uniform(0.3, 3.0);
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> ys;
    Eigen::MatrixXd x(horizon, dim);
    for (int t = 0; t < horizon; ++t) {
      Eigen::VectorXd v(dim);
      for (int i = 0; i < dim; ++i) v[i] = local.normal();
      x.row(t) = v;
      xs.push_back(v);
      ys.push_back(local.uniform(-1.0, 1.0));
    }
    const auto direct = aar::run_game(xs, ys, ridge);
    const auto kernelized =
        kaar::semi_online_predictions(kaar::GramMatrix::from_factor(x), ys, ridge);
    for (int t = 0; t < horizon; ++t) {
      const double scale = std::max({1.0, std::abs(direct[t])});
      CHECK(std::abs(direct[t] - kernelized[t]) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("the nested factorization matches per-step solves and the dense oracle") {
  Rng rng(606);
  const int horizon = 12;
  const auto gram = random_psd(rng, horizon);
  std::vector<double> ys(horizon);
  for (double& y : ys) y = rng.uniform(-1.0, 1.0);
  const double ridge = 0.8;

  const auto fast = kaar::semi_online_predictions(gram, ys, ridge);

  std::vector<std::vector<double>> kref(horizon, std::vector<double>(horizon));
  for (int i = 0; i < horizon; ++i)
    for (int j = 0; j < horizon; ++j) kref[i][j] = gram(i, j);
  const auto reference = oracles::kernel_game_reference(kref, ys, ridge);

  for (int t = 0; t < horizon; ++t) {
    CHECK(fast[t] == doctest::Approx(reference[t]).epsilon(1e-9));
    Eigen::VectorXd labels = Eigen::VectorXd::Zero(t + 1);
    for (int i = 0; i < t; ++i) labels[i] = ys[i];
    CHECK(fast[t] ==
          doctest::Approx(kaar::predict(gram.top_left(t + 1), labels, ridge)).epsilon(1e-10));
  }
}

TEST_CASE("permuting settled history and labels together changes nothing") {
  Rng rng(11);
  const int horizon = 8;
  const auto gram = random_psd(rng, horizon);
  Eigen::VectorXd labels(horizon);
  for (int i = 0; i + 1 < horizon; ++i) labels[i] = rng.uniform(-1.0, 1.0);
  labels[horizon - 1] = 0.0;
  const double base = kaar::predict(gram, labels, 1.1);

  std::vector<int> perm(horizon - 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[horizon - 2]);
  if (horizon > 3) std::swap(perm[1], perm[2]);

  Eigen::MatrixXd shuffled(horizon, horizon);
  Eigen::VectorXd shuffled_labels(horizon);
  std::vector<int> full(perm);
  full.push_back(horizon - 1);
  for (int i = 0; i < horizon; ++i) {
    shuffled_labels[i] = labels[full[i]];
    for (int j = 0; j < horizon; ++j) shuffled(i, j) = gram(full[i], full[j]);
  }
  const double permuted =
      kaar::predict(kaar::GramMatrix::from(shuffled), shuffled_labels, 1.1);
  CHECK(base == doctest::Approx(permuted).epsilon(1e-11));
}
