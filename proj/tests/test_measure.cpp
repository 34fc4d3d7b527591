#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latreg/measure.hpp"
#include "latreg/rng.hpp"

#include <cmath>

using namespace latreg;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("p-norms on coordinates and on weighted spaces") {
  CHECK(lp_norm(Signal::coordinates(vec({3, 4})), 2.0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(lp_norm(Signal::coordinates(vec({1, 1, 1})), 1.0) == doctest::Approx(3.0).epsilon(1e-14));

  auto space = MeasureSpace::uniform(3, 1.0);
  const double expected = std::cbrt(17.0);  // 1 + 8 + 8
  CHECK(lp_norm(Signal::on(space, vec({1, -2, 2})), 3.0) ==
        doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(lp_norm(Signal::coordinates(vec({1, 2})), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Signal::coordinates(vec({1.0, std::nan("")})), std::invalid_argument);
}

TEST_CASE("dual exponent arithmetic") {
  CHECK(dual_exponent(2.0) == doctest::Approx(2.0));
  CHECK(dual_exponent(4.0) == doctest::Approx(4.0 / 3.0));
  CHECK(dual_exponent(1.5) == doctest::Approx(3.0));
  CHECK_THROWS_AS(dual_exponent(1.0), std::invalid_argument);
  CHECK_THROWS_AS(dual_exponent(0.5), std::invalid_argument);
}

TEST_CASE("norm equivalence factor by regime") {
  CHECK(norm_equiv_factor(4, 4.0) == doctest::Approx(std::pow(4.0, 0.25)).epsilon(1e-14));
  CHECK(norm_equiv_factor(7, 2.0) == doctest::Approx(1.0));
  CHECK(norm_equiv_factor(9, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(norm_equiv_factor(0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(norm_equiv_factor(3, 0.9), std::invalid_argument);
}

TEST_CASE("pairings") {
  auto space = MeasureSpace::make(vec({0.5, 0.5}));
  CHECK(pairing(DualVector{vec({0, 0}), 2.0, nullptr}, Signal::coordinates(vec({7, 9}))) == 0.0);
  CHECK(pairing(DualVector{vec({1, 0}), 2.0, nullptr}, Signal::coordinates(vec({5, 7}))) == 5.0);
  CHECK(pairing(DualVector{vec({1, 1}), 2.0, space}, Signal::on(space, vec({2, 3}))) ==
        doctest::Approx(2.5).epsilon(1e-14));

  // coordinate functional against a measure-space signal is a mismatch
  CHECK_THROWS_AS(pairing(DualVector{vec({1, 1}), 2.0, nullptr}, Signal::on(space, vec({2, 3}))),
                  std::invalid_argument);
  auto other = MeasureSpace::make(vec({0.25, 0.75}));
  CHECK_THROWS_AS(pairing(DualVector{vec({1, 1}), 2.0, other}, Signal::on(space, vec({2, 3}))),
                  std::invalid_argument);
}

TEST_CASE("norm comparison inequalities over random vectors") {
  Rng rng(31337);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.uniform_int(1, 10);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal() * 3.0;
    const Signal s = Signal::coordinates(v);
    const double two = lp_norm(s, 2.0);

    const double p = rng.uniform(1.0, 2.0);
    CHECK(two <= lp_norm(s, p) * (1.0 + 1e-12));

    const double q = rng.uniform(2.0, 8.0);
    CHECK(two <= norm_equiv_factor(n, q) * lp_norm(s, q) * (1.0 + 1e-12));
  }
}

TEST_CASE("the factor is tight on constant vectors") {
  for (int n : {1, 2, 5, 9}) {
    const Signal s = Signal::coordinates(Eigen::VectorXd::Constant(n, 1.7));
    for (double q : {2.0, 3.0, 4.0, 6.5}) {
      const double lhs = lp_norm(s, 2.0);
      const double rhs = norm_equiv_factor(n, q) * lp_norm(s, q);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
  }
}

TEST_CASE("pairings respect the dual-norm product bound") {
  Rng rng(777);
  auto space = MeasureSpace::make(vec({0.2, 0.5, 1.0, 0.3}));
  for (int trial = 0; trial < 300; ++trial) {
    const double p = rng.uniform(1.1, 5.0);
    const double q = dual_exponent(p);
    Eigen::VectorXd x(4), w(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = rng.normal();
      w[i] = rng.normal();
    }
    const Signal sig = Signal::on(space, x);
    const DualVector f{w, q, space};
    CHECK(std::abs(pairing(f, sig)) <= dual_norm(f) * lp_norm(sig, p) * (1.0 + 1e-12));
  }
}

TEST_CASE("p-norms do not increase with the exponent on coordinates") {
  Rng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.uniform_int(1, 8);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    const Signal s = Signal::coordinates(v);
    double prev = lp_norm(s, 1.0);
    for (double p : {1.3, 1.7, 2.0, 2.6, 3.5, 5.0, 8.0}) {
      const double cur = lp_norm(s, p);
      CHECK(cur <= prev * (1.0 + 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("configuration rejects the degenerate exponents") {
  GameConfig cfg;
  cfg.p = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.p = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.p = 2.0;
  cfg.outcome_bound = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.outcome_bound = 1.0;
  cfg.horizon = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.horizon = 1;
  cfg.ridge = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.ridge = 0.5;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("measure spaces require positive weights") {
  CHECK_THROWS_AS(MeasureSpace::make(vec({1.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(MeasureSpace::make(vec({1.0, -2.0})), std::invalid_argument);
  CHECK_THROWS_AS(MeasureSpace::make(Eigen::VectorXd()), std::invalid_argument);
  CHECK(MeasureSpace::uniform(4, 0.25)->total() == doctest::Approx(1.0));
}
