#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latreg/kaar.hpp"
#include "latreg/measure.hpp"
#include "latreg/rng.hpp"
#include "latreg/sobolev.hpp"

#include <cmath>
#include <complex>

using namespace latreg;
using sobolev::DomainGrid;
using sobolev::Filter;
using sobolev::SobolevParams;

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

Signal cosine_mode(const DomainGrid& grid, const std::vector<int>& k, double phase = 0.0) {
  Eigen::VectorXd f(grid.points());
  for (Eigen::Index j = 0; j < grid.points(); ++j) {
    const std::vector<int> c = grid.coords(j);
    double arg = phase;
    for (int a = 0; a < grid.dim(); ++a) arg += two_pi * k[a] * c[a] / grid.resolution();
    f[j] = std::cos(arg);
  }
  return Signal::on(grid.space(), f);
}

}  // namespace

TEST_CASE("constants pass through the lifting filter unchanged") {
  const DomainGrid grid(1, two_pi, 16);
  const Signal f = Signal::on(grid.space(), Eigen::VectorXd::Constant(16, 3.25));
  const Signal lifted = sobolev::bessel_filter(f, grid, 1.5, Filter::lift);
  CHECK((lifted.values().array() - 3.25).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("pure modes are eigenfunctions of the filter") {
  const DomainGrid grid(1, two_pi, 32);
  for (int k : {1, 3, 5}) {
    for (double s : {1.0, 2.0}) {
      const Signal f = cosine_mode(grid, {k}, 0.7);
      const Signal lifted = sobolev::bessel_filter(f, grid, s, Filter::lift);
      const double factor = std::pow(1.0 + k * k, s / 2.0);
      CHECK((lifted.values() - factor * f.values()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  // two-dimensional mode
  const DomainGrid plane(2, two_pi, 8);
  const Signal g = cosine_mode(plane, {1, 2});
  const Signal lifted = sobolev::bessel_filter(g, plane, 2.0, Filter::lift);
  CHECK((lifted.values() - (1.0 + 5.0) * g.values()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("lifting then lowering is the identity") {
  Rng rng(12);
  const DomainGrid grid(1, two_pi, 32);
  for (int trial = 0; trial < 10; ++trial) {
    const Signal f = sobolev::random_band_limited(grid, rng);
    const Signal round =
        sobolev::bessel_filter(sobolev::bessel_filter(f, grid, 2.5, Filter::lift), grid,
                               2.5, Filter::lower);
    CHECK((round.values() - f.values()).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("smoothness norms of explicit functions") {
  const DomainGrid grid(1, two_pi, 32);
  const SobolevParams prm{2.0, 2.0, 1};

  CHECK(sobolev::sobolev_norm(Signal::on(grid.space(), Eigen::VectorXd::Zero(32)), grid,
                              prm) == doctest::Approx(0.0));

  // constants: the norm is the measure of the box to the power 1/p
  const Signal one = Signal::on(grid.space(), Eigen::VectorXd::Ones(32));
  for (double p : {1.5, 2.0, 3.0}) {
    const SobolevParams prm_p{2.0, p, 1};
    CHECK(sobolev::sobolev_norm(one, grid, prm_p) ==
          doctest::Approx(std::pow(two_pi, 1.0 / p)).epsilon(1e-10));
  }

  // single mode at p = 2: the multiplier factor times the plain norm
  const Signal mode = cosine_mode(grid, {3});
  const double plain = lp_norm(mode, 2.0);
  CHECK(sobolev::sobolev_norm(mode, grid, prm) ==
        doctest::Approx(std::pow(10.0, 1.0) * plain).epsilon(1e-10));
}

TEST_CASE("quadratic norms match the spectral sum") {
  Rng rng(21);
  const DomainGrid grid(1, two_pi, 32);
  const double s = 1.5;
  const SobolevParams prm{s, 2.0, 1};
  // f built from explicit mode coefficients: f = sum_k a_k cos(k x) + b_k sin(k x)
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> a(5), b(5);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(32);
    for (int k = 0; k < 5; ++k) {
      a[k] = rng.normal();
      b[k] = k == 0 ? 0.0 : rng.normal();
      for (int j = 0; j < 32; ++j) {
        const double x = two_pi * j / 32.0;
        f[j] += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
      }
    }
    // Parseval over the box: |cos(kx)|_2^2 = |sin(kx)|_2^2 = pi for k >= 1
    double expected_sq = two_pi * a[0] * a[0];
    for (int k = 1; k < 5; ++k)
      expected_sq +=
          std::pow(1.0 + k * k, s) * (a[k] * a[k] + b[k] * b[k]) * (two_pi / 2.0);
    const double norm = sobolev::sobolev_norm(Signal::on(grid.space(), f), grid, prm);
    CHECK(norm * norm == doctest::Approx(expected_sq).epsilon(1e-8));
  }
}

TEST_CASE("evaluation signals reproduce point values through the pairing") {
  Rng rng(33);
  for (int dim : {1, 2}) {
    const int res = dim == 1 ? 32 : 8;
    const DomainGrid grid(dim, two_pi, res);
    const SobolevParams prm{2.0, 2.0, dim};
    const sobolev::PointEvaluations evals(grid, prm);
    for (int trial = 0; trial < 6; ++trial) {
      const Signal f = sobolev::random_band_limited(grid, rng);
      const Signal lifted = sobolev::bessel_filter(f, grid, prm.smoothness, Filter::lift);
      const Eigen::Index node = rng.uniform_int(0, static_cast<int>(grid.points()) - 1);
      const Signal beta = evals.at(node);
      const DualVector dual{beta.values(), dual_exponent(prm.p), grid.space()};
      CHECK(pairing(dual, lifted) == doctest::Approx(f.values()[node]).epsilon(1e-6));
    }
  }
}

TEST_CASE("evaluation signals translate with the node") {
  const DomainGrid grid(1, two_pi, 16);
  const SobolevParams prm{1.5, 2.0, 1};
  const sobolev::PointEvaluations evals(grid, prm);
  const Signal at0 = evals.at(0);
  const Signal at5 = evals.at(5);
  for (int j = 0; j < 16; ++j)
    CHECK(at5.values()[(j + 5) % 16] == doctest::Approx(at0.values()[j]).epsilon(1e-12));
}

TEST_CASE("higher smoothness flattens the evaluation kernel") {
  const DomainGrid grid(1, two_pi, 32);
  const auto spread = [&](double s) {
    const sobolev::PointEvaluations evals(grid, {s, 2.0, 1});
    const Eigen::VectorXd& v = evals.base().values();
    return v.maxCoeff() - v.minCoeff();
  };
  CHECK(spread(8.0) < spread(2.0));
}

TEST_CASE("evaluation norms are stable across grid refinement") {
  for (double p : {2.0, 3.0}) {
    const SobolevParams prm{2.0, p, 1};
    const double coarse =
        sobolev::PointEvaluations(DomainGrid(1, two_pi, 32), prm).uniform_dual_norm();
    const double fine =
        sobolev::PointEvaluations(DomainGrid(1, two_pi, 64), prm).uniform_dual_norm();
    CHECK(std::abs(coarse - fine) <= 0.05 * std::max(coarse, fine));
  }
}

TEST_CASE("the measured sandwich constant is finite and refinement-stable") {
  for (double p : {2.0, 3.0}) {
    const SobolevParams prm{2.0, p, 1};
    const double coarse =
        sobolev::measured_sandwich_constant(DomainGrid(1, two_pi, 32), prm);
    const double fine =
        sobolev::measured_sandwich_constant(DomainGrid(1, two_pi, 64), prm);
    CHECK(std::isfinite(coarse));
    CHECK(coarse > 0.0);
    CHECK(std::abs(coarse - fine) <= 0.05 * std::max(coarse, fine));
  }
}

TEST_CASE("snapping picks the nearest periodic node") {
  const DomainGrid grid(1, two_pi, 8);
  const double h = grid.spacing();
  CHECK(grid.snap({0.49 * h}).node == 0);
  CHECK(grid.snap({0.51 * h}).node == 1);
  CHECK(grid.snap({two_pi - 0.2 * h}).node == 0);  // wraps around
  CHECK(grid.snap({3.2 * h}).distance == doctest::Approx(0.2 * h).epsilon(1e-9));
}

TEST_CASE("the quadratic game coincides with the kernel solver on evaluation grams") {
  Rng rng(44);
  const DomainGrid grid(1, two_pi, 32);
  const SobolevParams prm{2.0, 2.0, 1};
  const sobolev::PointEvaluations evals(grid, prm);

  const int horizon = 20;
  std::vector<Eigen::Index> nodes;
  std::vector<double> outcomes;
  for (int t = 0; t < horizon; ++t) {
    nodes.push_back(rng.uniform_int(0, 31));
    outcomes.push_back(rng.uniform(-1.0, 1.0));
  }
  const auto result = sobolev::run_game(grid, nodes, outcomes, prm, 1.0, 2.0);
  CHECK(result.game_exponent == doctest::Approx(2.0));

  Eigen::MatrixXd x(horizon, grid.points());
  for (int t = 0; t < horizon; ++t) x.row(t) = evals.at(nodes[t]).values();
  const Eigen::VectorXd root_mu = grid.space()->weights().array().sqrt();
  const auto gram = kaar::GramMatrix::from_factor(x * root_mu.asDiagonal());
  const auto reference = kaar::semi_online_predictions(gram, outcomes, 2.0);
  for (int t = 0; t < horizon; ++t)
    CHECK(result.trace.predictions[t] == doctest::Approx(reference[t]).epsilon(1e-6));
}

TEST_CASE("a single step predicts zero") {
  const DomainGrid grid(1, two_pi, 16);
  const SobolevParams prm{2.0, 2.0, 1};
  const auto result =
      sobolev::run_game(grid, std::vector<Eigen::Index>{3}, {0.8}, prm, 1.0);
  CHECK(result.trace.predictions[0] == doctest::Approx(0.0));
}

TEST_CASE("real-coordinate queries snap and record their distances") {
  const DomainGrid grid(1, two_pi, 16);
  const SobolevParams prm{2.0, 2.0, 1};
  const double h = grid.spacing();
  const std::vector<std::vector<double>> points = {{3.0 * h + 0.2 * h}, {5.0 * h}};
  const auto snapped = sobolev::run_game(grid, points, {0.8, -0.3}, prm, 1.0, 2.0);
  const auto exact = sobolev::run_game(grid, std::vector<Eigen::Index>{3, 5},
                                       {0.8, -0.3}, prm, 1.0, 2.0);
  REQUIRE(snapped.snap_distances.size() == 2);
  CHECK(snapped.snap_distances[0] == doctest::Approx(0.2 * h).epsilon(1e-9));
  CHECK(snapped.snap_distances[1] == doctest::Approx(0.0));
  for (int t = 0; t < 2; ++t)
    CHECK(snapped.trace.predictions[t] == doctest::Approx(exact.trace.predictions[t]));

  // evaluation signals snap the same way
  const sobolev::PointEvaluations evals(grid, prm);
  double distance = -1.0;
  const Signal beta = evals.at_point({3.0 * h + 0.2 * h}, &distance);
  CHECK(distance == doctest::Approx(0.2 * h).epsilon(1e-9));
  CHECK(beta.values() == evals.at(3).values());
}

TEST_CASE("labels from a fixed band-limited function are learned sublinearly") {
  Rng rng(55);
  const DomainGrid grid(1, two_pi, 32);
  const SobolevParams prm{2.0, 3.0, 1};
  const int horizon = 60;
  const Signal f = sobolev::random_band_limited(grid, rng);
  std::vector<Eigen::Index> nodes;
  std::vector<double> outcomes;
  double peak = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const Eigen::Index node = rng.uniform_int(0, 31);
    nodes.push_back(node);
    outcomes.push_back(f.values()[node]);
    peak = std::max(peak, std::abs(f.values()[node]));
  }
  const double outcome_bound = std::max(peak, 1e-6);
  const auto result = sobolev::run_game(grid, nodes, outcomes, prm, outcome_bound);

  // the generating function is an exact comparator via its lift
  const Signal lifted = sobolev::bessel_filter(f, grid, prm.smoothness, Filter::lift);
  const DualVector comparator{lifted.values(), prm.p, grid.space()};
  double comp_loss = 0.0;  // zero by construction
  double x_bound = 0.0;
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    const Signal beta = sobolev::PointEvaluations(grid, prm).at(nodes[t]);
    x_bound = std::max(x_bound, lp_norm(beta, result.game_exponent));
    const double d = outcomes[t] - pairing(comparator, beta);
    comp_loss += d * d;
  }
  CHECK(comp_loss <= 1e-10);
  const double nrm = dual_norm(comparator);
  const double bound =
      blaar::lp_regret(horizon, x_bound, outcome_bound, result.game_exponent, nrm * nrm);
  CHECK(result.trace.final_loss() <= comp_loss + bound + 1e-9);
}

TEST_CASE("parameter validation") {
  const SobolevParams rough{0.4, 2.0, 1};  // sp <= m
  CHECK_THROWS_AS(rough.validate(), std::invalid_argument);
  const SobolevParams endpoint{1.0, 1.0, 1};
  CHECK_THROWS_AS(endpoint.validate(), std::invalid_argument);
  const SobolevParams fine{1.0, 2.0, 1};
  CHECK_NOTHROW(fine.validate());
  CHECK_THROWS_AS(DomainGrid(1, two_pi, 1), std::invalid_argument);
  CHECK_THROWS_AS(DomainGrid(3, two_pi, 128), std::invalid_argument);  // over the cap
}
