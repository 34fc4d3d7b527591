#include "latreg/aar.hpp"
#include "latreg/blaar.hpp"
#include "latreg/kaar.hpp"
#include "latreg/lewis.hpp"
#include "latreg/measure.hpp"
#include "latreg/rng.hpp"
#include "latreg/sobolev.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace latreg;

namespace {

std::vector<Signal> make_signals(int count, int points, int rank, double p,
                                 std::uint64_t seed) {
  Rng rng(seed);
  SpacePtr space = MeasureSpace::uniform(points, 1.0 / points);
  std::vector<Eigen::VectorXd> basis;
  for (int i = 0; i < rank; ++i) {
    Eigen::VectorXd v(points);
    for (int k = 0; k < points; ++k) v[k] = rng.normal();
    basis.push_back(v);
  }
  std::vector<Signal> out;
  for (int t = 0; t < count; ++t) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(points);
    for (const auto& b : basis) v += rng.normal() * b;
    Signal s = Signal::on(space, v);
    const double nrm = lp_norm(s, p);
    out.push_back(Signal::on(space, Eigen::VectorXd(v / nrm)));
  }
  return out;
}

void BM_LewisSolve(benchmark::State& state) {
  const int rank = static_cast<int>(state.range(0));
  const double p = state.range(1) / 10.0;
  const auto signals = make_signals(rank, 64, rank, p, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lewis::solve(signals, p));
  }
}
BENCHMARK(BM_LewisSolve)
    ->Args({2, 15})
    ->Args({2, 40})
    ->Args({6, 15})
    ->Args({6, 40})
    ->Args({12, 30});

void BM_SemiOnlineKernelGame(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  Rng rng(2);
  Eigen::MatrixXd factor(horizon, 8);
  std::vector<double> outcomes(horizon);
  for (int t = 0; t < horizon; ++t) {
    for (int i = 0; i < 8; ++i) factor(t, i) = rng.normal();
    outcomes[t] = rng.uniform(-1.0, 1.0);
  }
  const auto gram = kaar::GramMatrix::from_factor(factor);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kaar::semi_online_predictions(gram, outcomes, 2.0));
  }
}
BENCHMARK(BM_SemiOnlineKernelGame)->Arg(50)->Arg(200)->Arg(400);

void BM_LatticeGame(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  blaar::SemiOnlineGame game;
  game.config.p = 3.0;
  game.config.outcome_bound = 1.0;
  game.config.horizon = horizon;
  game.signals = make_signals(horizon, 32, 5, 3.0, 3);
  Rng rng(4);
  for (int t = 0; t < horizon; ++t) game.outcomes.push_back(rng.uniform(-1.0, 1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(blaar::run(game));
  }
}
BENCHMARK(BM_LatticeGame)->Arg(50)->Arg(200);

void BM_BesselFilter(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const sobolev::DomainGrid grid(1, 6.283185307179586, res);
  Rng rng(5);
  const Signal f = sobolev::random_band_limited(grid, rng, 8, res / 4);
  const sobolev::BesselFilter filter(grid, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter.apply(f, sobolev::Filter::lift));
  }
}
BENCHMARK(BM_BesselFilter)->Arg(64)->Arg(256)->Arg(1024);

void BM_CoordinatePredict(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(6);
  aar::State st(dim, 1.0);
  for (int t = 0; t < 4 * dim; ++t) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = rng.normal();
    st = st.updated(x, rng.uniform(-1.0, 1.0));
  }
  Eigen::VectorXd query(dim);
  for (int i = 0; i < dim; ++i) query[i] = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(st.predict(query));
  }
}
BENCHMARK(BM_CoordinatePredict)->Arg(8)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
