#include "latreg/sobolev.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace latreg::sobolev {

namespace {

constexpr double k_two_pi = 6.283185307179586476925286766559;

// FFTW planner state is global; serialize plan creation/destruction.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

DomainGrid::DomainGrid(int dim, double side, int resolution, Eigen::Index point_cap)
    : dim_(dim), side_(side), res_(resolution) {
  if (dim < 1 || dim > 6) throw std::invalid_argument("grid: dimension must be in [1, 6]");
  if (!(side > 0.0)) throw std::invalid_argument("grid: side length must be positive");
  if (resolution < 2) throw std::invalid_argument("grid: resolution must be >= 2 per axis");
  Eigen::Index pts = 1;
  for (int a = 0; a < dim; ++a) {
    pts *= resolution;
    if (pts > point_cap) throw std::invalid_argument("grid: total points exceed the cap");
  }
  points_ = pts;
  cell_volume_ = std::pow(side_ / res_, dim_);
  space_ = MeasureSpace::uniform(points_, cell_volume_);
}

Eigen::Index DomainGrid::flat(const std::vector<int>& coords) const {
  if (static_cast<int>(coords.size()) != dim_)
    throw std::invalid_argument("grid: coordinate arity mismatch");
  Eigen::Index idx = 0;
  for (int a = 0; a < dim_; ++a) {
    const int c = coords[a];
    if (c < 0 || c >= res_) throw std::invalid_argument("grid: coordinate out of range");
    idx = idx * res_ + c;
  }
  return idx;
}

std::vector<int> DomainGrid::coords(Eigen::Index flat) const {
  if (flat < 0 || flat >= points_) throw std::invalid_argument("grid: index out of range");
  std::vector<int> c(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    c[a] = static_cast<int>(flat % res_);
    flat /= res_;
  }
  return c;
}

std::vector<double> DomainGrid::position(Eigen::Index flat) const {
  const std::vector<int> c = coords(flat);
  std::vector<double> x(dim_);
  for (int a = 0; a < dim_; ++a) x[a] = c[a] * spacing();
  return x;
}

double DomainGrid::frequency_sq(Eigen::Index flat) const {
  const std::vector<int> c = coords(flat);
  double sum = 0.0;
  for (int a = 0; a < dim_; ++a) {
    int wrapped = c[a] <= (res_ - 1) / 2 ? c[a] : c[a] - res_;
    const double y = k_two_pi * wrapped / side_;
    sum += y * y;
  }
  return sum;
}

DomainGrid::Snap DomainGrid::snap(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) != dim_)
    throw std::invalid_argument("grid: point arity mismatch");
  std::vector<int> c(dim_);
  double dist_sq = 0.0;
  for (int a = 0; a < dim_; ++a) {
    const double t = point[a] / spacing();
    const long long r = std::llround(t);
    const double dx = point[a] - r * spacing();
    dist_sq += dx * dx;
    long long wrapped = r % res_;
    if (wrapped < 0) wrapped += res_;
    c[a] = static_cast<int>(wrapped);
  }
  return {flat(c), std::sqrt(dist_sq)};
}

void SobolevParams::validate() const {
  if (!(smoothness > 0.0) || !std::isfinite(smoothness))
    throw std::invalid_argument("sobolev: smoothness must be positive");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("sobolev: integrability exponent must be > 1");
  if (dim < 1) throw std::invalid_argument("sobolev: dimension must be >= 1");
  if (!(smoothness * p > dim))
    throw std::invalid_argument("sobolev: requires s*p > m for bounded point evaluations");
}

namespace {

// Unnormalized c2c transform pair on one grid; filtered() runs
// forward -> pointwise multiplier -> backward / M.
struct Transform {
  const DomainGrid& grid;
  std::vector<std::complex<double>> buffer;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Transform(const DomainGrid& g) : grid(g), buffer(g.points()) {
    std::vector<int> dims(g.dim(), g.resolution());
    auto* raw = reinterpret_cast<fftw_complex*>(buffer.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft(g.dim(), dims.data(), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft(g.dim(), dims.data(), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward || !backward) throw std::runtime_error("sobolev: fftw plan creation failed");
  }

  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  ~Transform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }

  Eigen::VectorXd filtered(const Eigen::VectorXd& in, const Eigen::VectorXd& multiplier) {
    const Eigen::Index m = grid.points();
    for (Eigen::Index j = 0; j < m; ++j) buffer[j] = {in[j], 0.0};
    fftw_execute(forward);
    for (Eigen::Index k = 0; k < m; ++k) buffer[k] *= multiplier[k];
    fftw_execute(backward);
    Eigen::VectorXd out(m);
    const double scale = 1.0 / static_cast<double>(m);
    for (Eigen::Index j = 0; j < m; ++j) out[j] = buffer[j].real() * scale;
    return out;
  }
};

}  // namespace

struct BesselFilter::Impl {
  Transform transform;
  Eigen::VectorXd lift_multiplier;

  Impl(const DomainGrid& g, double smoothness) : transform(g) {
    const Eigen::Index m = g.points();
    lift_multiplier.resize(m);
    for (Eigen::Index k = 0; k < m; ++k)
      lift_multiplier[k] = std::pow(1.0 + g.frequency_sq(k), smoothness / 2.0);
  }
};

BesselFilter::BesselFilter(const DomainGrid& grid, double smoothness)
    : impl_(std::make_unique<Impl>(grid, smoothness)) {
  if (!(smoothness > 0.0) || !std::isfinite(smoothness))
    throw std::invalid_argument("sobolev: smoothness must be positive");
}

BesselFilter::~BesselFilter() = default;

Signal BesselFilter::apply(const Signal& f, Filter direction) const {
  const DomainGrid& grid = impl_->transform.grid;
  if (f.size() != grid.points())
    throw std::invalid_argument("sobolev: signal does not match the grid");
  const Eigen::VectorXd mult = direction == Filter::lift
                                   ? impl_->lift_multiplier
                                   : impl_->lift_multiplier.cwiseInverse();
  return Signal::on(grid.space(), impl_->transform.filtered(f.values(), mult));
}

Signal bessel_filter(const Signal& f, const DomainGrid& grid, double smoothness,
                     Filter direction) {
  return BesselFilter(grid, smoothness).apply(f, direction);
}

double sobolev_norm(const Signal& f, const DomainGrid& grid, const SobolevParams& prm) {
  prm.validate();
  if (prm.dim != grid.dim()) throw std::invalid_argument("sobolev: dimension mismatch");
  return lp_norm(bessel_filter(f, grid, prm.smoothness, Filter::lift), prm.p);
}

PointEvaluations::PointEvaluations(const DomainGrid& grid, const SobolevParams& prm)
    : grid_(grid) {
  prm.validate();
  if (prm.dim != grid.dim()) throw std::invalid_argument("sobolev: dimension mismatch");
  const Eigen::Index m = grid.points();

  // base kernel at node 0: inverse transform of the lowering multiplier,
  // scaled so that the measure-weighted pairing against lift(f) returns f(0)
  BesselFilter filter(grid, prm.smoothness);
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(m);
  delta[0] = 1.0 / grid.cell_volume();
  base_ = filter.apply(Signal::on(grid.space(), std::move(delta)), Filter::lower);

  Signal probe = base_;
  DualVector dual{probe.values(), dual_exponent(prm.p), grid.space()};
  dual_norm_ = latreg::dual_norm(dual);
}

Signal PointEvaluations::at_point(const std::vector<double>& point,
                                  double* snap_distance) const {
  const DomainGrid::Snap snap = grid_.snap(point);
  if (snap_distance) *snap_distance = snap.distance;
  return at(snap.node);
}

Signal PointEvaluations::at(Eigen::Index node) const {
  const std::vector<int> shift = grid_.coords(node);
  const Eigen::Index m = grid_.points();
  Eigen::VectorXd out(m);
  std::vector<int> c(grid_.dim());
  for (Eigen::Index j = 0; j < m; ++j) {
    const std::vector<int> cj = grid_.coords(j);
    for (int a = 0; a < grid_.dim(); ++a) {
      int v = cj[a] - shift[a];
      if (v < 0) v += grid_.resolution();
      c[a] = v;
    }
    out[j] = base_.values()[grid_.flat(c)];
  }
  return Signal::on(grid_.space(), std::move(out));
}

Signal random_band_limited(const DomainGrid& grid, Rng& rng, int n_modes, int max_mode) {
  const Eigen::Index m = grid.points();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
  const int cap = std::min(max_mode, grid.resolution() / 2 - 1);
  for (int mode = 0; mode < n_modes; ++mode) {
    std::vector<int> k(grid.dim());
    for (int a = 0; a < grid.dim(); ++a) k[a] = rng.uniform_int(-cap, cap);
    const double amp = 0.5 * rng.normal();
    const double phase = rng.uniform(0.0, k_two_pi);
    for (Eigen::Index j = 0; j < m; ++j) {
      const std::vector<int> c = grid.coords(j);
      double arg = phase;
      for (int a = 0; a < grid.dim(); ++a)
        arg += k_two_pi * k[a] * c[a] / grid.resolution();
      f[j] += amp * std::cos(arg);
    }
  }
  return Signal::on(grid.space(), std::move(f));
}

double measured_sandwich_constant(const DomainGrid& grid, const SobolevParams& prm,
                                  std::uint64_t seed, int family) {
  prm.validate();
  const Eigen::Index m = grid.points();
  Transform transform(grid);
  Eigen::VectorXd lift_mult(m), homogeneous_mult(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    lift_mult[k] = std::pow(1.0 + grid.frequency_sq(k), prm.smoothness / 2.0);
    homogeneous_mult[k] = std::pow(grid.frequency_sq(k), prm.smoothness / 2.0);
  }

  Rng rng(seed);
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < family; ++i) {
    const Signal f = random_band_limited(grid, rng);
    const Signal lifted =
        Signal::on(grid.space(), transform.filtered(f.values(), lift_mult));
    const Signal smoothed =
        Signal::on(grid.space(), transform.filtered(f.values(), homogeneous_mult));
    const double reference = lp_norm(f, prm.p) + lp_norm(smoothed, prm.p);
    if (reference <= 0.0) continue;
    const double ratio = lp_norm(lifted, prm.p) / reference;
    hi = std::max(hi, ratio);
    lo = std::min(lo, ratio);
  }
  if (!(lo > 0.0) || !std::isfinite(hi))
    throw std::runtime_error("sobolev: degenerate sandwich measurement");
  return std::max(hi, 1.0 / lo);
}

SobolevTrace run_game(const DomainGrid& grid, const std::vector<Eigen::Index>& nodes,
                      const std::vector<double>& outcomes, const SobolevParams& prm,
                      double outcome_bound, std::optional<double> ridge,
                      const lewis::Options& opt) {
  prm.validate();
  PointEvaluations evals(grid, prm);

  blaar::SemiOnlineGame game;
  game.config.p = dual_exponent(prm.p);
  game.config.outcome_bound = outcome_bound;
  game.config.horizon = static_cast<int>(nodes.size());
  game.config.ridge = ridge;
  game.signals.reserve(nodes.size());
  for (Eigen::Index node : nodes) game.signals.push_back(evals.at(node));
  game.outcomes = outcomes;

  SobolevTrace out;
  out.game_exponent = game.config.p;
  out.trace = blaar::run(game, opt);
  return out;
}

SobolevTrace run_game(const DomainGrid& grid,
                      const std::vector<std::vector<double>>& points,
                      const std::vector<double>& outcomes, const SobolevParams& prm,
                      double outcome_bound, std::optional<double> ridge,
                      const lewis::Options& opt) {
  std::vector<Eigen::Index> nodes;
  std::vector<double> distances;
  nodes.reserve(points.size());
  distances.reserve(points.size());
  for (const auto& point : points) {
    const DomainGrid::Snap snap = grid.snap(point);
    nodes.push_back(snap.node);
    distances.push_back(snap.distance);
  }
  SobolevTrace out = run_game(grid, nodes, outcomes, prm, outcome_bound, ridge, opt);
  out.snap_distances = std::move(distances);
  return out;
}

}  // namespace latreg::sobolev
