#include "latreg/lewis.hpp"

#include "latreg/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace latreg::lewis {

namespace {

void check_common_space(const std::vector<Signal>& signals) {
  if (signals.empty()) throw std::invalid_argument("lewis: empty signal set");
  const Signal& first = signals.front();
  for (const Signal& s : signals) {
    if (s.size() != first.size())
      throw std::invalid_argument("lewis: signals of different lengths");
    const bool a = s.space() != nullptr, b = first.space() != nullptr;
    if (a != b || (a && !s.space()->same_as(*first.space())))
      throw std::invalid_argument("lewis: signals on different spaces");
  }
}

Eigen::VectorXd measure_of(const std::vector<Signal>& signals) {
  if (signals.front().space()) return signals.front().space()->weights();
  return Eigen::VectorXd::Ones(signals.front().size());
}

// rows = signals
Eigen::MatrixXd stack(const std::vector<Signal>& signals) {
  Eigen::MatrixXd x(signals.size(), signals.front().size());
  for (std::size_t i = 0; i < signals.size(); ++i) x.row(i) = signals[i].values();
  return x;
}

Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  if (ev(0) <= ev(ev.size() - 1) * 1e-14 || ev(0) <= 0.0)
    throw std::runtime_error("lewis: weighted Gram lost rank");
  const Eigen::VectorXd inv_sqrt = ev.array().rsqrt();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
}

// envelope^{p-2}, clamped away from zero for p < 2 where the exponent is
// singular at envelope zeros.
Eigen::VectorXd envelope_weight(const Eigen::VectorXd& envelope, double p) {
  if (p == 2.0) return Eigen::VectorXd::Ones(envelope.size());
  if (p > 2.0) return envelope.array().pow(p - 2.0);
  const double eps = 1e-12 * envelope.maxCoeff();
  return envelope.array().max(eps).pow(p - 2.0);
}

double weighted_lp(const Eigen::VectorXd& v, const Eigen::VectorXd& mu, double p) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    sum += mu[k] * std::pow(std::abs(v[k]), p);
  return std::pow(sum, 1.0 / p);
}

}  // namespace

IndependentSubset max_independent_subset(const std::vector<Signal>& signals, double tol) {
  check_common_space(signals);
  const Eigen::Index points = signals.front().size();
  const Eigen::Index total = static_cast<Eigen::Index>(signals.size());
  const Eigen::VectorXd mu = measure_of(signals);
  const Eigen::VectorXd root_mu = mu.array().sqrt();

  double vmax = 0.0;
  for (const Signal& s : signals)
    vmax = std::max(vmax, (root_mu.array() * s.values().array()).matrix().norm());
  if (vmax == 0.0)
    throw std::invalid_argument("lewis: every signal is zero, nothing spans");

  const double threshold = std::max(tol, 1e-14) * vmax;

  Eigen::MatrixXd q(points, std::min(points, total));  // orthonormal columns
  Eigen::MatrixXd r(q.cols(), q.cols());               // x_{r_j} = q * r.col(j)
  r.setZero();
  Eigen::Index rank = 0;

  std::vector<Eigen::Index> indices;
  Eigen::MatrixXd coeff(total, q.cols());
  coeff.setZero();

  for (Eigen::Index s = 0; s < total; ++s) {
    Eigen::VectorXd v = root_mu.array() * signals[s].values().array();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(rank);
    if (rank > 0) {
      c = q.leftCols(rank).transpose() * v;
      v -= q.leftCols(rank) * c;
      // one reorthogonalization pass keeps the expansion residual tight
      const Eigen::VectorXd c2 = q.leftCols(rank).transpose() * v;
      v -= q.leftCols(rank) * c2;
      c += c2;
    }
    const double rnorm = v.norm();
    if (rnorm > threshold && rank < q.cols()) {
      q.col(rank) = v / rnorm;
      r.col(rank).head(rank) = c;
      r(rank, rank) = rnorm;
      coeff(s, rank) = 1.0;  // exact unit row for a selected signal
      indices.push_back(s);
      ++rank;
    } else if (rank > 0) {
      coeff.row(s).head(rank) = r.topLeftCorner(rank, rank)
                                    .triangularView<Eigen::Upper>()
                                    .solve(c)
                                    .transpose();
    }
  }
  if (rank == 0) throw std::invalid_argument("lewis: every signal is zero, nothing spans");

  IndependentSubset out;
  out.indices = std::move(indices);
  out.alphas = coeff.leftCols(rank);
  return out;
}

namespace {

struct CoreSolution {
  Eigen::MatrixXd C, gamma;
  Eigen::VectorXd envelope, weight;
  double residual = 0.0;
  int iterations = 0;
};

CoreSolution solve_core(const Eigen::MatrixXd& x, const Eigen::VectorXd& mu, double p,
                        const Options& opt) {
  const Eigen::Index n = x.rows();
  const double root_n = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

  Eigen::VectorXd h = Eigen::VectorXd::Ones(x.cols());  // weight that built C
  Eigen::MatrixXd c;
  double prev_residual = std::numeric_limits<double>::infinity();
  bool damped = false;

  CoreSolution sol;
  for (int it = 0; it <= opt.max_iter; ++it) {
    Eigen::MatrixXd g = x * (mu.array() * h.array()).matrix().asDiagonal() * x.transpose();
    c = inv_sqrt_spd(0.5 * (g + g.transpose())) / root_n;

    Eigen::MatrixXd gamma = c * x;
    Eigen::VectorXd envelope = gamma.colwise().norm();
    const double nu = weighted_lp(envelope, mu, p);
    c /= nu;
    gamma /= nu;
    envelope /= nu;

    const Eigen::VectorXd w = envelope_weight(envelope, p);
    const Eigen::MatrixXd b =
        static_cast<double>(n) * gamma * (mu.array() * w.array()).matrix().asDiagonal() *
        gamma.transpose();
    const double residual = (b - eye).norm();

    sol.C = c;
    sol.gamma = std::move(gamma);
    sol.envelope = std::move(envelope);
    sol.weight = w;
    sol.residual = residual;
    sol.iterations = it;

    if (residual <= opt.tol) return sol;
    // Oscillating or stalling residual means the plain iteration is near its
    // stability boundary (the envelope-weight map loses contraction as p
    // grows); geometric weight mixing restores it. Sticky once engaged.
    if (residual > 0.9 * prev_residual) damped = true;
    prev_residual = residual;

    h = damped ? (h.array() * w.array()).sqrt().matrix().eval() : w;
  }
  throw SolverError("lewis: fixed-point iteration did not converge", sol.residual,
                    sol.iterations);
}

Basis assemble(const std::vector<Signal>& signals, const IndependentSubset& subset,
               double p, const Options& opt) {
  std::vector<Signal> selected;
  selected.reserve(subset.indices.size());
  for (Eigen::Index idx : subset.indices) selected.push_back(signals[idx]);

  const Eigen::MatrixXd x = stack(selected);
  const Eigen::VectorXd mu = measure_of(selected);
  CoreSolution core = solve_core(x, mu, p, opt);

  Basis b;
  b.indices = subset.indices;
  b.C = std::move(core.C);
  b.D = b.C.inverse();
  b.gamma = std::move(core.gamma);
  b.envelope = std::move(core.envelope);
  b.weight = std::move(core.weight);
  b.alphas = subset.alphas;
  b.mu = mu;
  b.space = signals.front().space();
  b.p = p;
  b.residual = core.residual;
  b.iterations = core.iterations;

  b.signal_pnorms.resize(signals.size());
  for (std::size_t s = 0; s < signals.size(); ++s)
    b.signal_pnorms(s) = lp_norm(signals[s], p);

  // Non-expansion safeguard: the raw map can expand sample norms when p < 2;
  // shrink it uniformly so that |r_s|_2 <= |x_s|_p holds on every sample.
  const Eigen::MatrixXd raw = b.alphas * b.D / std::sqrt(static_cast<double>(b.rank()));
  double worst = 0.0;
  for (Eigen::Index s = 0; s < raw.rows(); ++s) {
    const double norm2 = b.signal_pnorms(s);
    if (norm2 > 0.0) worst = std::max(worst, raw.row(s).squaredNorm() / (norm2 * norm2));
  }
  b.map_scale = worst > 1.0 + 1e-8 ? 1.0 / std::sqrt(worst) : 1.0;
  return b;
}

}  // namespace

Basis solve(const std::vector<Signal>& selected, double p, const Options& opt) {
  check_common_space(selected);
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lewis: exponent must be finite and > 1");
  IndependentSubset identity;
  identity.indices.resize(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i)
    identity.indices[i] = static_cast<Eigen::Index>(i);
  identity.alphas = Eigen::MatrixXd::Identity(selected.size(), selected.size());
  return assemble(selected, identity, p, opt);
}

Basis build(const std::vector<Signal>& signals, double p, const Options& opt) {
  check_common_space(signals);
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lewis: exponent must be finite and > 1");
  return assemble(signals, max_independent_subset(signals, opt.rank_tol), p, opt);
}

Eigen::MatrixXd coordinates(const Basis& b) {
  return (b.map_scale / std::sqrt(static_cast<double>(b.rank()))) * b.alphas * b.D;
}

Eigen::VectorXd span_coordinates(const Basis& b, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != b.rank())
    throw std::invalid_argument("lewis: coefficient length does not match rank");
  return (b.map_scale / std::sqrt(static_cast<double>(b.rank()))) *
         (b.D.transpose() * coeffs);
}

kaar::GramMatrix kernel(const Basis& b) {
  return kaar::GramMatrix::from_factor(coordinates(b));
}

kaar::GramMatrix weighted_integral_kernel(const Basis& b) {
  const Eigen::MatrixXd reconstructed = b.alphas * b.D * b.gamma;  // T x M
  const Eigen::VectorXd half = (b.mu.array() * b.weight.array()).sqrt();
  return kaar::GramMatrix::from_factor(b.map_scale * reconstructed * half.asDiagonal());
}

}  // namespace latreg::lewis
