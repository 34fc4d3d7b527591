#include "latreg/blaar.hpp"

#include "latreg/errors.hpp"
#include "latreg/kaar.hpp"

#include <cmath>
#include <stdexcept>

namespace latreg::blaar {

void SemiOnlineGame::validate() const {
  config.validate();
  if (static_cast<int>(signals.size()) != config.horizon ||
      static_cast<int>(outcomes.size()) != config.horizon)
    throw std::invalid_argument("game: signal/outcome counts must equal the horizon");
}

namespace {

std::vector<double> cumulative(const std::vector<double>& predictions,
                               const std::vector<double>& outcomes) {
  std::vector<double> losses(predictions.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < predictions.size(); ++t) {
    const double d = outcomes[t] - predictions[t];
    acc += d * d;
    losses[t] = acc;
  }
  return losses;
}

bool check_outcome_range(const std::vector<double>& outcomes, double bound) {
  for (double y : outcomes)
    if (std::abs(y) > bound) {
      warn("outcome outside [-Y, Y]; regret guarantees do not apply to this run");
      return true;
    }
  return false;
}

}  // namespace

GameTrace run(const SemiOnlineGame& game, const lewis::Options& opt) {
  game.validate();
  const int horizon = game.config.horizon;
  const double p = game.config.p;

  GameTrace trace;
  trace.outcomes = game.outcomes;
  trace.outcome_range_violated = check_outcome_range(game.outcomes, game.config.outcome_bound);

  bool all_zero = true;
  for (const Signal& s : game.signals)
    if (s.values().cwiseAbs().maxCoeff() > 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) {
    warn("signal set has rank zero; predicting 0 at every step");
    trace.predictions.assign(horizon, 0.0);
    trace.cumulative_losses = cumulative(trace.predictions, trace.outcomes);
    trace.ridge = game.config.ridge.value_or(std::sqrt(static_cast<double>(horizon)));
    return trace;
  }

  const lewis::Basis basis = lewis::build(game.signals, p, opt);
  const double n = static_cast<double>(basis.rank());
  const double ridge = game.config.ridge.value_or(
      std::sqrt(horizon * std::pow(n, -std::abs(0.5 - 1.0 / p))));

  const kaar::GramMatrix gram = lewis::kernel(basis);
  trace.predictions = kaar::semi_online_predictions(gram, game.outcomes, ridge);
  trace.cumulative_losses = cumulative(trace.predictions, trace.outcomes);
  trace.ridge = ridge;
  trace.rank = basis.rank();
  trace.solver_residual = basis.residual;
  trace.kernel_scale = basis.map_scale * basis.map_scale;
  return trace;
}

double lp_regret(int horizon, double signal_bound, double outcome_bound, double p,
                 double comparator_norm_sq) {
  if (horizon < 1 || signal_bound < 0.0 || outcome_bound < 0.0 || comparator_norm_sq < 0.0)
    throw std::invalid_argument("lp_regret: invalid arguments");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp_regret: exponent must be finite and > 1");
  const double exponent = 0.5 + std::abs(0.5 - 1.0 / p);
  return (outcome_bound * outcome_bound * signal_bound * signal_bound + comparator_norm_sq) *
         std::pow(static_cast<double>(horizon), exponent);
}

double lattice_regret(int horizon, double signal_bound, double outcome_bound,
                      double p_convexity, double q_concavity, double m_convex,
                      double m_concave, double comparator_norm_sq) {
  if (horizon < 1 || comparator_norm_sq < 0.0)
    throw std::invalid_argument("lattice_regret: invalid arguments");
  if (!(p_convexity > 1.0 && p_convexity <= 2.0 && q_concavity >= 2.0 &&
        std::isfinite(q_concavity)))
    throw std::invalid_argument("lattice_regret: requires 1 < p <= 2 <= q < infinity");
  if (m_convex < 1.0 || m_concave < 1.0)
    throw std::invalid_argument("lattice_regret: convexity constants are >= 1");
  const double alpha =
      std::max(1.0 / p_convexity - 0.5, 0.5 - 1.0 / q_concavity);
  return (outcome_bound * outcome_bound * signal_bound * signal_bound + comparator_norm_sq) *
         m_convex * m_concave * std::pow(static_cast<double>(horizon), 0.5 + alpha);
}

double pbfs_regret(int horizon, double outcome_bound, double p_concavity,
                   double q_convexity, double evaluation_bound, double m_concave,
                   double m_convex, double comparator_norm_sq) {
  if (horizon < 1 || comparator_norm_sq < 0.0 || !std::isfinite(evaluation_bound))
    throw std::invalid_argument("pbfs_regret: invalid arguments");
  if (!(q_convexity > 1.0 && q_convexity <= 2.0 && p_concavity >= 2.0 &&
        std::isfinite(p_concavity)))
    throw std::invalid_argument("pbfs_regret: requires 1 < q <= 2 <= p < infinity");
  const double beta =
      std::max(1.0 / q_convexity - 0.5, 0.5 - 1.0 / p_concavity);
  return (outcome_bound * outcome_bound * evaluation_bound * evaluation_bound +
          comparator_norm_sq) *
         m_concave * m_convex * std::pow(static_cast<double>(horizon), 0.5 + beta);
}

}  // namespace latreg::blaar
