#include "latreg/aar.hpp"

#include "latreg/measure.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace latreg::aar {

State::State(Eigen::Index dim, double ridge) : ridge_(ridge) {
  if (dim < 1) throw std::invalid_argument("aar: dimension must be >= 1");
  if (!(ridge > 0.0)) throw std::invalid_argument("aar: ridge parameter must be positive");
  gram_ = ridge * Eigen::MatrixXd::Identity(dim, dim);
  moment_ = Eigen::VectorXd::Zero(dim);
}

double State::predict(const Eigen::VectorXd& x_new) const {
  if (x_new.size() != dim()) throw std::invalid_argument("aar: dimension mismatch");
  if (!x_new.allFinite()) throw std::invalid_argument("aar: non-finite signal");
  Eigen::MatrixXd g = gram_;
  g.selfadjointView<Eigen::Lower>().rankUpdate(x_new);
  // a*I keeps g positive definite, so a plain Cholesky solve is enough.
  return moment_.dot(Eigen::LLT<Eigen::MatrixXd>(g).solve(x_new));
}

State State::updated(const Eigen::VectorXd& x, double y) const {
  if (x.size() != dim()) throw std::invalid_argument("aar: dimension mismatch");
  if (!x.allFinite() || !std::isfinite(y)) throw std::invalid_argument("aar: non-finite update");
  State next = *this;
  next.gram_.selfadjointView<Eigen::Lower>().rankUpdate(x);
  next.gram_ = next.gram_.selfadjointView<Eigen::Lower>();
  next.moment_ += y * x;
  return next;
}

std::vector<double> run_game(const std::vector<Eigen::VectorXd>& signals,
                             const std::vector<double>& outcomes, double ridge) {
  if (signals.size() != outcomes.size())
    throw std::invalid_argument("aar: signal/outcome length mismatch");
  if (signals.empty()) return {};
  State state(signals.front().size(), ridge);
  std::vector<double> predictions;
  predictions.reserve(signals.size());
  for (std::size_t t = 0; t < signals.size(); ++t) {
    predictions.push_back(state.predict(signals[t]));
    state = state.updated(signals[t], outcomes[t]);
  }
  return predictions;
}

double log_regret(int horizon, double signal_bound, double outcome_bound, double ridge,
                  Eigen::Index dim, double comparator_l2_sq) {
  if (horizon < 1 || dim < 1 || !(ridge > 0.0) || signal_bound < 0.0 ||
      outcome_bound < 0.0 || comparator_l2_sq < 0.0)
    throw std::invalid_argument("log_regret: invalid arguments");
  const double lg = std::log(horizon * signal_bound * signal_bound / ridge + 1.0);
  return ridge * comparator_l2_sq +
         static_cast<double>(dim) * outcome_bound * outcome_bound * lg;
}

double tuned_ridge(int horizon, Eigen::Index dim, double p) {
  if (horizon < 1 || dim < 1) throw std::invalid_argument("tuned_ridge: invalid arguments");
  const double q = dual_exponent(p);
  return std::sqrt(horizon * std::pow(static_cast<double>(dim), 1.0 - 2.0 / q));
}

TunedRegret tuned_regret(int horizon, double signal_bound, double outcome_bound,
                         Eigen::Index dim, double p, double comparator_p_sq) {
  if (horizon < 1 || dim < 1 || comparator_p_sq < 0.0)
    throw std::invalid_argument("tuned_regret: invalid arguments");
  const double q = dual_exponent(p);
  const double n = static_cast<double>(dim);
  const double regret = (outcome_bound * outcome_bound * signal_bound * signal_bound +
                         comparator_p_sq) *
                        std::sqrt(static_cast<double>(horizon)) *
                        std::pow(n, 0.5 - 1.0 / std::max(p, q));
  return {tuned_ridge(horizon, dim, p), regret};
}

double pnorm_log_regret(int horizon, double signal_bound, double outcome_bound,
                        Eigen::Index dim, double p, double ridge, double comparator_p_sq) {
  if (horizon < 1 || dim < 1 || !(ridge > 0.0) || comparator_p_sq < 0.0)
    throw std::invalid_argument("pnorm_log_regret: invalid arguments");
  dual_exponent(p);  // validates p > 1
  const double n = static_cast<double>(dim);
  const double comparator_term =
      p <= 2.0 ? ridge * comparator_p_sq
               : ridge * std::pow(n, 0.5 - 1.0 / p) * comparator_p_sq;
  const double lg = std::log(horizon * signal_bound * signal_bound / ridge + 1.0);
  return comparator_term + outcome_bound * outcome_bound * n * lg;
}

}  // namespace latreg::aar
