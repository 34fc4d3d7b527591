#pragma once

#include <Eigen/Core>

#include <vector>

namespace latreg::aar {

// Online ridge-regression accumulator over R^n:
//   gram   = a*I + sum_t x_t x_t'
//   moment = sum_t y_t x_t
// Immutable snapshot; updated() returns a new state.
class State {
 public:
  State(Eigen::Index dim, double ridge);

  Eigen::Index dim() const { return moment_.size(); }
  double ridge() const { return ridge_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& moment() const { return moment_; }

  // Prediction for x_new. The new signal is counted inside the gram term
  // before the solve; the outcome for x_new is not needed.
  double predict(const Eigen::VectorXd& x_new) const;

  State updated(const Eigen::VectorXd& x, double y) const;

 private:
  Eigen::MatrixXd gram_;
  Eigen::VectorXd moment_;
  double ridge_;
};

// Full run over a signal/outcome sequence; prediction at step t sees outcomes
// 1..t-1 only.
std::vector<double> run_game(const std::vector<Eigen::VectorXd>& signals,
                             const std::vector<double>& outcomes, double ridge);

// Regret term a|theta|_2^2 + n Y^2 ln(T X^2 / a + 1); X bounds the sup-norm
// of the signals.
double log_regret(int horizon, double signal_bound, double outcome_bound, double ridge,
                  Eigen::Index dim, double comparator_l2_sq);

struct TunedRegret {
  double ridge;   // prescribed a = sqrt(T n^{1-2/q})
  double regret;  // (Y^2 X^2 + |theta|_p^2) T^{1/2} n^{1/2 - 1/max(p,q)}
};

// The ridge prescription sqrt(T n^{1-2/q}) behind tuned_regret.
double tuned_ridge(int horizon, Eigen::Index dim, double p);

// Square-root-in-T regret with the ridge tuned for signals bounded in the
// q-norm and comparators measured in the dual p-norm. Both q-regimes reduce
// to the same closed forms.
TunedRegret tuned_regret(int horizon, double signal_bound, double outcome_bound,
                         Eigen::Index dim, double p, double comparator_p_sq);

// Logarithmic-in-T regret with the comparator term measured in the p-norm:
// a|theta|_p^2 for p <= 2, a n^{1/2-1/p}|theta|_p^2 for p > 2, plus the
// shared Y^2 n log term.
double pnorm_log_regret(int horizon, double signal_bound, double outcome_bound,
                        Eigen::Index dim, double p, double ridge, double comparator_p_sq);

}  // namespace latreg::aar
