#pragma once

#include "latreg/lewis.hpp"
#include "latreg/measure.hpp"

#include <vector>

namespace latreg::blaar {

// Semi-online square-loss game: every signal is announced before the first
// outcome, outcomes are revealed step by step.
struct SemiOnlineGame {
  std::vector<Signal> signals;
  std::vector<double> outcomes;
  GameConfig config;

  void validate() const;
};

struct GameTrace {
  std::vector<double> predictions;
  std::vector<double> outcomes;
  std::vector<double> cumulative_losses;  // L_t = L_{t-1} + (y_t - gamma_t)^2
  double ridge = 0.0;                     // a actually used
  Eigen::Index rank = 0;                  // dimension of the signal span
  double solver_residual = 0.0;
  double kernel_scale = 1.0;              // squared non-expansion safeguard
  bool outcome_range_violated = false;

  double final_loss() const {
    return cumulative_losses.empty() ? 0.0 : cumulative_losses.back();
  }
};

// The full pipeline: maximal independent subset, determinant-maximizing
// basis, ridge a = sqrt(T n^{-|1/2-1/p|}) unless the config overrides it,
// then per-step kernel predictions. A signal set of rank zero degrades to
// all-zero predictions with a warning.
GameTrace run(const SemiOnlineGame& game, const lewis::Options& opt = {});

// (Y^2 X^2 + |f|^2) T^{1/2 + |1/2 - 1/p|}: regret against any functional of
// dual norm |f| when signals are bounded by X in the p-norm.
double lp_regret(int horizon, double signal_bound, double outcome_bound, double p,
                 double comparator_norm_sq);

// (Y^2 X^2 + |f|^2) Mp Mq T^{1/2 + alpha}, alpha = max(1/p - 1/2, 1/2 - 1/q),
// for a p-convex q-concave lattice with 1 < p <= 2 <= q < infinity.
// Evaluator only; no general-lattice algorithm backs it.
double lattice_regret(int horizon, double signal_bound, double outcome_bound,
                      double p_convexity, double q_concavity, double m_convex,
                      double m_concave, double comparator_norm_sq);

// (Y^2 c_B^2 + |f|^2) Mp Mq T^{1/2 + beta}, beta = max(1/q - 1/2, 1/2 - 1/p),
// for a q-convex p-concave function space with bounded point evaluations
// c_B, 1 < q <= 2 <= p < infinity.
double pbfs_regret(int horizon, double outcome_bound, double p_concavity,
                   double q_convexity, double evaluation_bound, double m_concave,
                   double m_convex, double comparator_norm_sq);

}  // namespace latreg::blaar
