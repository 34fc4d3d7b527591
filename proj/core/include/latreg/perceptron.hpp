#pragma once

#include "latreg/sobolev.hpp"

#include <Eigen/Core>

#include <vector>

namespace latreg::sop {

// Second-order perceptron state. Only mistaken trials enter the accumulator
// a*I + sum r_i r_i' and the vote sum y_i r_i. Immutable snapshot.
class State {
 public:
  State(Eigen::Index dim, double ridge);

  Eigen::Index dim() const { return vote_.size(); }
  const Eigen::MatrixXd& accumulator() const { return accumulator_; }
  const Eigen::VectorXd& vote() const { return vote_; }
  const std::vector<int>& mistake_trials() const { return mistake_trials_; }
  int trials_seen() const { return trials_seen_; }

  // sign of vote' (a I + sum r r')^{-1} r_new, with sign(0) = +1
  int predict(const Eigen::VectorXd& r_new) const;

  // Advances the trial counter; accumulates only when predicted != label.
  State updated(const Eigen::VectorXd& r, int label, int predicted) const;

 private:
  Eigen::MatrixXd accumulator_;
  Eigen::VectorXd vote_;
  std::vector<int> mistake_trials_;
  int trials_seen_ = 0;
  double ridge_;
};

// max{0, margin - y * f_value}
double hinge_loss(double f_value, int label, double margin);

// Mistake bound: with R^2 = c_B^2 (horizon_factor |f|^2 + (1/a) sum f(x_i)^2
// over mistaken trials) and D the cumulative hinge loss, the mistake count is
// at most R^2/(2 margin^2) + D/margin + (R/margin) sqrt(D/margin +
// R^2/(4 margin^2)).
double mistake_bound(double margin, double comparator_norm_sq, double horizon_factor,
                     double ridge, const std::vector<double>& comparator_on_mistakes,
                     double evaluation_bound, double hinge_total);

struct ClassifyResult {
  int mistakes = 0;
  Eigen::Index rank = 0;
  std::vector<int> predictions;
  std::vector<int> mistake_trials;
  Eigen::MatrixXd coords;        // T x n preprocessed vectors, one per trial
  double evaluation_bound = 0.0; // measured uniform dual norm c_B
  double basis_residual = 0.0;
};

// Full pipeline: evaluation signals for the queried nodes, the
// determinant-maximizing basis over them, then the second-order perceptron
// on the resulting coordinate vectors.
ClassifyResult classify_run(const sobolev::DomainGrid& grid,
                            const std::vector<Eigen::Index>& nodes,
                            const std::vector<int>& labels,
                            const sobolev::SobolevParams& prm, double margin,
                            double ridge, const lewis::Options& opt = {});

}  // namespace latreg::sop
