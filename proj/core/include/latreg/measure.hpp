#pragma once

#include <Eigen/Core>

#include <memory>
#include <optional>

namespace latreg {

// Finite weighted sample space: M points carrying strictly positive weights.
// Function-space signals are sampled on such a space and every integral is a
// weighted sum, so norms, pairings and kernels are exactly computable.
class MeasureSpace {
 public:
  explicit MeasureSpace(Eigen::VectorXd weights);

  static std::shared_ptr<const MeasureSpace> make(Eigen::VectorXd weights);
  static std::shared_ptr<const MeasureSpace> uniform(Eigen::Index points,
                                                     double weight = 1.0);

  Eigen::Index size() const { return weights_.size(); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double total() const { return weights_.sum(); }

  bool same_as(const MeasureSpace& other) const;

 private:
  Eigen::VectorXd weights_;
};

using SpacePtr = std::shared_ptr<const MeasureSpace>;

// A vector of real values, either plain coordinates (space() == nullptr) or
// samples of a function on a MeasureSpace. Immutable value type.
class Signal {
 public:
  Signal() = default;

  static Signal coordinates(Eigen::VectorXd values);
  static Signal on(SpacePtr space, Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  const SpacePtr& space() const { return space_; }
  Eigen::Index size() const { return values_.size(); }
  bool coordinate_mode() const { return space_ == nullptr; }

 private:
  Signal(SpacePtr space, Eigen::VectorXd values);

  Eigen::VectorXd values_;
  SpacePtr space_;
};

// A continuous linear functional represented by its density w: the functional
// acts on a signal x by the weighted pairing below. The exponent is the dual
// exponent p' with 1/p + 1/p' = 1; the functional's norm is the p'-norm of w.
struct DualVector {
  Eigen::VectorXd values;
  double exponent = 2.0;
  SpacePtr space;  // nullptr for coordinate mode

  Eigen::Index size() const { return values.size(); }
};

// Parameters of one square-loss prediction game.
struct GameConfig {
  double p = 2.0;               // lattice exponent, finite, > 1
  double outcome_bound = 1.0;   // outcomes lie in [-Y, Y], Y > 0
  int horizon = 1;              // number of steps T
  std::optional<double> ridge;  // regularization a; derived when absent

  void validate() const;
};

// (sum_k mu_k |v_k|^p)^{1/p} on a measure space, (sum_i |v_i|^p)^{1/p} in
// coordinate mode. Requires finite p >= 1 and finite values.
double lp_norm(const Signal& x, double p);

// p' with 1/p + 1/p' = 1. Requires p > 1 (p' = infinity is unsupported).
double dual_exponent(double p);

// Smallest c with |a|_2 <= c |a|_q over R^n: 1 for q <= 2, n^{1/2-1/q} for
// q >= 2.
double norm_equiv_factor(Eigen::Index n, double q);

// sum_k mu_k w_k v_k (measure mode) or sum_i w_i v_i (coordinate mode).
// Bounded by dual_norm(f) * lp_norm(x, p) for the matching exponents.
double pairing(const DualVector& f, const Signal& x);

// Norm of the functional: p'-norm of its density over the same space.
double dual_norm(const DualVector& f);

}  // namespace latreg
