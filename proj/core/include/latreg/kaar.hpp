#pragma once

#include <Eigen/Core>

#include <vector>

namespace latreg::kaar {

// Symmetric positive semi-definite matrix of pairwise scalar products.
// from() symmetrizes and repairs eigenvalues in [-tol*scale, 0); anything
// more negative is an error. from_factor() takes K = F F', which is PSD by
// construction and skips the spectral check.
class GramMatrix {
 public:
  static GramMatrix from(Eigen::MatrixXd k, double tol = 1e-8);
  static GramMatrix from_factor(const Eigen::MatrixXd& factor);

  const Eigen::MatrixXd& matrix() const { return k_; }
  Eigen::Index size() const { return k_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return k_(i, j); }

  GramMatrix top_left(Eigen::Index t) const;

 private:
  explicit GramMatrix(Eigen::MatrixXd k) : k_(std::move(k)) {}
  Eigen::MatrixXd k_;
};

// gamma_T = (y_1, ..., y_{T-1}, 0) (a I + K)^{-1} k_last. The labels vector
// must have length T with a zero last entry.
double predict(const GramMatrix& gram, const Eigen::VectorXd& labels, double ridge);

// All T predictions of the semi-online game from one nested Cholesky
// factorization of a*I + K: the leading t x t block of the factor is the
// factor of the leading block, so each step reuses the same decomposition.
std::vector<double> semi_online_predictions(const GramMatrix& gram,
                                            const std::vector<double>& outcomes,
                                            double ridge);

// a |h|^2 + Y^2 ln det(I + K/a), with a numerically stable log-determinant.
double logdet_regret(const GramMatrix& gram, double ridge, double outcome_bound,
                     double comparator_norm_sq);

// a |h|^2 + Y^2 T max_diag / a: the relaxation of logdet_regret obtained
// from Hadamard's inequality and ln(1+x) <= x. Never smaller than
// logdet_regret on the same data.
double linearized_regret(int horizon, double max_diag, double ridge,
                         double outcome_bound, double comparator_norm_sq);

}  // namespace latreg::kaar
