#include "latreg/kaar.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace latreg::kaar {

GramMatrix GramMatrix::from(Eigen::MatrixXd k, double tol) {
  if (k.rows() != k.cols() || k.rows() < 1)
    throw std::invalid_argument("gram matrix must be square and non-empty");
  if (!k.allFinite()) throw std::invalid_argument("gram matrix must be finite");
  Eigen::MatrixXd sym = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  if (ev(0) < -tol * scale)
    throw std::invalid_argument("gram matrix is not positive semi-definite");
  if (ev(0) < 0.0) {
    Eigen::VectorXd clipped = ev.cwiseMax(0.0);
    sym = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    sym = 0.5 * (sym + sym.transpose());
  }
  return GramMatrix(std::move(sym));
}

GramMatrix GramMatrix::from_factor(const Eigen::MatrixXd& factor) {
  if (!factor.allFinite()) throw std::invalid_argument("gram factor must be finite");
  Eigen::MatrixXd k = factor * factor.transpose();
  return GramMatrix(0.5 * (k + k.transpose()));
}

GramMatrix GramMatrix::top_left(Eigen::Index t) const {
  if (t < 1 || t > size()) throw std::invalid_argument("gram block size out of range");
  return GramMatrix(k_.topLeftCorner(t, t));
}

double predict(const GramMatrix& gram, const Eigen::VectorXd& labels, double ridge) {
  const Eigen::Index t = gram.size();
  if (!(ridge > 0.0)) throw std::invalid_argument("kaar: ridge parameter must be positive");
  if (labels.size() != t) throw std::invalid_argument("kaar: labels length mismatch");
  if (labels(t - 1) != 0.0)
    throw std::invalid_argument("kaar: the current step's label slot must be zero");
  Eigen::MatrixXd m = gram.matrix();
  m.diagonal().array() += ridge;
  const Eigen::VectorXd z = Eigen::LLT<Eigen::MatrixXd>(m).solve(gram.matrix().col(t - 1));
  return labels.dot(z);
}

std::vector<double> semi_online_predictions(const GramMatrix& gram,
                                            const std::vector<double>& outcomes,
                                            double ridge) {
  const Eigen::Index horizon = gram.size();
  if (!(ridge > 0.0)) throw std::invalid_argument("kaar: ridge parameter must be positive");
  if (static_cast<Eigen::Index>(outcomes.size()) != horizon)
    throw std::invalid_argument("kaar: outcomes length mismatch");

  Eigen::MatrixXd m = gram.matrix();
  m.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("kaar: Cholesky factorization failed");
  const Eigen::MatrixXd chol = llt.matrixL();

  std::vector<double> predictions(horizon);
  Eigen::VectorXd z;
  for (Eigen::Index t = 1; t <= horizon; ++t) {
    z = gram.matrix().col(t - 1).head(t);
    const auto lt = chol.topLeftCorner(t, t);
    lt.triangularView<Eigen::Lower>().solveInPlace(z);
    lt.transpose().triangularView<Eigen::Upper>().solveInPlace(z);
    double gamma = 0.0;
    for (Eigen::Index i = 0; i + 1 < t; ++i) gamma += outcomes[i] * z(i);
    predictions[t - 1] = gamma;
  }
  return predictions;
}

double logdet_regret(const GramMatrix& gram, double ridge, double outcome_bound,
                     double comparator_norm_sq) {
  if (!(ridge > 0.0)) throw std::invalid_argument("logdet_regret: ridge must be positive");
  Eigen::MatrixXd m = gram.matrix() / ridge;
  m.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("logdet_regret: matrix is not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < chol.rows(); ++i) logdet += std::log(chol(i, i));
  logdet *= 2.0;
  return ridge * comparator_norm_sq + outcome_bound * outcome_bound * logdet;
}

double linearized_regret(int horizon, double max_diag, double ridge,
                         double outcome_bound, double comparator_norm_sq) {
  if (!(ridge > 0.0) || horizon < 0 || max_diag < 0.0 || comparator_norm_sq < 0.0)
    throw std::invalid_argument("linearized_regret: invalid arguments");
  return ridge * comparator_norm_sq +
         outcome_bound * outcome_bound * horizon * max_diag / ridge;
}

}  // namespace latreg::kaar
