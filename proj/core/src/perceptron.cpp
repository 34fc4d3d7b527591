#include "latreg/perceptron.hpp"

#include "latreg/lewis.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace latreg::sop {

State::State(Eigen::Index dim, double ridge) : ridge_(ridge) {
  if (dim < 1) throw std::invalid_argument("perceptron: dimension must be >= 1");
  if (!(ridge > 0.0)) throw std::invalid_argument("perceptron: ridge must be positive");
  accumulator_ = ridge * Eigen::MatrixXd::Identity(dim, dim);
  vote_ = Eigen::VectorXd::Zero(dim);
}

int State::predict(const Eigen::VectorXd& r_new) const {
  if (r_new.size() != dim()) throw std::invalid_argument("perceptron: dimension mismatch");
  const double margin =
      vote_.dot(Eigen::LLT<Eigen::MatrixXd>(accumulator_).solve(r_new));
  return margin < 0.0 ? -1 : 1;  // sign(0) = +1
}

State State::updated(const Eigen::VectorXd& r, int label, int predicted) const {
  if (label != 1 && label != -1)
    throw std::invalid_argument("perceptron: labels must be +1 or -1");
  if (r.size() != dim()) throw std::invalid_argument("perceptron: dimension mismatch");
  State next = *this;
  const int trial = next.trials_seen_++;
  if (predicted != label) {
    next.accumulator_.selfadjointView<Eigen::Lower>().rankUpdate(r);
    next.accumulator_ = next.accumulator_.selfadjointView<Eigen::Lower>();
    next.vote_ += static_cast<double>(label) * r;
    next.mistake_trials_.push_back(trial);
  }
  return next;
}

double hinge_loss(double f_value, int label, double margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("hinge_loss: margin must be positive");
  if (label != 1 && label != -1)
    throw std::invalid_argument("hinge_loss: labels must be +1 or -1");
  return std::max(0.0, margin - label * f_value);
}

double mistake_bound(double margin, double comparator_norm_sq, double horizon_factor,
                     double ridge, const std::vector<double>& comparator_on_mistakes,
                     double evaluation_bound, double hinge_total) {
  if (!(margin > 0.0)) throw std::invalid_argument("mistake_bound: margin must be positive");
  if (!(ridge > 0.0)) throw std::invalid_argument("mistake_bound: ridge must be positive");
  if (comparator_norm_sq < 0.0 || hinge_total < 0.0 || horizon_factor < 0.0)
    throw std::invalid_argument("mistake_bound: invalid arguments");
  double sum_sq = 0.0;
  for (double v : comparator_on_mistakes) sum_sq += v * v;
  const double r_sq = evaluation_bound * evaluation_bound *
                      (horizon_factor * comparator_norm_sq + sum_sq / ridge);
  const double g2 = margin * margin;
  const double d_over = hinge_total / margin;
  return r_sq / (2.0 * g2) + d_over +
         std::sqrt(r_sq) / margin * std::sqrt(d_over + r_sq / (4.0 * g2));
}

ClassifyResult classify_run(const sobolev::DomainGrid& grid,
                            const std::vector<Eigen::Index>& nodes,
                            const std::vector<int>& labels,
                            const sobolev::SobolevParams& prm, double margin,
                            double ridge, const lewis::Options& opt) {
  if (nodes.size() != labels.size())
    throw std::invalid_argument("classify: node/label counts differ");
  if (nodes.empty()) throw std::invalid_argument("classify: empty dataset");
  if (!(margin > 0.0)) throw std::invalid_argument("classify: margin must be positive");
  prm.validate();

  sobolev::PointEvaluations evals(grid, prm);
  std::vector<Signal> signals;
  signals.reserve(nodes.size());
  for (Eigen::Index node : nodes) signals.push_back(evals.at(node));

  const double game_p = dual_exponent(prm.p);
  const lewis::Basis basis = lewis::build(signals, game_p, opt);

  ClassifyResult out;
  out.coords = lewis::coordinates(basis);
  out.rank = basis.rank();
  out.basis_residual = basis.residual;
  out.evaluation_bound = evals.uniform_dual_norm();

  State state(basis.rank(), ridge);
  out.predictions.reserve(labels.size());
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const Eigen::VectorXd r = out.coords.row(static_cast<Eigen::Index>(t));
    const int predicted = state.predict(r);
    out.predictions.push_back(predicted);
    if (predicted != labels[t]) ++out.mistakes;
    state = state.updated(r, labels[t], predicted);
  }
  out.mistake_trials = state.mistake_trials();
  return out;
}

}  // namespace latreg::sop
