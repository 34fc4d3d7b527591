#include "latreg/measure.hpp"

#include "latreg/errors.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace latreg {

void warn(std::string_view message) {
  std::cerr << "[latreg] warning: " << message << "\n";
}

MeasureSpace::MeasureSpace(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (weights_.size() < 1) throw std::invalid_argument("measure space needs at least one point");
  if (!weights_.allFinite() || (weights_.array() <= 0.0).any())
    throw std::invalid_argument("measure weights must be finite and strictly positive");
}

SpacePtr MeasureSpace::make(Eigen::VectorXd weights) {
  return std::make_shared<const MeasureSpace>(std::move(weights));
}

SpacePtr MeasureSpace::uniform(Eigen::Index points, double weight) {
  return make(Eigen::VectorXd::Constant(points, weight));
}

bool MeasureSpace::same_as(const MeasureSpace& other) const {
  if (this == &other) return true;
  return weights_.size() == other.weights_.size() && weights_ == other.weights_;
}

Signal::Signal(SpacePtr space, Eigen::VectorXd values)
    : values_(std::move(values)), space_(std::move(space)) {
  if (!values_.allFinite()) throw std::invalid_argument("signal values must be finite");
  if (space_ && space_->size() != values_.size())
    throw std::invalid_argument("signal length does not match its measure space");
}

Signal Signal::coordinates(Eigen::VectorXd values) {
  return Signal(nullptr, std::move(values));
}

Signal Signal::on(SpacePtr space, Eigen::VectorXd values) {
  if (!space) throw std::invalid_argument("null measure space");
  return Signal(std::move(space), std::move(values));
}

void GameConfig::validate() const {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lattice exponent must be finite and > 1");
  if (!(outcome_bound > 0.0) || !std::isfinite(outcome_bound))
    throw std::invalid_argument("outcome bound must be positive");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (ridge && !(*ridge > 0.0)) throw std::invalid_argument("ridge parameter must be positive");
}

namespace {

double weighted_lp(const Eigen::VectorXd& v, const Eigen::VectorXd* mu, double p) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double term = std::pow(std::abs(v[k]), p);
    sum += mu ? (*mu)[k] * term : term;
  }
  return std::pow(sum, 1.0 / p);
}

void check_compatible(const DualVector& f, const Signal& x) {
  if (f.size() != x.size()) throw std::invalid_argument("pairing: length mismatch");
  const bool f_measure = f.space != nullptr;
  const bool x_measure = x.space() != nullptr;
  if (f_measure != x_measure)
    throw std::invalid_argument("pairing: one side is coordinate mode, the other is not");
  if (f_measure && !f.space->same_as(*x.space()))
    throw std::invalid_argument("pairing: signals live on different measure spaces");
}

}  // namespace

double lp_norm(const Signal& x, double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp_norm: exponent must be finite and >= 1");
  const Eigen::VectorXd* mu = x.space() ? &x.space()->weights() : nullptr;
  return weighted_lp(x.values(), mu, p);
}

double dual_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("dual_exponent: requires finite p > 1");
  return p / (p - 1.0);
}

double norm_equiv_factor(Eigen::Index n, double q) {
  if (n < 1) throw std::invalid_argument("norm_equiv_factor: dimension must be >= 1");
  if (!(q >= 1.0) || !std::isfinite(q))
    throw std::invalid_argument("norm_equiv_factor: exponent must be finite and >= 1");
  if (q <= 2.0) return 1.0;
  return std::pow(static_cast<double>(n), 0.5 - 1.0 / q);
}

double pairing(const DualVector& f, const Signal& x) {
  check_compatible(f, x);
  if (x.space()) {
    return (x.space()->weights().array() * f.values.array() * x.values().array()).sum();
  }
  return f.values.dot(x.values());
}

double dual_norm(const DualVector& f) {
  if (!(f.exponent > 1.0) || !std::isfinite(f.exponent))
    throw std::invalid_argument("dual_norm: exponent must be finite and > 1");
  const Eigen::VectorXd* mu = f.space ? &f.space->weights() : nullptr;
  return weighted_lp(f.values, mu, f.exponent);
}

}  // namespace latreg
