#pragma once

#include "latreg/kaar.hpp"
#include "latreg/measure.hpp"

#include <Eigen/Core>

#include <vector>

namespace latreg::lewis {

// Maximal linearly independent subset found by a greedy scan in
// first-occurrence order.
struct IndependentSubset {
  std::vector<Eigen::Index> indices;  // selected signals r_1..r_n
  Eigen::MatrixXd alphas;             // T x n, x_s = sum_i alphas(s,i) x_{r_i}
};

// tol is the relative rank threshold; the expansion residual of every signal
// over the selected set is below tol * |x_s|. Throws if every signal is zero.
IndependentSubset max_independent_subset(const std::vector<Signal>& signals,
                                         double tol = 1e-10);

struct Options {
  double tol = 1e-8;      // biorthogonality residual target (Frobenius)
  int max_iter = 500;     // fixed-point iteration cap
  double rank_tol = 1e-10;
};

// Solved determinant-maximization basis for an independent signal set under
// the cross-sectional L_p constraint |sqrt(sum_i gamma_i^2)|_p <= 1, where
// gamma_i = sum_j C(i,j) x_{r_j}. At the optimum C satisfies the
// biorthogonality identity
//     n * integral( gamma_i gamma_j envelope^{p-2} dmu ) = delta_ij
// and the constraint is active. The same exponent p-2 weights the scalar
// products below; it is the only choice under which the two kernel routes
// (the algebraic form and the direct weighted integral) coincide at the
// fixed point, which the test suite verifies.
struct Basis {
  std::vector<Eigen::Index> indices;  // selected signal positions
  Eigen::MatrixXd C;                  // n x n, gamma = C * X_selected
  Eigen::MatrixXd D;                  // C^{-1}
  Eigen::MatrixXd gamma;              // n x M samples of the basis functions
  Eigen::VectorXd envelope;           // M, sqrt of columnwise sum of gamma^2
  Eigen::VectorXd weight;             // M, envelope^{p-2} with the p<2 clamp
  Eigen::MatrixXd alphas;             // T x n expansion coefficients
  Eigen::VectorXd signal_pnorms;      // T, |x_s|_p
  Eigen::VectorXd mu;                 // M measure weights (ones in coordinate mode)
  SpacePtr space;                     // nullptr for coordinate mode
  double p = 2.0;
  double residual = 0.0;              // final biorthogonality residual
  int iterations = 0;
  // Uniform scale on the coordinate map keeping it non-expansive on the
  // sample signals; 1 unless the raw map expands (possible for p < 2).
  double map_scale = 1.0;

  Eigen::Index rank() const { return C.rows(); }
};

// Step-2 solver over an already-independent set. Fixed-point iteration:
// from the current basis compute the envelope weight, whiten the weighted
// Gram, rescale to activate the constraint, repeat. Damping (geometric
// weight mixing) engages when the residual stops decreasing. Initialization
// is the p = 2 solution, which the loop leaves untouched when p == 2.
Basis solve(const std::vector<Signal>& selected, double p, const Options& opt = {});

// Step 1 + Step 2 over the full signal list.
Basis build(const std::vector<Signal>& signals, double p, const Options& opt = {});

// Coordinates r_s of each signal under the basis map, rows of a T x n
// matrix with kernel(b) = R R'.
Eigen::MatrixXd coordinates(const Basis& b);

// Coordinates of an arbitrary span element sum_i coeffs_i x_{r_i}.
Eigen::VectorXd span_coordinates(const Basis& b, const Eigen::VectorXd& coeffs);

// T x T matrix of induced scalar products (1/n) A D D' A', carrying the
// same non-expansion scale as coordinates().
kaar::GramMatrix kernel(const Basis& b);

// Cross-check route: k_sl = integral( x_s x_l weight dmu ), evaluated from
// the reconstructed signals. Coincides with kernel() at the fixed point.
kaar::GramMatrix weighted_integral_kernel(const Basis& b);

}  // namespace latreg::lewis
