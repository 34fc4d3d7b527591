#pragma once

#include "latreg/blaar.hpp"
#include "latreg/measure.hpp"
#include "latreg/rng.hpp"

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <vector>

namespace latreg::sobolev {

// Periodic uniform grid on [0, side)^dim. Cell volume supplies the uniform
// measure weights, so grid signals live in the same L_p machinery as
// everything else.
class DomainGrid {
 public:
  DomainGrid(int dim, double side, int resolution, Eigen::Index point_cap = 1 << 18);

  int dim() const { return dim_; }
  double side() const { return side_; }
  int resolution() const { return res_; }
  Eigen::Index points() const { return points_; }
  double spacing() const { return side_ / res_; }
  double cell_volume() const { return cell_volume_; }
  const SpacePtr& space() const { return space_; }

  Eigen::Index flat(const std::vector<int>& coords) const;
  std::vector<int> coords(Eigen::Index flat) const;
  std::vector<double> position(Eigen::Index flat) const;

  // squared Euclidean norm of the physical frequency 2*pi*k/side with the
  // mode k wrapped to the symmetric range
  double frequency_sq(Eigen::Index flat) const;

  struct Snap {
    Eigen::Index node;
    double distance;
  };
  // nearest grid node under periodic wrap
  Snap snap(const std::vector<double>& point) const;

 private:
  int dim_;
  double side_;
  int res_;
  Eigen::Index points_;
  double cell_volume_;
  SpacePtr space_;
};

struct SobolevParams {
  double smoothness = 1.0;  // s > 0
  double p = 2.0;           // integrability, > 1
  int dim = 1;              // ambient dimension m

  // requires s*p > m so that point evaluations are bounded
  void validate() const;
};

enum class Filter { lift, lower };

// Spectral multiplier (1 + |frequency|^2)^{+-s/2} realized by the discrete
// Fourier transform on the periodic grid. One instance caches the multiplier
// array and the transform plans; apply() is pure.
class BesselFilter {
 public:
  BesselFilter(const DomainGrid& grid, double smoothness);
  ~BesselFilter();
  BesselFilter(const BesselFilter&) = delete;
  BesselFilter& operator=(const BesselFilter&) = delete;

  Signal apply(const Signal& f, Filter direction) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around BesselFilter.
Signal bessel_filter(const Signal& f, const DomainGrid& grid, double smoothness,
                     Filter direction);

// |lift(f)|_p over the grid measure: the smoothness-graded norm realized by
// the multiplier isomorphism.
double sobolev_norm(const Signal& f, const DomainGrid& grid, const SobolevParams& prm);

// Sampled evaluation functionals: at(node) is the kernel whose pairing with
// lift(f) returns f(node) exactly for every grid function f. All of them are
// circular shifts of one base kernel, so the base is computed once.
class PointEvaluations {
 public:
  PointEvaluations(const DomainGrid& grid, const SobolevParams& prm);

  Signal at(Eigen::Index node) const;
  // off-grid points snap to the nearest node; the snap distance is reported
  Signal at_point(const std::vector<double>& point, double* snap_distance = nullptr) const;
  const Signal& base() const { return base_; }
  // |at(node)|_{p'}; identical for every node by translation invariance
  double uniform_dual_norm() const { return dual_norm_; }

 private:
  const DomainGrid& grid_;
  Signal base_;
  double dual_norm_;
};

// Sum of a few random cosine modes, band-limited by construction and
// deterministic in the rng state.
Signal random_band_limited(const DomainGrid& grid, Rng& rng, int n_modes = 4,
                           int max_mode = 3);

// Measured norm-equivalence constant between the lifted p-norm and the
// first-order surrogate |f|_p + |gradient-order-s f|_p over a seeded
// band-limited family. The true embedding constant has no closed form, so
// this measured value stands in wherever the constant is reported.
double measured_sandwich_constant(const DomainGrid& grid, const SobolevParams& prm,
                                  std::uint64_t seed = 11, int family = 12);

struct SobolevTrace {
  blaar::GameTrace trace;
  double game_exponent = 2.0;           // the dual exponent p' the lattice game ran in
  std::vector<double> snap_distances;   // per query point; empty for node queries
};

// Maps each queried node to its evaluation signal in L_{p'} and runs the
// semi-online lattice game on those signals.
SobolevTrace run_game(const DomainGrid& grid, const std::vector<Eigen::Index>& nodes,
                      const std::vector<double>& outcomes, const SobolevParams& prm,
                      double outcome_bound, std::optional<double> ridge = {},
                      const lewis::Options& opt = {});

// Same game for real-coordinate query points: each point snaps to its
// nearest grid node and the snap distances are kept in the trace.
SobolevTrace run_game(const DomainGrid& grid,
                      const std::vector<std::vector<double>>& points,
                      const std::vector<double>& outcomes, const SobolevParams& prm,
                      double outcome_bound, std::optional<double> ridge = {},
                      const lewis::Options& opt = {});

}  // namespace latreg::sobolev
