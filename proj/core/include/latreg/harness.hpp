#pragma once

#include "latreg/blaar.hpp"
#include "latreg/measure.hpp"
#include "latreg/perceptron.hpp"
#include "latreg/rng.hpp"
#include "latreg/sobolev.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace latreg::harness {

enum class Mode { aar, kaar, blaar, sobolev, perceptron };

struct CoordinateSpace {
  Eigen::Index dim = 2;
};
struct WeightedSpace {
  Eigen::VectorXd weights;
};
struct GridSpace {
  int dim = 1;
  double side = 6.283185307179586476925286766559;
  int resolution = 32;
};
using SpaceSpec = std::variant<CoordinateSpace, WeightedSpace, GridSpace>;

struct DataSpec {
  std::uint64_t seed = 1;
  std::string source = "random";  // "random" | "comparator"
  double signal_bound = 1.0;      // signals are norm-clipped to this X
  double noise = 0.0;             // outcome noise amplitude, relative to Y
  int span_rank = 0;              // >0: draw signals from a span of that rank
};

struct ComparatorSpec {
  int count = 20;
  std::uint64_t seed = 7;
  double scale = 1.0;
  bool include_zero = true;
  bool include_ridge = false;  // offline ridge solution (aar mode only)
  std::vector<Eigen::VectorXd> explicit_values;
};

struct PerceptronSpec {
  double margin = 1.0;
  double ridge = 1.0;
};

// One experiment, fully determined by (config, seed). Serializes to JSON
// with an explicit schema version; see README for the schema.
struct ExperimentConfig {
  int schema_version = 1;
  Mode mode = Mode::blaar;
  GameConfig game;
  SpaceSpec space = CoordinateSpace{};
  DataSpec data;
  ComparatorSpec comparators;
  std::optional<sobolev::SobolevParams> sobolev_params;
  std::optional<PerceptronSpec> perceptron;

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;

  void validate() const;
};

struct GeneratedGame {
  blaar::SemiOnlineGame game;
  std::optional<DualVector> generator;  // the functional that produced outcomes
  std::vector<Eigen::Index> nodes;      // grid nodes (sobolev/perceptron modes)
  std::vector<int> labels;              // perceptron mode
  double measured_signal_bound = 0.0;   // max clip-norm over the signals
};

// Deterministic in (cfg, seed): same inputs, identical games.
GeneratedGame generate_game(const ExperimentConfig& cfg, std::uint64_t seed);

enum class BoundKind { aar_log, aar_tuned, kaar_logdet, lp };

struct BoundRow {
  std::string comparator_id;
  double loss_alg = 0.0;
  double loss_comp = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound + loss_comp - loss_alg
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  Eigen::Index rank = 0;
  double ridge = 0.0;
  double solver_residual = 0.0;
  double wall_ms = 0.0;
  bool range_violated = false;

  bool all_pass() const;
};

std::vector<std::pair<std::string, DualVector>> make_comparators(
    const ExperimentConfig& cfg, const GeneratedGame& generated, double used_ridge);

// One row per comparator; inputs are never mutated. The pass flag allows a
// slack of 1e-9 relative to the loss scale.
BoundReport verify_bounds(const blaar::GameTrace& trace,
                          const blaar::SemiOnlineGame& game,
                          const std::vector<std::pair<std::string, DualVector>>& comparators,
                          BoundKind kind);

struct FilmRow {
  long long frames;
  double dimension_bound;  // sqrt(T) * n^{1/2-1/p} regime
  double span_bound;       // T^{1-1/p} regime
};

// Tabulates the two regret regimes for linear scoring of fixed-resolution
// frames and reports where they cross. The span-rank regime wins strictly
// below the crossover frame count, which equals the pixel count; the
// conversion to seconds is exact integer arithmetic at the given frame rate.
struct FilmScenario {
  std::vector<FilmRow> rows;
  long long crossover_frames = 0;
  long long crossover_seconds = 0;
  int fps = 24;
  bool equal_orders = false;  // p == 2: both regimes have identical values
};

FilmScenario film_scenario(long long pixels, long long max_frames, double p,
                           double outcome_bound, double signal_bound, int fps = 24);

// Best achievable comparator loss in hindsight: the least-squares projection
// of the outcomes onto the span of the signals' coefficient matrix.
double best_comparator_loss(const blaar::SemiOnlineGame& game);

// Brute-force determinant search for the constrained maximization solved by
// lewis::solve: random sampling plus local polish, independent of the
// fixed-point path. Returns the best |det C| over feasible C found.
double det_search_best(const std::vector<Signal>& selected, double p,
                       std::uint64_t seed, int samples = 20000, int polish_steps = 4000);

// run / verify / film / sweep / selftest; see README.
int cli_main(int argc, const char* const* argv);

}  // namespace latreg::harness
