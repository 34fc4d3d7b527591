#include "latreg/harness.hpp"

#include "latreg/aar.hpp"
#include "latreg/errors.hpp"
#include "latreg/kaar.hpp"
#include "latreg/lewis.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>

namespace latreg::harness {

using njson = nlohmann::ordered_json;

namespace {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::aar: return "aar";
    case Mode::kaar: return "kaar";
    case Mode::blaar: return "blaar";
    case Mode::sobolev: return "sobolev";
    case Mode::perceptron: return "perceptron";
  }
  return "blaar";
}

Mode mode_from(const std::string& s) {
  if (s == "aar") return Mode::aar;
  if (s == "kaar") return Mode::kaar;
  if (s == "blaar") return Mode::blaar;
  if (s == "sobolev") return Mode::sobolev;
  if (s == "perceptron") return Mode::perceptron;
  throw std::invalid_argument("config: unknown mode '" + s + "'");
}

}  // namespace

// ---------------------------------------------------------------- config io

void ExperimentConfig::validate() const {
  game.validate();
  if (data.source != "random" && data.source != "comparator")
    throw std::invalid_argument("config: data.source must be 'random' or 'comparator'");
  if (!(data.signal_bound > 0.0))
    throw std::invalid_argument("config: signal bound must be positive");
  if (data.noise < 0.0) throw std::invalid_argument("config: noise must be >= 0");
  if (data.span_rank < 0) throw std::invalid_argument("config: span rank must be >= 0");
  if ((mode == Mode::aar || mode == Mode::kaar) &&
      !std::holds_alternative<CoordinateSpace>(space))
    throw std::invalid_argument(
        "config: aar/kaar games use plain scalar products and need a coordinate space");
  const bool grid_mode = mode == Mode::sobolev || mode == Mode::perceptron;
  if (grid_mode) {
    if (!std::holds_alternative<GridSpace>(space))
      throw std::invalid_argument("config: sobolev/perceptron modes need a grid space");
    if (!sobolev_params)
      throw std::invalid_argument("config: sobolev/perceptron modes need sobolev params");
    sobolev_params->validate();
    if (sobolev_params->dim != std::get<GridSpace>(space).dim)
      throw std::invalid_argument("config: sobolev dimension does not match the grid");
  }
  if (mode == Mode::perceptron && !perceptron)
    throw std::invalid_argument("config: perceptron mode needs a perceptron section");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1)
      throw std::invalid_argument("config: unsupported schema version");
    cfg.mode = mode_from(j.at("mode").get<std::string>());

    const auto& g = j.at("game");
    cfg.game.p = g.at("p").get<double>();
    cfg.game.outcome_bound = g.at("outcome_bound").get<double>();
    cfg.game.horizon = g.at("horizon").get<int>();
    if (g.contains("ridge") && !g.at("ridge").is_null())
      cfg.game.ridge = g.at("ridge").get<double>();

    const auto& sp = j.at("space");
    const std::string type = sp.at("type").get<std::string>();
    if (type == "coordinates") {
      cfg.space = CoordinateSpace{sp.at("dim").get<Eigen::Index>()};
    } else if (type == "measure") {
      const auto w = sp.at("weights").get<std::vector<double>>();
      cfg.space = WeightedSpace{Eigen::Map<const Eigen::VectorXd>(w.data(), w.size())};
    } else if (type == "grid") {
      cfg.space = GridSpace{sp.at("dim").get<int>(), sp.at("side").get<double>(),
                            sp.at("resolution").get<int>()};
    } else {
      throw std::invalid_argument("config: unknown space type '" + type + "'");
    }

    const auto& d = j.at("data");
    cfg.data.seed = d.at("seed").get<std::uint64_t>();
    cfg.data.source = d.value("source", std::string("random"));
    cfg.data.signal_bound = d.value("signal_bound", 1.0);
    cfg.data.noise = d.value("noise", 0.0);
    cfg.data.span_rank = d.value("span_rank", 0);

    if (j.contains("comparators")) {
      const auto& c = j.at("comparators");
      cfg.comparators.count = c.value("count", 20);
      cfg.comparators.seed = c.value("seed", std::uint64_t{7});
      cfg.comparators.scale = c.value("scale", 1.0);
      cfg.comparators.include_zero = c.value("include_zero", true);
      cfg.comparators.include_ridge = c.value("include_ridge", false);
      if (c.contains("explicit")) {
        for (const auto& row : c.at("explicit")) {
          const auto v = row.get<std::vector<double>>();
          cfg.comparators.explicit_values.emplace_back(
              Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
        }
      }
    }

    if (j.contains("sobolev")) {
      sobolev::SobolevParams prm;
      prm.smoothness = j.at("sobolev").at("smoothness").get<double>();
      prm.p = j.at("sobolev").at("p").get<double>();
      prm.dim = std::holds_alternative<GridSpace>(cfg.space)
                    ? std::get<GridSpace>(cfg.space).dim
                    : j.at("sobolev").value("dim", 1);
      cfg.sobolev_params = prm;
    }
    if (j.contains("perceptron")) {
      PerceptronSpec ps;
      ps.margin = j.at("perceptron").value("margin", 1.0);
      ps.ridge = j.at("perceptron").value("ridge", 1.0);
      cfg.perceptron = ps;
    }

    cfg.validate();
    return cfg;
  } catch (const njson::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

std::string ExperimentConfig::to_json_text() const {
  njson j;
  j["schema_version"] = schema_version;
  j["mode"] = mode_name(mode);
  j["game"] = {{"p", game.p},
               {"outcome_bound", game.outcome_bound},
               {"horizon", game.horizon},
               {"ridge", game.ridge ? njson(*game.ridge) : njson(nullptr)}};
  if (std::holds_alternative<CoordinateSpace>(space)) {
    j["space"] = {{"type", "coordinates"}, {"dim", std::get<CoordinateSpace>(space).dim}};
  } else if (std::holds_alternative<WeightedSpace>(space)) {
    const Eigen::VectorXd& w = std::get<WeightedSpace>(space).weights;
    j["space"] = {{"type", "measure"},
                  {"weights", std::vector<double>(w.data(), w.data() + w.size())}};
  } else {
    const GridSpace& gs = std::get<GridSpace>(space);
    j["space"] = {{"type", "grid"},
                  {"dim", gs.dim},
                  {"side", gs.side},
                  {"resolution", gs.resolution}};
  }
  j["data"] = {{"seed", data.seed},
               {"source", data.source},
               {"signal_bound", data.signal_bound},
               {"noise", data.noise},
               {"span_rank", data.span_rank}};
  njson comp = {{"count", comparators.count},
                {"seed", comparators.seed},
                {"scale", comparators.scale},
                {"include_zero", comparators.include_zero},
                {"include_ridge", comparators.include_ridge}};
  if (!comparators.explicit_values.empty()) {
    njson rows = njson::array();
    for (const auto& v : comparators.explicit_values)
      rows.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    comp["explicit"] = rows;
  }
  j["comparators"] = comp;
  if (sobolev_params) {
    j["sobolev"] = {{"smoothness", sobolev_params->smoothness},
                    {"p", sobolev_params->p},
                    {"dim", sobolev_params->dim}};
  }
  if (perceptron) {
    j["perceptron"] = {{"margin", perceptron->margin}, {"ridge", perceptron->ridge}};
  }
  return j.dump(2) + "\n";
}

// ------------------------------------------------------------ data synthesis

namespace {

double clip_exponent(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case Mode::aar: return dual_exponent(cfg.game.p);
    case Mode::kaar: return 2.0;
    default: return cfg.game.p;
  }
}

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

Signal make_signal(const SpacePtr& sp, Eigen::VectorXd values) {
  return sp ? Signal::on(sp, std::move(values)) : Signal::coordinates(std::move(values));
}

Signal clip_signal(const Signal& s, double p, double bound) {
  const double nrm = lp_norm(s, p);
  if (nrm <= bound) return s;
  return make_signal(s.space(), Eigen::VectorXd(s.values() * (bound / nrm)));
}

Eigen::VectorXd band_limited_values(const sobolev::DomainGrid& grid, Rng& rng,
                                    int n_modes, int max_mode) {
  return sobolev::random_band_limited(grid, rng, n_modes, max_mode).values();
}

void fill_outcomes(GeneratedGame& out, const ExperimentConfig& cfg, Rng& rng,
                   double comparator_exponent) {
  const double bound = cfg.game.outcome_bound;
  const int horizon = cfg.game.horizon;
  if (cfg.data.source == "random") {
    out.game.outcomes.resize(horizon);
    for (int t = 0; t < horizon; ++t) out.game.outcomes[t] = rng.uniform(-bound, bound);
    return;
  }
  // comparator-generated outcomes
  const SpacePtr sp = out.game.signals.front().space();
  DualVector w{random_vector(rng, out.game.signals.front().size()), comparator_exponent, sp};
  Eigen::VectorXd preds(horizon);
  for (int t = 0; t < horizon; ++t) preds[t] = pairing(w, out.game.signals[t]);
  const double peak = preds.cwiseAbs().maxCoeff();
  if (peak > 0.0) {
    const double scale = 0.9 * bound / peak;
    w.values *= scale;
    preds *= scale;
  }
  out.game.outcomes.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    const double y = preds[t] + cfg.data.noise * bound * rng.uniform(-1.0, 1.0);
    out.game.outcomes[t] = std::clamp(y, -bound, bound);
  }
  out.generator = std::move(w);
}

GeneratedGame generate_vector_game(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng root(seed);
  Rng sig_rng = root.fork(1);
  Rng out_rng = root.fork(2);

  SpacePtr sp;
  Eigen::Index dim;
  if (std::holds_alternative<CoordinateSpace>(cfg.space)) {
    dim = std::get<CoordinateSpace>(cfg.space).dim;
  } else {
    sp = MeasureSpace::make(std::get<WeightedSpace>(cfg.space).weights);
    dim = sp->size();
  }

  GeneratedGame out;
  out.game.config = cfg.game;

  const double clip_p = clip_exponent(cfg);
  const int horizon = cfg.game.horizon;
  const int rank = cfg.data.span_rank;

  std::vector<Eigen::VectorXd> span_basis;
  if (rank > 0 && rank < dim) {
    span_basis.reserve(rank);
    for (int i = 0; i < rank; ++i) span_basis.push_back(random_vector(sig_rng, dim));
  }

  out.game.signals.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    Eigen::VectorXd v;
    if (!span_basis.empty()) {
      v = Eigen::VectorXd::Zero(dim);
      for (const auto& b : span_basis) v += sig_rng.normal() * b;
    } else {
      v = random_vector(sig_rng, dim);
    }
    Signal s = clip_signal(make_signal(sp, std::move(v)), clip_p, cfg.data.signal_bound);
    out.measured_signal_bound = std::max(out.measured_signal_bound, lp_norm(s, clip_p));
    out.game.signals.push_back(std::move(s));
  }

  const double comp_exp =
      cfg.mode == Mode::aar ? cfg.game.p
                            : (cfg.mode == Mode::kaar ? 2.0 : dual_exponent(cfg.game.p));
  fill_outcomes(out, cfg, out_rng, comp_exp);
  return out;
}

GeneratedGame generate_grid_game(const ExperimentConfig& cfg, std::uint64_t seed) {
  Rng root(seed);
  Rng node_rng = root.fork(1);
  Rng out_rng = root.fork(2);
  Rng fn_rng = root.fork(3);

  const GridSpace& gs = std::get<GridSpace>(cfg.space);
  sobolev::DomainGrid grid(gs.dim, gs.side, gs.resolution);
  const sobolev::SobolevParams& prm = *cfg.sobolev_params;
  sobolev::PointEvaluations evals(grid, prm);

  GeneratedGame out;
  out.game.config = cfg.game;
  out.game.config.p = dual_exponent(prm.p);  // the lattice game runs in the dual space

  const int horizon = cfg.game.horizon;
  const double bound = cfg.game.outcome_bound;

  if (cfg.mode == Mode::perceptron) {
    Eigen::VectorXd f = band_limited_values(grid, fn_rng, 4, 3);
    if (f.cwiseAbs().maxCoeff() == 0.0) f = band_limited_values(grid, fn_rng, 4, 3);
    double threshold = 0.3 * f.cwiseAbs().maxCoeff();
    out.nodes.reserve(horizon);
    int attempts = 0;
    while (static_cast<int>(out.nodes.size()) < horizon) {
      const Eigen::Index node = node_rng.uniform_int(0, static_cast<int>(grid.points()) - 1);
      if (std::abs(f[node]) >= threshold) {
        out.nodes.push_back(node);
        out.labels.push_back(f[node] > 0.0 ? 1 : -1);
      }
      if (++attempts > 200 * horizon) {
        threshold *= 0.5;  // pathological draw; relax the separation band
        attempts = 0;
      }
    }
    // comparator achieving the configured margin on every kept node
    const double margin = cfg.perceptron ? cfg.perceptron->margin : 1.0;
    out.generator = DualVector{f * (margin / threshold), prm.p, grid.space()};
    return out;
  }

  out.nodes.reserve(horizon);
  out.game.signals.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    const Eigen::Index node = node_rng.uniform_int(0, static_cast<int>(grid.points()) - 1);
    out.nodes.push_back(node);
    Signal beta = evals.at(node);
    out.measured_signal_bound =
        std::max(out.measured_signal_bound, lp_norm(beta, out.game.config.p));
    out.game.signals.push_back(std::move(beta));
  }

  if (cfg.data.source == "random") {
    out.game.outcomes.resize(horizon);
    for (int t = 0; t < horizon; ++t) out.game.outcomes[t] = out_rng.uniform(-bound, bound);
    return out;
  }

  // outcomes from a band-limited function; its lift is an exact comparator
  // for the dual-space game through the reproducing pairing
  Eigen::VectorXd f = band_limited_values(grid, fn_rng, 4, 3);
  Eigen::VectorXd preds(horizon);
  for (int t = 0; t < horizon; ++t) preds[t] = f[out.nodes[t]];
  const double peak = preds.cwiseAbs().maxCoeff();
  if (peak > 0.0) {
    const double scale = 0.9 * bound / peak;
    f *= scale;
    preds *= scale;
  }
  out.game.outcomes.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    const double y = preds[t] + cfg.data.noise * bound * out_rng.uniform(-1.0, 1.0);
    out.game.outcomes[t] = std::clamp(y, -bound, bound);
  }
  const Signal lifted =
      sobolev::bessel_filter(Signal::on(grid.space(), f), grid, prm.smoothness,
                             sobolev::Filter::lift);
  out.generator = DualVector{lifted.values(), prm.p, grid.space()};
  return out;
}

}  // namespace

GeneratedGame generate_game(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (std::holds_alternative<GridSpace>(cfg.space)) return generate_grid_game(cfg, seed);
  return generate_vector_game(cfg, seed);
}

// ------------------------------------------------------------- verification

std::vector<std::pair<std::string, DualVector>> make_comparators(
    const ExperimentConfig& cfg, const GeneratedGame& generated, double used_ridge) {
  const auto& signals = generated.game.signals;
  if (signals.empty()) return {};
  const SpacePtr sp = signals.front().space();
  const Eigen::Index dim = signals.front().size();
  const double exponent =
      cfg.mode == Mode::aar
          ? cfg.game.p
          : (cfg.mode == Mode::kaar ? 2.0 : dual_exponent(generated.game.config.p));

  std::vector<std::pair<std::string, DualVector>> out;
  if (cfg.comparators.include_zero)
    out.emplace_back("zero", DualVector{Eigen::VectorXd::Zero(dim), exponent, sp});

  if (cfg.comparators.include_ridge && cfg.mode == Mode::aar) {
    Eigen::MatrixXd gram = used_ridge * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd moment = Eigen::VectorXd::Zero(dim);
    for (std::size_t t = 0; t < signals.size(); ++t) {
      gram.selfadjointView<Eigen::Lower>().rankUpdate(signals[t].values());
      moment += generated.game.outcomes[t] * signals[t].values();
    }
    Eigen::VectorXd theta =
        Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(gram.selfadjointView<Eigen::Lower>()))
            .solve(moment);
    out.emplace_back("ridge", DualVector{std::move(theta), exponent, sp});
  }

  if (generated.generator)
    out.emplace_back("generator", *generated.generator);

  Rng rng(cfg.comparators.seed);
  for (int i = 0; i < cfg.comparators.count; ++i) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = rng.normal();
    DualVector w{std::move(v), exponent, sp};
    const double nrm = dual_norm(w);
    const double target = cfg.comparators.scale * rng.uniform(0.1, 1.0);
    if (nrm > 0.0) w.values *= target / nrm;
    char id[32];
    std::snprintf(id, sizeof id, "rand-%03d", i);
    out.emplace_back(id, std::move(w));
  }

  for (std::size_t i = 0; i < cfg.comparators.explicit_values.size(); ++i) {
    if (cfg.comparators.explicit_values[i].size() != dim)
      throw std::invalid_argument("comparators: explicit vector length mismatch");
    char id[32];
    std::snprintf(id, sizeof id, "explicit-%03zu", i);
    out.emplace_back(id, DualVector{cfg.comparators.explicit_values[i], exponent, sp});
  }
  return out;
}

bool BoundReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

BoundReport verify_bounds(const blaar::GameTrace& trace,
                          const blaar::SemiOnlineGame& game,
                          const std::vector<std::pair<std::string, DualVector>>& comparators,
                          BoundKind kind) {
  const auto t0 = std::chrono::steady_clock::now();
  const int horizon = game.config.horizon;
  const double p = game.config.p;
  const double outcome_bound = game.config.outcome_bound;
  const Eigen::Index dim = game.signals.empty() ? 0 : game.signals.front().size();

  double x_inf = 0.0, x_q = 0.0, x_p = 0.0;
  for (const Signal& s : game.signals) {
    x_inf = std::max(x_inf, s.values().cwiseAbs().maxCoeff());
    if (kind == BoundKind::aar_tuned)
      x_q = std::max(x_q, lp_norm(s, dual_exponent(p)));
    if (kind == BoundKind::lp) x_p = std::max(x_p, lp_norm(s, p));
  }

  kaar::GramMatrix gram = kaar::GramMatrix::from_factor(Eigen::MatrixXd::Zero(1, 1));
  if (kind == BoundKind::kaar_logdet) {
    Eigen::MatrixXd x(horizon, dim);
    for (int t = 0; t < horizon; ++t) x.row(t) = game.signals[t].values();
    gram = kaar::GramMatrix::from_factor(x);
  }

  const double loss_alg = trace.final_loss();

  BoundReport report;
  report.rank = trace.rank;
  report.ridge = trace.ridge;
  report.solver_residual = trace.solver_residual;
  report.range_violated = trace.outcome_range_violated;

  for (const auto& [id, w] : comparators) {
    double loss_comp = 0.0;
    for (int t = 0; t < horizon; ++t) {
      const double d = game.outcomes[t] - pairing(w, game.signals[t]);
      loss_comp += d * d;
    }
    double bound = 0.0;
    switch (kind) {
      case BoundKind::aar_log:
        bound = aar::log_regret(horizon, x_inf, outcome_bound, trace.ridge, dim,
                                w.values.squaredNorm());
        break;
      case BoundKind::aar_tuned: {
        const double nrm = dual_norm(w);
        bound = aar::tuned_regret(horizon, x_q, outcome_bound, dim, p, nrm * nrm).regret;
        break;
      }
      case BoundKind::kaar_logdet:
        bound = kaar::logdet_regret(gram, trace.ridge, outcome_bound,
                                    w.values.squaredNorm());
        break;
      case BoundKind::lp: {
        const double nrm = dual_norm(w);
        bound = blaar::lp_regret(horizon, x_p, outcome_bound, p, nrm * nrm);
        break;
      }
    }
    BoundRow row;
    row.comparator_id = id;
    row.loss_alg = loss_alg;
    row.loss_comp = loss_comp;
    row.bound = bound;
    row.margin = bound + loss_comp - loss_alg;
    const double scale = std::max({1.0, loss_alg, loss_comp + bound});
    row.pass = row.margin >= -1e-9 * scale;
    report.rows.push_back(std::move(row));
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return report;
}

// --------------------------------------------------------------- film table

FilmScenario film_scenario(long long pixels, long long max_frames, double p,
                           double outcome_bound, double signal_bound, int fps) {
  if (pixels < 1 || max_frames < 1 || fps < 1)
    throw std::invalid_argument("film: counts must be positive");
  if (!(p >= 2.0) || !std::isfinite(p))
    throw std::invalid_argument("film: requires finite p >= 2");

  FilmScenario out;
  out.fps = fps;
  out.equal_orders = p == 2.0;
  // the two regimes share the comparator prefactor, so they cross exactly
  // where T^{1/2} n^{1/2-1/p} meets T^{1-1/p}: at T = n
  out.crossover_frames = out.equal_orders ? 0 : pixels;
  out.crossover_seconds = out.crossover_frames / fps;

  const double prefactor =
      outcome_bound * outcome_bound * signal_bound * signal_bound;
  const double n = static_cast<double>(pixels);
  for (long long frames = 1; frames <= max_frames; frames *= 2) {
    const double t = static_cast<double>(frames);
    out.rows.push_back({frames,
                        prefactor * std::sqrt(t) * std::pow(n, 0.5 - 1.0 / p),
                        prefactor * std::pow(t, 1.0 - 1.0 / p)});
  }
  return out;
}

// ------------------------------------------------------------------ oracles

double best_comparator_loss(const blaar::SemiOnlineGame& game) {
  Eigen::VectorXd y(game.outcomes.size());
  for (std::size_t t = 0; t < game.outcomes.size(); ++t) y[t] = game.outcomes[t];
  bool all_zero = true;
  for (const Signal& s : game.signals)
    if (s.values().cwiseAbs().maxCoeff() > 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) return y.squaredNorm();
  const lewis::IndependentSubset subset = lewis::max_independent_subset(game.signals);
  const Eigen::VectorXd fitted =
      subset.alphas * subset.alphas.colPivHouseholderQr().solve(y);
  return (y - fitted).squaredNorm();
}

namespace {

double normalized_absdet(const Eigen::MatrixXd& c, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& mu, double p) {
  const Eigen::MatrixXd gamma = c * x;
  const Eigen::VectorXd envelope = gamma.colwise().norm();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < envelope.size(); ++k)
    sum += mu[k] * std::pow(envelope[k], p);
  const double nu = std::pow(sum, 1.0 / p);
  if (!(nu > 0.0) || !std::isfinite(nu)) return 0.0;
  // scaling c by 1/nu activates the constraint and divides det by nu^n
  return std::abs(c.determinant()) / std::pow(nu, static_cast<double>(c.rows()));
}

}  // namespace

double det_search_best(const std::vector<Signal>& selected, double p,
                       std::uint64_t seed, int samples, int polish_steps) {
  if (selected.empty()) throw std::invalid_argument("det search: empty signal set");
  const Eigen::Index n = static_cast<Eigen::Index>(selected.size());
  Eigen::MatrixXd x(n, selected.front().size());
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = selected[i].values();
  const Eigen::VectorXd mu = selected.front().space()
                                 ? selected.front().space()->weights()
                                 : Eigen::VectorXd::Ones(selected.front().size());

  Rng rng(seed);
  Eigen::MatrixXd best = Eigen::MatrixXd::Identity(n, n);
  double best_val = normalized_absdet(best, x, mu, p);
  for (int it = 0; it < samples; ++it) {
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) c(i, j) = rng.normal();
    const double val = normalized_absdet(c, x, mu, p);
    if (val > best_val) {
      best_val = val;
      best = c;
    }
  }
  double step = 0.3;
  for (int it = 0; it < polish_steps; ++it) {
    Eigen::MatrixXd c = best;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) c(i, j) += step * rng.normal();
    const double val = normalized_absdet(c, x, mu, p);
    if (val > best_val) {
      best_val = val;
      best = c;
    } else {
      step *= 0.999;
    }
  }
  return best_val;
}

}  // namespace latreg::harness
