#include "latreg/aar.hpp"
#include "latreg/errors.hpp"
#include "latreg/harness.hpp"
#include "latreg/kaar.hpp"
#include "latreg/lewis.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace latreg::harness {

using njson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> cumulative_losses(const std::vector<double>& predictions,
                                      const std::vector<double>& outcomes) {
  std::vector<double> losses(predictions.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < predictions.size(); ++t) {
    const double d = outcomes[t] - predictions[t];
    acc += d * d;
    losses[t] = acc;
  }
  return losses;
}

struct ExperimentRun {
  GeneratedGame generated;
  blaar::GameTrace trace;
};

bool outcomes_in_range(const std::vector<double>& outcomes, double bound) {
  for (double y : outcomes)
    if (std::abs(y) > bound) return false;
  return true;
}

ExperimentRun run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
  ExperimentRun run;
  run.generated = generate_game(cfg, seed);
  blaar::SemiOnlineGame& game = run.generated.game;

  switch (cfg.mode) {
    case Mode::aar: {
      const Eigen::Index dim = game.signals.front().size();
      const double ridge = cfg.game.ridge.value_or(
          aar::tuned_ridge(cfg.game.horizon, dim, cfg.game.p));
      std::vector<Eigen::VectorXd> xs;
      xs.reserve(game.signals.size());
      for (const Signal& s : game.signals) xs.push_back(s.values());
      run.trace.predictions = aar::run_game(xs, game.outcomes, ridge);
      run.trace.outcomes = game.outcomes;
      run.trace.cumulative_losses = cumulative_losses(run.trace.predictions, game.outcomes);
      run.trace.ridge = ridge;
      run.trace.rank = dim;
      break;
    }
    case Mode::kaar: {
      Eigen::MatrixXd x(game.signals.size(), game.signals.front().size());
      for (std::size_t t = 0; t < game.signals.size(); ++t)
        x.row(static_cast<Eigen::Index>(t)) = game.signals[t].values();
      const kaar::GramMatrix gram = kaar::GramMatrix::from_factor(x);
      const double ridge = cfg.game.ridge.value_or(
          std::sqrt(static_cast<double>(cfg.game.horizon)));
      run.trace.predictions = kaar::semi_online_predictions(gram, game.outcomes, ridge);
      run.trace.outcomes = game.outcomes;
      run.trace.cumulative_losses = cumulative_losses(run.trace.predictions, game.outcomes);
      run.trace.ridge = ridge;
      run.trace.rank = game.signals.front().size();
      break;
    }
    case Mode::blaar:
    case Mode::sobolev:
      run.trace = blaar::run(game);
      break;
    case Mode::perceptron:
      throw std::logic_error("perceptron experiments run through run_classifier");
  }
  if (cfg.mode == Mode::aar || cfg.mode == Mode::kaar) {
    if (!outcomes_in_range(game.outcomes, cfg.game.outcome_bound)) {
      warn("outcome outside [-Y, Y]; regret guarantees do not apply to this run");
      run.trace.outcome_range_violated = true;
    }
  }
  return run;
}

struct ClassifierRun {
  GeneratedGame generated;
  sop::ClassifyResult result;
  sobolev::DomainGrid grid;
};

ClassifierRun run_classifier(const ExperimentConfig& cfg, std::uint64_t seed) {
  const GridSpace& gs = std::get<GridSpace>(cfg.space);
  ClassifierRun run{generate_game(cfg, seed), {}, {gs.dim, gs.side, gs.resolution}};
  run.result = sop::classify_run(run.grid, run.generated.nodes, run.generated.labels,
                                 *cfg.sobolev_params, cfg.perceptron->margin,
                                 cfg.perceptron->ridge);
  return run;
}

// one row per comparator function given by its values on the grid
BoundReport classifier_report(const ExperimentConfig& cfg, const ClassifierRun& run) {
  const sobolev::SobolevParams& prm = *cfg.sobolev_params;
  const double margin = cfg.perceptron->margin;
  const double ridge = cfg.perceptron->ridge;
  const int horizon = static_cast<int>(run.generated.nodes.size());
  const double horizon_factor =
      std::pow(static_cast<double>(horizon), 0.5 - 1.0 / prm.p);

  std::vector<std::pair<std::string, Eigen::VectorXd>> comparators;
  if (run.generated.generator) {
    comparators.emplace_back("generator", run.generated.generator->values);
    comparators.emplace_back("generator-x2", 2.0 * run.generated.generator->values);
  }

  BoundReport report;
  report.rank = run.result.rank;
  report.ridge = ridge;
  report.solver_residual = run.result.basis_residual;
  for (const auto& [id, f] : comparators) {
    const double f_norm =
        sobolev::sobolev_norm(Signal::on(run.grid.space(), f), run.grid, prm);
    double hinge_total = 0.0;
    for (std::size_t t = 0; t < run.generated.nodes.size(); ++t)
      hinge_total += sop::hinge_loss(f[run.generated.nodes[t]], run.generated.labels[t],
                                     margin);
    std::vector<double> on_mistakes;
    on_mistakes.reserve(run.result.mistake_trials.size());
    for (int trial : run.result.mistake_trials)
      on_mistakes.push_back(f[run.generated.nodes[trial]]);
    const double bound =
        sop::mistake_bound(margin, f_norm * f_norm, horizon_factor, ridge, on_mistakes,
                           run.result.evaluation_bound, hinge_total);
    BoundRow row;
    row.comparator_id = id;
    row.loss_alg = run.result.mistakes;
    row.loss_comp = hinge_total;
    row.bound = bound;
    row.margin = bound - run.result.mistakes;
    row.pass = run.result.mistakes <= bound + 1e-9 * std::max(1.0, bound);
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ------------------------------------------------------------------ writers

std::string trace_json_text(const ExperimentConfig& cfg, const blaar::GameTrace& trace) {
  njson j;
  j["config"] = njson::parse(cfg.to_json_text());
  j["predictions"] = trace.predictions;
  j["outcomes"] = trace.outcomes;
  j["losses"] = trace.cumulative_losses;
  j["a"] = trace.ridge;
  j["n"] = trace.rank;
  j["solver_residual"] = trace.solver_residual;
  j["kernel_scale"] = trace.kernel_scale;
  j["outcome_range_violated"] = trace.outcome_range_violated;
  return j.dump(2) + "\n";
}

std::string losses_csv_text(const blaar::GameTrace& trace) {
  std::ostringstream out;
  out << "step,prediction,outcome,step_loss,cumulative_loss\n";
  double prev = 0.0;
  for (std::size_t t = 0; t < trace.predictions.size(); ++t) {
    const double cum = trace.cumulative_losses[t];
    out << (t + 1) << ',' << fmt(trace.predictions[t]) << ',' << fmt(trace.outcomes[t])
        << ',' << fmt(cum - prev) << ',' << fmt(cum) << '\n';
    prev = cum;
  }
  return out.str();
}

std::string report_csv_text(const BoundReport& report) {
  std::ostringstream out;
  out << "comparator_id,loss_alg,loss_comp,bound,margin,pass\n";
  for (const BoundRow& r : report.rows) {
    out << r.comparator_id << ',' << fmt(r.loss_alg) << ',' << fmt(r.loss_comp) << ','
        << fmt(r.bound) << ',' << fmt(r.margin) << ',' << (r.pass ? "true" : "false")
        << '\n';
  }
  return out.str();
}

std::string report_json_text(const BoundReport& report) {
  njson j;
  j["n"] = report.rank;
  j["a"] = report.ridge;
  j["solver_residual"] = report.solver_residual;
  j["wall_ms"] = report.wall_ms;
  j["outcome_range_violated"] = report.range_violated;
  j["all_pass"] = report.all_pass();
  return j.dump(2) + "\n";
}

// minimal static SVG: one polyline per series over a framed plot area
std::string svg_line_plot(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                          const std::string& title) {
  const int w = 720, h = 480, pad = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [label, pts] : series)
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
  const auto py = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
      << "</text>\n"
      << "<rect x='" << pad << "' y='" << pad << "' width='" << w - 2 * pad
      << "' height='" << h - 2 * pad << "' fill='none' stroke='black'/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill='none' stroke='" << colors[s % 5] << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : series[s].second) out << px(x) << ',' << py(y) << ' ';
    out << "'/>\n<text x='" << w - pad + 4 << "' y='"
        << (pad + 16 * static_cast<int>(s)) << "' font-size='12' fill='"
        << colors[s % 5] << "'>" << series[s].first << "</text>\n";
  }
  out << "<text x='" << pad << "' y='" << h - pad + 30 << "' font-size='12'>" << fmt(xmin)
      << "</text>\n<text x='" << w - pad << "' y='" << h - pad + 30
      << "' text-anchor='end' font-size='12'>" << fmt(xmax) << "</text>\n"
      << "<text x='" << pad - 6 << "' y='" << h - pad << "' text-anchor='end' font-size='12'>"
      << fmt(ymin) << "</text>\n<text x='" << pad - 6 << "' y='" << pad
      << "' text-anchor='end' font-size='12'>" << fmt(ymax) << "</text>\n</svg>\n";
  return out.str();
}

njson matrix_rows(const Eigen::MatrixXd& m) {
  njson rows = njson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    njson row = njson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// row-major arrays of the solved basis, the induced kernel, and (for grid
// games) the base evaluation signal
std::string basis_json_text(const ExperimentConfig& cfg, const GeneratedGame& generated) {
  const lewis::Basis basis = lewis::build(generated.game.signals, generated.game.config.p);
  njson j;
  j["p"] = basis.p;
  j["indices"] = basis.indices;
  j["C"] = matrix_rows(basis.C);
  j["D"] = matrix_rows(basis.D);
  j["alphas"] = matrix_rows(basis.alphas);
  j["envelope"] = std::vector<double>(basis.envelope.data(),
                                      basis.envelope.data() + basis.envelope.size());
  j["weight"] = std::vector<double>(basis.weight.data(),
                                    basis.weight.data() + basis.weight.size());
  j["kernel"] = matrix_rows(lewis::kernel(basis).matrix());
  j["map_scale"] = basis.map_scale;
  j["residual"] = basis.residual;
  j["iterations"] = basis.iterations;
  if (cfg.mode == Mode::sobolev && std::holds_alternative<GridSpace>(cfg.space)) {
    const GridSpace& gs = std::get<GridSpace>(cfg.space);
    const sobolev::DomainGrid grid(gs.dim, gs.side, gs.resolution);
    const sobolev::PointEvaluations evals(grid, *cfg.sobolev_params);
    const Eigen::VectorXd& base = evals.base().values();
    j["evaluation_kernel"] = std::vector<double>(base.data(), base.data() + base.size());
    j["evaluation_norm"] = evals.uniform_dual_norm();
  }
  return j.dump(2) + "\n";
}

// -------------------------------------------------------------- subcommands

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, bool plot, bool dump_basis) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(read_text(config_path));
  if (seed_override) cfg.data.seed = *seed_override;
  const fs::path out(out_dir);

  if (cfg.mode == Mode::perceptron) {
    const ClassifierRun run = run_classifier(cfg, cfg.data.seed);
    blaar::GameTrace trace;
    trace.ridge = cfg.perceptron->ridge;
    trace.rank = run.result.rank;
    trace.solver_residual = run.result.basis_residual;
    for (std::size_t t = 0; t < run.generated.labels.size(); ++t) {
      trace.predictions.push_back(run.result.predictions[t]);
      trace.outcomes.push_back(run.generated.labels[t]);
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < trace.predictions.size(); ++t) {
      if (run.result.predictions[t] != run.generated.labels[t]) acc += 1.0;
      trace.cumulative_losses.push_back(acc);
    }
    write_text(out / "trace.json", trace_json_text(cfg, trace));
    write_text(out / "losses.csv", losses_csv_text(trace));
    std::cout << "mistakes: " << run.result.mistakes << " over "
              << run.generated.labels.size() << " trials (rank " << run.result.rank
              << ")\n";
    return 0;
  }

  const ExperimentRun run = run_experiment(cfg, cfg.data.seed);
  write_text(out / "trace.json", trace_json_text(cfg, run.trace));
  write_text(out / "losses.csv", losses_csv_text(run.trace));
  if (dump_basis && (cfg.mode == Mode::blaar || cfg.mode == Mode::sobolev))
    write_text(out / "basis.json", basis_json_text(cfg, run.generated));
  if (plot) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t t = 0; t < run.trace.cumulative_losses.size(); ++t)
      pts.emplace_back(static_cast<double>(t + 1), run.trace.cumulative_losses[t]);
    write_text(out / "loss_curve.svg",
               svg_line_plot({{"cumulative loss", pts}}, "cumulative square loss"));
  }
  std::cout << "final loss: " << fmt(run.trace.final_loss()) << " (rank "
            << run.trace.rank << ", a " << fmt(run.trace.ridge) << ")\n";
  return 0;
}

BoundKind default_bound(Mode mode) {
  switch (mode) {
    case Mode::aar: return BoundKind::aar_log;
    case Mode::kaar: return BoundKind::kaar_logdet;
    default: return BoundKind::lp;
  }
}

int cmd_verify(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override,
               const std::string& bound_name) {
  ExperimentConfig cfg = ExperimentConfig::from_json_text(read_text(config_path));
  if (seed_override) cfg.data.seed = *seed_override;
  const fs::path out(out_dir);

  BoundReport report;
  if (cfg.mode == Mode::perceptron) {
    const ClassifierRun run = run_classifier(cfg, cfg.data.seed);
    report = classifier_report(cfg, run);
  } else {
    BoundKind kind = default_bound(cfg.mode);
    if (bound_name == "aar-log") kind = BoundKind::aar_log;
    else if (bound_name == "aar-tuned") kind = BoundKind::aar_tuned;
    else if (bound_name == "kaar-logdet") kind = BoundKind::kaar_logdet;
    else if (bound_name == "lp") kind = BoundKind::lp;
    else if (!bound_name.empty()) throw std::invalid_argument("unknown bound selector");

    const ExperimentRun run = run_experiment(cfg, cfg.data.seed);
    const auto comparators = make_comparators(cfg, run.generated, run.trace.ridge);
    report = verify_bounds(run.trace, run.generated.game, comparators, kind);
  }

  write_text(out / "report.csv", report_csv_text(report));
  write_text(out / "report.json", report_json_text(report));
  int fails = 0;
  for (const auto& r : report.rows)
    if (!r.pass) ++fails;
  std::cout << report.rows.size() << " comparators, " << fails << " bound violations\n";
  return report.all_pass() ? 0 : 1;
}

int cmd_film(long long pixels, long long max_frames, double p, double outcome_bound,
             double signal_bound, int fps, const std::string& out_dir) {
  const FilmScenario scenario =
      film_scenario(pixels, max_frames, p, outcome_bound, signal_bound, fps);
  std::ostringstream csv;
  csv << "frames,dimension_bound,span_bound\n";
  for (const FilmRow& r : scenario.rows)
    csv << r.frames << ',' << fmt(r.dimension_bound) << ',' << fmt(r.span_bound) << '\n';
  njson j;
  j["pixels"] = pixels;
  j["p"] = p;
  j["fps"] = scenario.fps;
  j["equal_orders"] = scenario.equal_orders;
  j["crossover_frames"] = scenario.crossover_frames;
  j["crossover_seconds"] = scenario.crossover_seconds;
  const fs::path out(out_dir);
  write_text(out / "film.csv", csv.str());
  write_text(out / "film.json", j.dump(2) + "\n");
  if (scenario.equal_orders)
    std::cout << "p = 2: both regret regimes grow identically\n";
  else
    std::cout << "span regime wins below " << scenario.crossover_frames << " frames ("
              << scenario.crossover_seconds << " s at " << fps << " fps)\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& ps,
              const std::vector<int>& horizons, int games, const std::string& out_dir,
              bool plot) {
  ExperimentConfig base;
  if (!config_path.empty()) {
    base = ExperimentConfig::from_json_text(read_text(config_path));
  } else {
    base.mode = Mode::blaar;
    base.space = WeightedSpace{Eigen::VectorXd::Constant(16, 1.0 / 16.0)};
    base.data.span_rank = 4;
    base.data.source = "random";
  }
  if (base.mode == Mode::sobolev || base.mode == Mode::perceptron)
    throw std::invalid_argument("sweep supports vector-space modes only");

  std::ostringstream sweep_csv, growth_csv;
  sweep_csv << "p,horizon,mean_regret,mean_loss\n";
  growth_csv << "p,slope,reference_exponent,pass\n";
  bool all_pass = true;
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;

  for (double p : ps) {
    std::vector<std::pair<double, double>> log_points;
    for (int horizon : horizons) {
      ExperimentConfig cfg = base;
      cfg.game.p = p;
      cfg.game.horizon = horizon;
      double regret_sum = 0.0, loss_sum = 0.0;
      for (int g = 0; g < games; ++g) {
        const GeneratedGame gen = generate_game(cfg, cfg.data.seed + g);
        const blaar::GameTrace trace = blaar::run(gen.game);
        const double best = best_comparator_loss(gen.game);
        regret_sum += std::max(trace.final_loss() - best, 1e-12);
        loss_sum += trace.final_loss();
      }
      const double mean_regret = regret_sum / games;
      sweep_csv << fmt(p) << ',' << horizon << ',' << fmt(mean_regret) << ','
                << fmt(loss_sum / games) << '\n';
      log_points.emplace_back(std::log(static_cast<double>(horizon)),
                              std::log(mean_regret));
    }
    // least-squares slope of log regret against log horizon
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : log_points) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(log_points.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double reference = 0.5 + std::abs(0.5 - 1.0 / p);
    const bool pass = slope <= reference + 0.15;
    all_pass = all_pass && pass;
    growth_csv << fmt(p) << ',' << fmt(slope) << ',' << fmt(reference) << ','
               << (pass ? "true" : "false") << '\n';
    series.emplace_back("p=" + fmt(p), log_points);
  }

  const fs::path out(out_dir);
  write_text(out / "sweep.csv", sweep_csv.str());
  write_text(out / "growth.csv", growth_csv.str());
  if (plot)
    write_text(out / "growth.svg",
               svg_line_plot(series, "log regret against log horizon"));
  std::cout << (all_pass ? "all growth fits within the reference exponents\n"
                         : "growth fit exceeded a reference exponent\n");
  return all_pass ? 0 : 1;
}

int cmd_selftest(bool quick) {
  bool ok = true;
  const auto report = [&](const std::string& name, bool pass, const std::string& detail) {
    std::cout << "selftest " << name << ": " << (pass ? "ok" : "FAILED") << " (" << detail
              << ")\n";
    ok = ok && pass;
  };

  {  // coordinate and kernel solvers must agree step by step
    double worst = 0.0;
    const int runs = quick ? 8 : 25;
    for (int i = 0; i < runs; ++i) {
      Rng rng(1000 + i);
      const int dim = rng.uniform_int(1, 4);
      const int horizon = rng.uniform_int(1, 15);
      const double ridge = rng.uniform(0.3, 3.0);
      std::vector<Eigen::VectorXd> xs;
      std::vector<double> ys;
      Eigen::MatrixXd x(horizon, dim);
      for (int t = 0; t < horizon; ++t) {
        Eigen::VectorXd v(dim);
        for (int k = 0; k < dim; ++k) v[k] = rng.normal();
        x.row(t) = v;
        xs.push_back(v);
        ys.push_back(rng.uniform(-1.0, 1.0));
      }
      const auto direct = aar::run_game(xs, ys, ridge);
      const auto kernel = kaar::semi_online_predictions(
          kaar::GramMatrix::from_factor(x), ys, ridge);
      for (int t = 0; t < horizon; ++t) {
        const double scale = std::max({1.0, std::abs(direct[t]), std::abs(kernel[t])});
        worst = std::max(worst, std::abs(direct[t] - kernel[t]) / scale);
      }
    }
    report("coordinate/kernel agreement", worst <= 1e-9,
           "max relative deviation " + fmt(worst));
  }

  {  // the fixed-point basis must match a brute-force determinant search
    double worst_ratio = 1.0;
    double worst_kernel_gap = 0.0;
    const std::vector<double> exponents = quick ? std::vector<double>{1.5, 3.0}
                                                : std::vector<double>{1.5, 2.0, 3.0, 4.0};
    const int seeds = quick ? 1 : 3;
    for (double p : exponents) {
      for (int s = 0; s < seeds; ++s) {
        Rng rng(77 + s);
        const int points = rng.uniform_int(4, 8);
        SpacePtr space = MeasureSpace::uniform(points, 1.0 / points);
        std::vector<Signal> sig;
        for (int i = 0; i < 2; ++i) {
          Eigen::VectorXd v(points);
          for (int k = 0; k < points; ++k) v[k] = rng.normal();
          sig.push_back(Signal::on(space, v));
        }
        const lewis::Basis basis = lewis::solve(sig, p);
        const double solver_det = std::abs(basis.C.determinant());
        const double searched = det_search_best(sig, p, 900 + s);
        if (searched > 0.0) worst_ratio = std::min(worst_ratio, solver_det / searched);
        const Eigen::MatrixXd gap = lewis::kernel(basis).matrix() -
                                    lewis::weighted_integral_kernel(basis).matrix();
        worst_kernel_gap = std::max(worst_kernel_gap, gap.cwiseAbs().maxCoeff());
      }
    }
    report("determinant optimality", worst_ratio >= 1.0 - 1e-4,
           "worst solver/search ratio " + fmt(worst_ratio));
    report("kernel route agreement", worst_kernel_gap <= 1e-6,
           "max entry gap " + fmt(worst_kernel_gap));
  }

  return ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"semi-online square-loss regression with lattice-norm regret guarantees"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", bound_name;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed_flag = 0;
  bool plot = false, quick = false, dump_basis = false;

  auto* run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("--config", config_path, "experiment config JSON")->required();
  run->add_option("--out", out_dir, "output directory");
  auto* run_seed = run->add_option("--seed", seed_flag, "override the config seed");
  run->add_flag("--plot", plot, "emit a loss-curve SVG");
  run->add_flag("--dump-basis", dump_basis,
                "also write the solved basis and kernel as JSON arrays");

  auto* verify = app.add_subcommand("verify", "run a config and check regret bounds");
  verify->add_option("--config", config_path, "experiment config JSON")->required();
  verify->add_option("--out", out_dir, "output directory");
  auto* verify_seed = verify->add_option("--seed", seed_flag, "override the config seed");
  verify->add_option("--bound", bound_name,
                     "bound selector: aar-log, aar-tuned, kaar-logdet, lp");

  long long pixels = 786432, max_frames = 1LL << 21;
  double film_p = 3.0, film_y = 1.0, film_x = 1.0;
  int fps = 24;
  auto* film = app.add_subcommand("film", "tabulate the frame-scoring regret regimes");
  film->add_option("--pixels", pixels, "pixels per frame");
  film->add_option("--max-frames", max_frames, "largest frame count in the table");
  film->add_option("--p", film_p, "norm exponent (>= 2)");
  film->add_option("--outcome-bound", film_y, "score bound Y");
  film->add_option("--signal-bound", film_x, "signal norm bound X");
  film->add_option("--fps", fps, "frames per second");
  film->add_option("--out", out_dir, "output directory");

  std::vector<double> sweep_ps{1.5, 2.0, 3.0, 4.0};
  std::vector<int> sweep_horizons{25, 50, 100, 200, 400};
  int sweep_games = 10;
  auto* sweep = app.add_subcommand("sweep", "grid over (p, horizon), fit regret growth");
  sweep->add_option("--config", config_path, "base config (defaults to a built-in game)");
  sweep->add_option("--p", sweep_ps, "exponent grid (comma separated)")->delimiter(',');
  sweep->add_option("--horizons", sweep_horizons, "horizon grid (comma separated)")
      ->delimiter(',');
  sweep->add_option("--games", sweep_games, "games per grid cell");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_flag("--plot", plot, "emit a growth-fit SVG");

  auto* selftest = app.add_subcommand("selftest", "run the built-in brute-force oracles");
  selftest->add_flag("--quick", quick, "reduced instance counts");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  if (run_seed->count() || verify_seed->count()) seed_override = seed_flag;

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed_override, plot, dump_basis);
    if (verify->parsed()) return cmd_verify(config_path, out_dir, seed_override, bound_name);
    if (film->parsed())
      return cmd_film(pixels, max_frames, film_p, film_y, film_x, fps, out_dir);
    if (sweep->parsed())
      return cmd_sweep(config_path, sweep_ps, sweep_horizons, sweep_games, out_dir, plot);
    if (selftest->parsed()) return cmd_selftest(quick);
  } catch (const std::exception& e) {
    njson err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace latreg::harness
