#include "harmosyn/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <limits>

#include "harmosyn/charfn.hpp"
#include "harmosyn/errors.hpp"
#include "harmosyn/serialization.hpp"

namespace harmosyn {
namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
}

void write_json(const fs::path& file, const nlohmann::ordered_json& doc) { write_text(file, doc.dump(2) + "\n"); }

// nu of the gamma measure behind the model, in the convention of the
// closed-form Laplace characteristic function.
std::optional<double> laplace_nu(const HarmonizableModel& model) {
  if (model.measure.kind() != MeasureKind::gamma || model.measure.gamma_params().form != GammaTailForm::scaled_argument)
    return std::nullopt;
  return 0.5 * model.measure.gamma_params().nu * model.spectrum.sigma0 * model.spectrum.sigma0;
}

}  // namespace

void apply_overrides(RunConfig& config, const Overrides& overrides) {
  if (overrides.seed) config.generation.seed = *overrides.seed;
  if (overrides.jobs) config.analysis.jobs = *overrides.jobs;
}

void cmd_simulate(const RunConfig& config, const fs::path& out) {
  const auto generator = build_generator(config);
  const HarmonicExpansion expansion = generator(config.generation.seed);
  SignalPath path = evaluate(expansion, config.grid.t0, config.grid.dt, config.grid.n);
  ensure_dir(out);
  write_csv(out / "path.csv", path_table(path));
  write_path_binary(out / "path.bin", path);
  write_json(out / "expansion.json", to_json(expansion));
}

void cmd_theory(const RunConfig& config, const std::string& what, const fs::path& out) {
  const HarmonizableModel model = build_model(config);
  ensure_dir(out);
  if (what == "cf") {
    const auto u = u_grid(config);
    CsvTable table{{"u", "value"}, {u, {}}};
    for (double v : u) table.columns[1].push_back(marginal_cf(v, model));
    write_csv(out / "cf.csv", table);
    if (const auto nu = laplace_nu(model)) {
      CsvTable cross{{"u1", "u2", "fdd_cf", "laplace_fdd_cf", "abs_diff"}, {{}, {}, {}, {}, {}}};
      const std::vector<double> times{0.0, 1.0};
      for (double u1 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        for (double u2 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
          const std::vector<double> u2d{u1, u2};
          const double a = fdd_cf(u2d, times, model);
          const double b = laplace_fdd_cf(u2d, times, *nu, model.spectrum);
          const double row[] = {u1, u2, a, b, std::abs(a - b)};
          for (std::size_t k = 0; k < 5; ++k) cross.columns[k].push_back(row[k]);
        }
      }
      write_csv(out / "cf_crosscheck.csv", cross);
    }
  } else if (what == "density") {
    const auto x = x_grid(config);
    const DensityResult d = marginal_density(x, model);
    for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
    write_csv(out / "density.csv", {{"x", "value"}, {d.x, d.density}});
  } else if (what == "acov") {
    CsvTable table{{"tau", "value"}, {config.analysis.tau, {}}};
    for (double tau : config.analysis.tau) table.columns[1].push_back(autocovariance(tau, model.spectrum));
    write_csv(out / "acov.csv", table);
  } else {
    throw ConfigError("--what", "must be cf, density or acov");
  }
}

void cmd_ergodic(const RunConfig& config, const fs::path& out) {
  const auto generator = build_generator(config);
  const HarmonicExpansion expansion = generator(config.generation.seed);
  const SignalPath path = evaluate(expansion, 0.0, config.grid.dt, config.grid.n);
  const TimeAverageReport single = time_average_report(expansion, path, config.analysis.tau);

  EnsembleOptions options;
  options.realizations = config.analysis.realizations;
  options.seed = config.generation.seed;
  options.taus = config.analysis.tau;
  options.horizon = config.analysis.horizon;
  options.dt = config.grid.dt;
  options.u_grid = u_grid(config);
  options.jobs = config.analysis.jobs;
  const EnsembleReport ensemble = ensemble_diagnostics(generator, options);

  ensure_dir(out);
  nlohmann::ordered_json doc;
  doc["time_average"] = to_json(single);
  doc["ensemble"] = to_json(ensemble);
  write_json(out / "ergodic_report.json", doc);
  write_csv(out / "time_average.csv", time_average_table(single));
}

FigureData compute_figures(const RunConfig& config) {
  const HarmonizableModel model = build_model(config);
  if (!laplace_nu(model))
    throw ConfigError("model.measure.kind", "figures need a gamma (scaled_argument) or laplace measure");
  const auto cf = [&model](double u) { return marginal_cf(u, model); };
  DensityOptions inversion;
  inversion.max_cutoff = 1024.0;

  FigureData fig;
  fig.x = x_grid(config);
  fig.density = marginal_density(fig.x, cf, inversion).density;

  const std::size_t bins = config.analysis.bins;
  std::vector<double> probs;
  for (std::size_t k = 1; k < bins; ++k) probs.push_back(static_cast<double>(k) / static_cast<double>(bins));
  const double range = 20.0 * model.spectrum.sigma0;
  fig.edges.push_back(-std::numeric_limits<double>::infinity());
  for (double q : marginal_quantiles(probs, cf, range, inversion)) fig.edges.push_back(q);
  fig.edges.push_back(std::numeric_limits<double>::infinity());
  fig.probabilities.assign(bins, 1.0 / static_cast<double>(bins));

  const auto generator = build_generator(config);
  const std::size_t paths = config.analysis.figure_paths;
  std::vector<std::vector<double>> counts(paths);
  parallel_for(paths, config.analysis.jobs, [&](std::size_t r) {
    const HarmonicExpansion e = generator(derive_seed(config.generation.seed, r));
    const SignalPath p = evaluate(e, config.grid.t0, config.grid.dt, config.grid.n);
    counts[r] = histogram(p.values, fig.edges);
  });
  fig.single_counts = counts.front();
  fig.pooled_counts.assign(bins, 0.0);
  for (const auto& c : counts)
    for (std::size_t b = 0; b < bins; ++b) fig.pooled_counts[b] += c[b];
  fig.single = pearson_chi_square(fig.single_counts, fig.probabilities);
  fig.pooled = rao_scott_chi_square(counts, fig.probabilities);
  return fig;
}

FigureData cmd_figures(const RunConfig& config, const fs::path& out) {
  FigureData fig = compute_figures(config);
  ensure_dir(out);
  write_csv(out / "density.csv", {{"x", "value"}, {fig.x, fig.density}});
  auto hist = [&](const std::vector<double>& counts) {
    double total = 0.0;
    for (double c : counts) total += c;
    CsvTable t{{"bin_lo", "bin_hi", "count", "mass", "expected_mass"}, {}};
    t.columns.resize(5);
    for (std::size_t b = 0; b < counts.size(); ++b) {
      t.columns[0].push_back(fig.edges[b]);
      t.columns[1].push_back(fig.edges[b + 1]);
      t.columns[2].push_back(counts[b]);
      t.columns[3].push_back(counts[b] / total);
      t.columns[4].push_back(fig.probabilities[b]);
    }
    return t;
  };
  write_csv(out / "fig1_histogram.csv", hist(fig.single_counts));
  write_csv(out / "fig2_histogram.csv", hist(fig.pooled_counts));
  auto test_json = [](const TestResult& t) {
    return nlohmann::ordered_json{{"statistic", t.statistic}, {"dof", t.dof}, {"p_value", t.p_value}};
  };
  nlohmann::ordered_json doc;
  doc["bins"] = fig.probabilities.size();
  doc["single_path"] = test_json(fig.single);
  doc["pooled_naive"] = test_json(fig.pooled.naive);
  doc["pooled_rao_scott_first_order"] = test_json(fig.pooled.first_order);
  doc["pooled_rao_scott"] = test_json(fig.pooled.corrected);
  doc["design_effect"] = fig.pooled.design_effect;
  doc["design_effect_cv2"] = fig.pooled.design_effect_cv2;
  write_json(out / "figures.json", doc);
  return fig;
}

bool cmd_check_measure(const RunConfig& config, const fs::path& out) {
  const HarmonizableModel model = build_model(config);
  const NormalizationReport r = check_normalization(model.measure);
  ensure_dir(out);
  nlohmann::ordered_json doc;
  doc["measure"] = model.measure.describe();
  doc["second_moment"] = r.second_moment;
  doc["unit_tail_mean"] = r.unit_tail_mean;
  doc["mean"] = r.mean;
  doc["unit_tail_condition"] = r.unit_tail_condition;
  doc["mean_condition"] = r.mean_condition;
  write_json(out / "normalization.json", doc);
  std::cout << doc.dump(2) << "\n";
  return r.mean_condition;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Harmonic synthesis of stationary signals with Levy-driven amplitudes"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string what = "cf";
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "overrides generation.seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--jobs", jobs, "worker threads (0: available parallelism)");
  auto* simulate = app.add_subcommand("simulate", "one realization: path.csv, path.bin, expansion.json");
  auto* theory = app.add_subcommand("theory", "characteristic function, density or autocovariance tables");
  theory->add_option("--what", what, "cf | density | acov")->check(CLI::IsMember({"cf", "density", "acov"}));
  auto* ergodic = app.add_subcommand("ergodic", "time-average and ensemble diagnostics");
  auto* figures = app.add_subcommand("figures", "single-path and pooled histograms against the density");
  auto* check = app.add_subcommand("check-measure", "normalization of the Levy measure");
  for (auto* sub : {simulate, theory, ergodic, figures, check}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    apply_overrides(config, {seed, jobs});
    validate(config);
    const fs::path dir(out);
    if (simulate->parsed()) cmd_simulate(config, dir);
    if (theory->parsed()) cmd_theory(config, what, dir);
    if (ergodic->parsed()) cmd_ergodic(config, dir);
    if (figures->parsed()) {
      const FigureData fig = cmd_figures(config, dir);
      std::cout << "single path chi2=" << fig.single.statistic << " p=" << fig.single.p_value
                << "; pooled Rao-Scott chi2=" << fig.pooled.corrected.statistic
                << " p=" << fig.pooled.corrected.p_value << "\n";
    }
    if (check->parsed()) cmd_check_measure(config, dir);
    return exit_ok;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return exit_config;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io;
  }
}

}  // namespace harmosyn
