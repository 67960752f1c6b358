#pragma once

#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "harmosyn/ergodics.hpp"
#include "harmosyn/model.hpp"

namespace harmosyn {

struct MeasureConfig {
  // gamma | laplace | atoms | density | truncated | scaled
  std::string kind = "gamma";
  double nu = 1.0;                       // gamma, laplace
  std::string form = "scaled_argument";  // gamma: scaled_argument | literal
  std::vector<Atom> atoms;               // atoms: [[x, mass], ...]
  std::vector<DensityPoint> points;      // density: [[x, density], ...]
  double level = 0.0;                    // truncated
  double factor = 1.0;                   // scaled
  std::shared_ptr<MeasureConfig> base;   // truncated, scaled
};

struct FrequencyConfig {
  // uniform | exponential | atoms | table
  std::string kind = "uniform";
  double lower = 0.0;  // uniform: "a"
  double upper = 1.0;  // uniform: "b"
  double rate = 1.0;
  std::vector<FrequencyAtom> atoms;   // atoms: "points": [[l, nu], ...]
  std::vector<QuantilePoint> points;  // table: "quantile": [[u, lambda], ...]
};

struct ModelConfig {
  double sigma0 = 1.0;
  MeasureConfig measure;
  FrequencyConfig frequency;
};

struct GenerationConfig {
  std::string method = "inverse_levy";
  std::optional<double> truncation;  // L; derived from `retained` when absent
  double retained = 1.0 - 1e-3;
  std::size_t terms = 8;                  // conditioned: m
  std::string variant = "inverse_levy";   // conditioned: inverse_levy | gamma_shotnoise
  std::string subordinator = "gamma";     // discrete: deterministic | gamma | levy
  double scale = 1.0;                     // gaussian_limit: L
  std::uint64_t seed = 1;
  double phase_span = 2.0 * std::numbers::pi;
};

struct GridConfig {
  double t0 = 0.0;
  double dt = 0.05;
  std::size_t n = 2000;
};

struct AnalysisConfig {
  std::vector<double> tau{0.0, 1.0, 2.0};
  std::vector<double> u;  // empty: -5..5 step 0.25
  std::vector<double> x;  // empty: -6..6 step 0.05
  std::size_t realizations = 200;
  double horizon = 0.0;  // ensemble time averages; 0 disables
  std::size_t figure_paths = 50;
  std::size_t bins = 20;
  unsigned jobs = 0;
};

/// Precedence, lowest first: built-in defaults, the JSON document, command
/// line flags (applied by the caller after parsing).
struct RunConfig {
  ModelConfig model;
  GenerationConfig generation;
  GridConfig grid;
  AnalysisConfig analysis;
};

/// Parses and validates. Missing fields take their defaults; unknown fields
/// and out-of-domain values raise ConfigError naming the dotted field path.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& file);
nlohmann::ordered_json to_json(const RunConfig& config);

/// Checks every block against the preconditions of the operations it feeds
/// (including building the model and resolving L).
void validate(const RunConfig& config);

LevyMeasure build_measure(const MeasureConfig& measure, double sigma0, const std::string& field = "model.measure");
FrequencyDistribution build_frequency(const FrequencyConfig& frequency,
                                      const std::string& field = "model.freq");
HarmonizableModel build_model(const RunConfig& config);

/// L used by the configured generator.
double resolve_truncation(const RunConfig& config, const HarmonizableModel& model);
ExpansionGenerator build_generator(const RunConfig& config);

std::vector<double> u_grid(const RunConfig& config);
std::vector<double> x_grid(const RunConfig& config);

}  // namespace harmosyn
