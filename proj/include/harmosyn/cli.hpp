#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "harmosyn/config.hpp"
#include "harmosyn/statistics.hpp"

namespace harmosyn {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_io = 4 };

/// Command line values that override the configuration document.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Writes path.csv, path.bin and expansion.json.
void cmd_simulate(const RunConfig& config, const std::filesystem::path& out);

/// what: cf -> cf.csv (+ cf_crosscheck.csv for gamma models), density -> density.csv,
/// acov -> acov.csv.
void cmd_theory(const RunConfig& config, const std::string& what, const std::filesystem::path& out);

/// Writes ergodic_report.json and time_average.csv.
void cmd_ergodic(const RunConfig& config, const std::filesystem::path& out);

/// Histogram data for one path and for a pool of independent paths, binned
/// into equiprobable bins of the numerically inverted marginal.
struct FigureData {
  std::vector<double> edges;  // bins + 1 values, outer edges infinite
  std::vector<double> probabilities;
  std::vector<double> single_counts;
  std::vector<double> pooled_counts;
  TestResult single;
  ClusteredChiSquare pooled;
  std::vector<double> x;
  std::vector<double> density;
};

FigureData compute_figures(const RunConfig& config);

/// Writes density.csv, fig1_histogram.csv, fig2_histogram.csv and figures.json.
FigureData cmd_figures(const RunConfig& config, const std::filesystem::path& out);

/// Writes normalization.json; returns true when both normalization conditions hold.
bool cmd_check_measure(const RunConfig& config, const std::filesystem::path& out);

/// Entry point of the command line tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace harmosyn
