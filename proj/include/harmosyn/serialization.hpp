#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "harmosyn/ergodics.hpp"
#include "harmosyn/synthesis.hpp"

namespace harmosyn {

/// Shortest decimal text that parses back to the same double ('.' decimal,
/// locale independent). Non-finite values print as nan, inf, -inf.
std::string format_double(double value);

/// Column-major table rendered as CSV with a header row and LF endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::string render() const;
};

void write_text(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);
void write_csv(const std::filesystem::path& file, const CsvTable& table);

/// Columns t, x.
CsvTable path_table(const SignalPath& path);

/// Little-endian layout: f64 t0, f64 dt, u64 n, then n f64 values.
void write_path_binary(const std::filesystem::path& file, const SignalPath& path);
SignalPath read_path_binary(const std::filesystem::path& file);

nlohmann::ordered_json to_json(const ExpansionMeta& meta);
nlohmann::ordered_json to_json(const HarmonicExpansion& expansion);
HarmonicExpansion expansion_from_json(const nlohmann::json& doc);
nlohmann::ordered_json to_json(const TimeAverageReport& report);
nlohmann::ordered_json to_json(const EnsembleReport& report);

/// Columns tau, time_avg, random_limit, abs_err.
CsvTable time_average_table(const TimeAverageReport& report);

}  // namespace harmosyn
