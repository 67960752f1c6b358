#include "harmosyn/serialization.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "harmosyn/errors.hpp"

namespace harmosyn {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string CsvTable::render() const {
  if (header.size() != columns.size()) throw DomainError("CsvTable: header and column counts differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw DomainError("CsvTable: columns have different lengths");
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out += ',';
    out += header[k];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k) out += ',';
      out += format_double(columns[k][r]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + file.string() + " for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw IoError("failed writing " + file.string());
}

std::string read_text(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw IoError("cannot open " + file.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_csv(const std::filesystem::path& file, const CsvTable& table) { write_text(file, table.render()); }

CsvTable path_table(const SignalPath& path) {
  CsvTable table{{"t", "x"}, {{}, path.values}};
  table.columns[0].reserve(path.size());
  for (std::size_t j = 0; j < path.size(); ++j) table.columns[0].push_back(path.time(j));
  return table;
}

namespace {

template <class T>
void put_le(std::string& out, T value) {
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  out.append(reinterpret_cast<const char*>(bits.data()), bits.size());
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw IoError("binary path: truncated file");
  std::array<unsigned char, sizeof(T)> bits{};
  std::memcpy(bits.data(), in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  pos += sizeof(T);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_path_binary(const std::filesystem::path& file, const SignalPath& path) {
  std::string out;
  out.reserve(24 + 8 * path.size());
  put_le(out, path.t0);
  put_le(out, path.dt);
  put_le(out, static_cast<std::uint64_t>(path.size()));
  for (double v : path.values) put_le(out, v);
  write_text(file, out);
}

SignalPath read_path_binary(const std::filesystem::path& file) {
  const std::string in = read_text(file);
  std::size_t pos = 0;
  SignalPath path;
  path.t0 = get_le<double>(in, pos);
  path.dt = get_le<double>(in, pos);
  const auto n = get_le<std::uint64_t>(in, pos);
  if (in.size() != 24 + 8 * n) throw IoError("binary path: size does not match header in " + file.string());
  path.values.resize(n);
  for (auto& v : path.values) v = get_le<double>(in, pos);
  return path;
}

nlohmann::ordered_json to_json(const ExpansionMeta& meta) {
  nlohmann::ordered_json j;
  j["method"] = to_string(meta.method);
  j["truncation"] = meta.truncation;
  j["conditioned_terms"] = meta.conditioned_terms;
  j["sigma0"] = meta.sigma0;
  j["measure"] = meta.measure;
  j["frequency_law"] = meta.frequency_law;
  j["seed"] = meta.seed;
  j["arrivals"] = meta.arrivals;
  return j;
}

nlohmann::ordered_json to_json(const HarmonicExpansion& expansion) {
  nlohmann::ordered_json j;
  j["meta"] = to_json(expansion.meta);
  auto& terms = j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : expansion.terms) {
    terms.push_back({{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}, {"weight", t.weight}});
  }
  return j;
}

HarmonicExpansion expansion_from_json(const nlohmann::json& doc) {
  try {
    HarmonicExpansion e;
    const auto& m = doc.at("meta");
    e.meta.method = generation_method_from_string(m.at("method").get<std::string>());
    e.meta.truncation = m.at("truncation").get<double>();
    e.meta.conditioned_terms = m.at("conditioned_terms").get<std::size_t>();
    e.meta.sigma0 = m.at("sigma0").get<double>();
    e.meta.measure = m.at("measure").get<std::string>();
    e.meta.frequency_law = m.at("frequency_law").get<std::string>();
    e.meta.seed = m.at("seed").get<std::uint64_t>();
    e.meta.arrivals = m.at("arrivals").get<std::size_t>();
    for (const auto& t : doc.at("terms")) {
      e.terms.push_back({t.at("amplitude").get<double>(), t.at("frequency").get<double>(),
                         t.at("phase").get<double>(), t.at("weight").get<double>()});
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("malformed expansion JSON: ") + ex.what());
  }
}

nlohmann::ordered_json to_json(const TimeAverageReport& r) {
  nlohmann::ordered_json j;
  j["T"] = r.horizon;
  j["tau"] = r.taus;
  j["time_avg_mean"] = r.time_avg_mean;
  j["time_avg_acov"] = r.time_avg_acov;
  j["predicted_random_limit"] = r.predicted_random_limit;
  j["abs_error"] = r.abs_error;
  return j;
}

nlohmann::ordered_json to_json(const EnsembleReport& r) {
  nlohmann::ordered_json j;
  j["realizations"] = r.realizations;
  j["tau"] = r.taus;
  j["limit_mean"] = r.limit_mean;
  j["limit_variance"] = r.limit_variance;
  if (!r.time_avg_mean.empty()) {
    j["time_avg_mean"] = r.time_avg_mean;
    j["time_avg_variance"] = r.time_avg_variance;
  }
  j["x0"] = {{"mean", r.x0_mean},
             {"variance", r.x0_variance},
             {"excess_kurtosis", r.x0_excess_kurtosis},
             {"ks_normal_statistic", r.x0_normality.statistic},
             {"ks_normal_p_value", r.x0_normality.p_value}};
  j["ecf"] = {{"u", r.u_grid}, {"real", r.ecf_real}, {"imag", r.ecf_imag}};
  return j;
}

CsvTable time_average_table(const TimeAverageReport& r) {
  return {{"tau", "time_avg", "random_limit", "abs_err"},
          {r.taus, r.time_avg_acov, r.predicted_random_limit, r.abs_error}};
}

}  // namespace harmosyn
