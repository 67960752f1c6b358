#include "harmosyn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "harmosyn/errors.hpp"
#include "harmosyn/serialization.hpp"

namespace harmosyn {
namespace {

using nlohmann::json;

// Reads fields out of one JSON object and remembers which were seen so that
// unknown keys can be reported.
class Reader {
 public:
  Reader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key) && !doc_.at(key).is_null();
  }
  const json& at(const std::string& key) {
    seen_.insert(key);
    return doc_.at(key);
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = doc_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key), "has the wrong type");
    }
  }

  void finish() const {
    for (const auto& item : doc_.items())
      if (!seen_.count(item.key())) throw ConfigError(field(item.key()), "unknown field");
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

std::vector<double> read_doubles(Reader& r, const std::string& key, std::vector<double> fallback) {
  if (!r.has(key)) return fallback;
  const json& arr = r.at(key);
  require(arr.is_array(), r.field(key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    require(arr[i].is_number(), r.field(key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

// Arrays of [first, second] number pairs.
template <class T>
std::vector<T> read_pairs(Reader& r, const std::string& key) {
  std::vector<T> out;
  if (!r.has(key)) return out;
  const json& arr = r.at(key);
  require(arr.is_array(), r.field(key), "expected an array of [a, b] pairs");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& item = arr[i];
    require(item.is_array() && item.size() == 2 && item[0].is_number() && item[1].is_number(),
            r.field(key) + "[" + std::to_string(i) + "]", "expected a pair of numbers");
    out.push_back(T{item[0].get<double>(), item[1].get<double>()});
  }
  return out;
}

template <class T, class A, class B>
nlohmann::ordered_json pairs_json(const std::vector<T>& items, A T::*first, B T::*second) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& item : items) arr.push_back({item.*first, item.*second});
  return arr;
}

MeasureConfig parse_measure(const json& doc, const std::string& path) {
  Reader r(doc, path);
  MeasureConfig m;
  r.get("kind", m.kind);
  if (m.kind == "gamma" || m.kind == "laplace") {
    r.get("nu", m.nu);
    require(m.nu > 0.0 && std::isfinite(m.nu), r.field("nu"), "must be positive");
    if (m.kind == "gamma") {
      r.get("form", m.form);
      require(m.form == "scaled_argument" || m.form == "literal", r.field("form"),
              "must be scaled_argument or literal");
    }
  } else if (m.kind == "atoms") {
    m.atoms = read_pairs<Atom>(r, "atoms");
    require(!m.atoms.empty(), r.field("atoms"), "needs at least one atom");
  } else if (m.kind == "density") {
    m.points = read_pairs<DensityPoint>(r, "points");
    require(m.points.size() >= 2, r.field("points"), "needs at least two points");
  } else if (m.kind == "truncated" || m.kind == "scaled") {
    require(r.has("base"), r.field("base"), "is required");
    m.base = std::make_shared<MeasureConfig>(parse_measure(r.at("base"), r.field("base")));
    if (m.kind == "truncated") {
      r.get("level", m.level);
      require(m.level > 0.0, r.field("level"), "must be positive");
    } else {
      r.get("factor", m.factor);
      require(m.factor > 0.0 && std::isfinite(m.factor), r.field("factor"), "must be positive");
    }
  } else {
    throw ConfigError(r.field("kind"), "unknown measure kind '" + m.kind + "'");
  }
  r.finish();
  return m;
}

FrequencyConfig parse_frequency(const json& doc, const std::string& path) {
  Reader r(doc, path);
  FrequencyConfig f;
  r.get("kind", f.kind);
  if (f.kind == "uniform") {
    r.get("a", f.lower);
    r.get("b", f.upper);
    require(f.lower >= 0.0, r.field("a"), "must be non-negative");
    require(f.upper > f.lower, r.field("b"), "must exceed a");
  } else if (f.kind == "exponential") {
    r.get("rate", f.rate);
    require(f.rate > 0.0, r.field("rate"), "must be positive");
  } else if (f.kind == "atoms") {
    f.atoms = read_pairs<FrequencyAtom>(r, "points");
    require(!f.atoms.empty(), r.field("points"), "needs at least one atom");
  } else if (f.kind == "table") {
    f.points = read_pairs<QuantilePoint>(r, "quantile");
    require(f.points.size() >= 2, r.field("quantile"), "needs at least two points");
  } else {
    throw ConfigError(r.field("kind"), "unknown frequency kind '" + f.kind + "'");
  }
  r.finish();
  return f;
}

nlohmann::ordered_json measure_json(const MeasureConfig& m) {
  nlohmann::ordered_json j;
  j["kind"] = m.kind;
  if (m.kind == "gamma" || m.kind == "laplace") {
    j["nu"] = m.nu;
    if (m.kind == "gamma") j["form"] = m.form;
  } else if (m.kind == "atoms") {
    j["atoms"] = pairs_json(m.atoms, &Atom::location, &Atom::mass);
  } else if (m.kind == "density") {
    j["points"] = pairs_json(m.points, &DensityPoint::x, &DensityPoint::density);
  } else {
    j["base"] = measure_json(*m.base);
    if (m.kind == "truncated")
      j["level"] = m.level;
    else
      j["factor"] = m.factor;
  }
  return j;
}

nlohmann::ordered_json frequency_json(const FrequencyConfig& f) {
  nlohmann::ordered_json j;
  j["kind"] = f.kind;
  if (f.kind == "uniform") {
    j["a"] = f.lower;
    j["b"] = f.upper;
  } else if (f.kind == "exponential") {
    j["rate"] = f.rate;
  } else if (f.kind == "atoms") {
    j["points"] = pairs_json(f.atoms, &FrequencyAtom::location, &FrequencyAtom::weight);
  } else {
    j["quantile"] = pairs_json(f.points, &QuantilePoint::u, &QuantilePoint::lambda);
  }
  return j;
}

std::vector<double> arange(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  for (std::size_t k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

const std::set<std::string> kMethods{"inverse_levy", "gamma_shotnoise", "conditioned", "discrete", "gaussian_limit"};

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
  RunConfig c;
  Reader top(doc, "");
  if (top.has("model")) {
    Reader r(top.at("model"), "model");
    r.get("sigma0", c.model.sigma0);
    require(c.model.sigma0 > 0.0 && std::isfinite(c.model.sigma0), "model.sigma0", "must be positive");
    if (r.has("measure")) c.model.measure = parse_measure(r.at("measure"), "model.measure");
    if (r.has("freq")) c.model.frequency = parse_frequency(r.at("freq"), "model.freq");
    r.finish();
  }
  if (top.has("generation")) {
    Reader r(top.at("generation"), "generation");
    auto& g = c.generation;
    r.get("method", g.method);
    require(kMethods.count(g.method) > 0, "generation.method", "unknown method '" + g.method + "'");
    if (r.has("truncation")) {
      double level = 0.0;
      r.get("truncation", level);
      require(level > 0.0 && std::isfinite(level), "generation.truncation", "must be positive");
      g.truncation = level;
    }
    r.get("retained", g.retained);
    require(g.retained > 0.0 && g.retained < 1.0, "generation.retained", "must lie in (0,1)");
    r.get("terms", g.terms);
    require(g.terms >= 1, "generation.terms", "must be at least 1");
    r.get("variant", g.variant);
    require(g.variant == "inverse_levy" || g.variant == "gamma_shotnoise", "generation.variant",
            "must be inverse_levy or gamma_shotnoise");
    r.get("subordinator", g.subordinator);
    require(g.subordinator == "deterministic" || g.subordinator == "gamma" || g.subordinator == "levy",
            "generation.subordinator", "must be deterministic, gamma or levy");
    r.get("scale", g.scale);
    require(g.scale > 0.0 && std::isfinite(g.scale), "generation.scale", "must be positive");
    r.get("seed", g.seed);
    r.get("phase_span", g.phase_span);
    require(g.phase_span > 0.0 && g.phase_span <= 2.0 * std::numbers::pi, "generation.phase_span",
            "must lie in (0, 2pi]");
    r.finish();
  }
  if (top.has("grid")) {
    Reader r(top.at("grid"), "grid");
    r.get("t0", c.grid.t0);
    r.get("dt", c.grid.dt);
    r.get("n", c.grid.n);
    require(c.grid.dt > 0.0, "grid.dt", "must be positive");
    require(c.grid.n >= 2, "grid.n", "must be at least 2");
    r.finish();
  }
  if (top.has("analysis")) {
    Reader r(top.at("analysis"), "analysis");
    auto& a = c.analysis;
    a.tau = read_doubles(r, "tau", a.tau);
    for (std::size_t i = 0; i < a.tau.size(); ++i)
      require(a.tau[i] >= 0.0, "analysis.tau[" + std::to_string(i) + "]", "must be non-negative");
    a.u = read_doubles(r, "u", {});
    a.x = read_doubles(r, "x", {});
    r.get("realizations", a.realizations);
    require(a.realizations >= 2, "analysis.realizations", "must be at least 2");
    r.get("horizon", a.horizon);
    require(a.horizon >= 0.0, "analysis.horizon", "must be non-negative");
    r.get("figure_paths", a.figure_paths);
    require(a.figure_paths >= 2, "analysis.figure_paths", "must be at least 2");
    r.get("bins", a.bins);
    require(a.bins >= 2, "analysis.bins", "must be at least 2");
    r.get("jobs", a.jobs);
    r.finish();
  }
  top.finish();
  return c;
}

RunConfig load_config(const std::string& file) {
  const std::string text = read_text(file);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["model"] = {{"sigma0", c.model.sigma0},
                {"measure", measure_json(c.model.measure)},
                {"freq", frequency_json(c.model.frequency)}};
  nlohmann::ordered_json g;
  g["method"] = c.generation.method;
  if (c.generation.truncation) g["truncation"] = *c.generation.truncation;
  g["retained"] = c.generation.retained;
  g["terms"] = c.generation.terms;
  g["variant"] = c.generation.variant;
  g["subordinator"] = c.generation.subordinator;
  g["scale"] = c.generation.scale;
  g["seed"] = c.generation.seed;
  g["phase_span"] = c.generation.phase_span;
  j["generation"] = g;
  j["grid"] = {{"t0", c.grid.t0}, {"dt", c.grid.dt}, {"n", c.grid.n}};
  nlohmann::ordered_json a;
  a["tau"] = c.analysis.tau;
  a["u"] = c.analysis.u;
  a["x"] = c.analysis.x;
  a["realizations"] = c.analysis.realizations;
  a["horizon"] = c.analysis.horizon;
  a["figure_paths"] = c.analysis.figure_paths;
  a["bins"] = c.analysis.bins;
  a["jobs"] = c.analysis.jobs;
  j["analysis"] = a;
  return j;
}

LevyMeasure build_measure(const MeasureConfig& m, double sigma0, const std::string& field) {
  try {
    if (m.kind == "gamma")
      return LevyMeasure::gamma(
          GammaMeasureParams{m.nu, m.form == "literal" ? GammaTailForm::literal : GammaTailForm::scaled_argument});
    if (m.kind == "laplace") return laplace_levy_measure(m.nu, sigma0);
    if (m.kind == "atoms") return LevyMeasure::atoms(m.atoms);
    if (m.kind == "density") return LevyMeasure::density_table(m.points);
    if (m.kind == "truncated") return build_measure(*m.base, sigma0, field + ".base").truncate(m.level);
    if (m.kind == "scaled") return build_measure(*m.base, sigma0, field + ".base").scale(m.factor);
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field + ".kind", "unknown measure kind '" + m.kind + "'");
}

FrequencyDistribution build_frequency(const FrequencyConfig& f, const std::string& field) {
  try {
    if (f.kind == "uniform") return FrequencyDistribution::uniform(f.lower, f.upper);
    if (f.kind == "exponential") return FrequencyDistribution::exponential(f.rate);
    if (f.kind == "atoms") return FrequencyDistribution::atoms(f.atoms);
    if (f.kind == "table") return FrequencyDistribution::table(f.points);
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field + ".kind", "unknown frequency kind '" + f.kind + "'");
}

HarmonizableModel build_model(const RunConfig& c) {
  return {build_measure(c.model.measure, c.model.sigma0),
          SpectralDistribution(c.model.sigma0, build_frequency(c.model.frequency))};
}

namespace {

double gamma_nu(const LevyMeasure& measure, const std::string& why) {
  if (measure.kind() != MeasureKind::gamma || measure.gamma_params().form != GammaTailForm::scaled_argument)
    throw ConfigError("model.measure.kind", why + " needs a gamma (scaled_argument) or laplace measure");
  return measure.gamma_params().nu;
}

}  // namespace

double resolve_truncation(const RunConfig& c, const HarmonizableModel& model) {
  const auto& g = c.generation;
  if (g.truncation) return *g.truncation;
  try {
    if (g.method == "gamma_shotnoise" || (g.method == "conditioned" && g.variant == "gamma_shotnoise"))
      return shotnoise_truncation_level(gamma_nu(model.measure, g.method), g.retained);
    return retained_truncation_level(model.measure, g.retained);
  } catch (const DomainError& e) {
    throw ConfigError("generation.retained", e.what());
  }
}

ExpansionGenerator build_generator(const RunConfig& c) {
  const HarmonizableModel model = build_model(c);
  const auto& g = c.generation;
  const GenerationOptions opts{g.phase_span};
  const GenerationMethod method = generation_method_from_string(g.method);
  switch (method) {
    case GenerationMethod::inverse_levy: {
      const double level = resolve_truncation(c, model);
      return [model, level, opts](std::uint64_t seed) {
        return generate_inverse_levy(model.measure, model.spectrum, level, seed, opts);
      };
    }
    case GenerationMethod::gamma_shotnoise: {
      const double nu = gamma_nu(model.measure, "gamma_shotnoise");
      const double level = resolve_truncation(c, model);
      return [model, nu, level, opts](std::uint64_t seed) {
        return generate_gamma_shotnoise(nu, model.spectrum, level, seed, opts);
      };
    }
    case GenerationMethod::conditioned: {
      const auto variant =
          g.variant == "gamma_shotnoise" ? ConditionedVariant::gamma_shotnoise : ConditionedVariant::inverse_levy;
      if (variant == ConditionedVariant::gamma_shotnoise) gamma_nu(model.measure, "conditioned gamma_shotnoise");
      const double level = resolve_truncation(c, model);
      const std::size_t m = g.terms;
      return [model, m, level, variant, opts](std::uint64_t seed) {
        return generate_conditioned(m, level, model.measure, model.spectrum, seed, variant, opts);
      };
    }
    case GenerationMethod::discrete: {
      if (!model.spectrum.freq.is_discrete())
        throw ConfigError("model.freq.kind", "discrete generation needs an atoms frequency law");
      SubordinatorSampler sampler;
      if (g.subordinator == "deterministic")
        sampler = deterministic_subordinator();
      else if (g.subordinator == "gamma")
        sampler = gamma_subordinator(gamma_nu(model.measure, "gamma subordinator"));
      else
        sampler = levy_subordinator(model.measure, g.retained);
      return [model, sampler, opts](std::uint64_t seed) {
        return generate_discrete(model.spectrum, sampler, seed, opts);
      };
    }
    case GenerationMethod::gaussian_limit: {
      std::optional<double> base;
      if (g.truncation) base = *g.truncation;
      else base = resolve_truncation(c, model);
      const double scale = g.scale;
      return [model, scale, base, opts](std::uint64_t seed) {
        return generate_gaussian_limit(model.measure, model.spectrum, scale, seed, base, opts);
      };
    }
  }
  throw ConfigError("generation.method", "unsupported");
}

void validate(const RunConfig& c) {
  const HarmonizableModel model = build_model(c);
  try {
    check_normalization(model.measure);
  } catch (const DomainError& e) {
    throw ConfigError("model.measure", e.what());
  } catch (const NumericalError& e) {
    throw ConfigError("model.measure", e.what());
  }
  if (!std::isfinite(model.measure.second_moment()))
    throw ConfigError("model.measure", "second moment must be finite");
  build_generator(c);
}

std::vector<double> u_grid(const RunConfig& c) {
  return c.analysis.u.empty() ? arange(-5.0, 5.0, 0.25) : c.analysis.u;
}

std::vector<double> x_grid(const RunConfig& c) {
  return c.analysis.x.empty() ? arange(-6.0, 6.0, 0.05) : c.analysis.x;
}

}  // namespace harmosyn
