#include "harmosyn/random_stream.hpp"

#include <cmath>
#include <numbers>

#include "harmosyn/errors.hpp"

namespace harmosyn {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::mt19937_64 make_engine(std::uint64_t seed, std::string_view label) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ fnv1a(label));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::string_view label)
    : engine_(make_engine(seed, label)), seed_(seed), label_(label) {}

double RandomStream::uniform01() {
  // 53 random bits centred in their cell: never 0, never 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential() { return exponential_from_uniform(uniform01()); }

double RandomStream::rayleigh() { return rayleigh_from_uniform(uniform01()); }

double RandomStream::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double r = rayleigh();
  const double theta = 2.0 * std::numbers::pi * uniform01();
  spare_normal_ = r * std::sin(theta);
  has_spare_normal_ = true;
  return r * std::cos(theta);
}

double RandomStream::phase() {
  const double p = 2.0 * std::numbers::pi * uniform01();
  return p < 2.0 * std::numbers::pi ? p : 0.0;
}

double RandomStream::draw(VariateKind kind) {
  switch (kind) {
    case VariateKind::uniform01: return uniform01();
    case VariateKind::rayleigh: return rayleigh();
    case VariateKind::exponential: return exponential();
    case VariateKind::normal: return normal();
    case VariateKind::phase: return phase();
  }
  return uniform01();
}

double rayleigh_from_uniform(double u) { return std::sqrt(-2.0 * std::log(u)); }

double exponential_from_uniform(double u) { return -std::log(u); }

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) + 0x632be59bd9b4e019ULL * (index + 1));
}

ArrivalSequence poisson_arrivals(RandomStream& stream, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("poisson_arrivals: horizon must be positive");
  ArrivalSequence out;
  double t = stream.exponential();
  while (t <= horizon) {
    out.arrivals.push_back(t);
    t += stream.exponential();
  }
  out.next = t;
  return out;
}

ArrivalSequence arrivals_from_increments(std::span<const double> increments, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("arrivals_from_increments: horizon must be positive");
  ArrivalSequence out;
  double t = 0.0;
  for (double e : increments) {
    if (!(e > 0.0)) throw DomainError("arrivals_from_increments: increments must be positive");
    t += e;
    if (t > horizon) {
      out.next = t;
      return out;
    }
    out.arrivals.push_back(t);
  }
  throw DomainError("arrivals_from_increments: increments end before the horizon");
}

StreamBundle::StreamBundle(std::uint64_t s)
    : seed(s),
      arrivals(s, "gamma"),
      frequency(s, "frequency"),
      amplitude(s, "rayleigh"),
      phase(s, "phase"),
      shot(s, "shot"),
      uniform(s, "uniform"),
      subordinator(s, "subordinator") {}

}  // namespace harmosyn
