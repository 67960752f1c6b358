#include "harmosyn/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "harmosyn/errors.hpp"

namespace harmosyn {

void RunningMoments::add(double x) {
  RunningMoments one;
  one.n_ = 1;
  one.mean_ = x;
  merge(one);
}

// Pairwise update of central moment sums (Pebay 2008).
void RunningMoments::merge(const RunningMoments& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double d = o.mean_ - mean_;
  const double d2 = d * d;
  const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + o.m3_ + d * d2 * na * nb * (na - nb) / (n * n) +
                    3.0 * d * (na * o.m2_ - nb * m2_) / n;
  const double m4 = m4_ + o.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * d * (na * o.m3_ - nb * m3_) / n;
  n_ += o.n_;
  mean_ += d * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
}

double RunningMoments::variance() const { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

double RunningMoments::standard_error() const {
  return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double RunningMoments::excess_kurtosis() const {
  if (n_ < 2 || m2_ <= 0.0) return 0.0;
  return static_cast<double>(n_) * m4_ / (m2_ * m2_) - 3.0;
}

RunningMoments summarize(std::span<const double> values) {
  RunningMoments acc;
  for (double v : values) acc.add(v);
  return acc;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    // Small argument: 1 - sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2 / (8 x^2)).
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double term = std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * c);
      cdf += term;
      if (term < 1e-17 * cdf) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

TestResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_one_sample: no samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return {d, ks_p_value(d, n), 0.0};
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb)), 0.0};
}

double chi_square_quantile(double dof, double p) {
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), p);
}

double chi_square_survival(double dof, double x) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof), x));
}

TestResult pearson_chi_square(std::span<const double> counts, std::span<const double> probabilities) {
  if (counts.size() != probabilities.size() || counts.size() < 2)
    throw DomainError("pearson_chi_square: need at least two bins with matching probabilities");
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) throw DomainError("pearson_chi_square: no counts");
  double stat = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (!(probabilities[k] > 0.0)) throw DomainError("pearson_chi_square: bin probabilities must be positive");
    const double expected = total * probabilities[k];
    stat += (counts[k] - expected) * (counts[k] - expected) / expected;
  }
  const double dof = static_cast<double>(counts.size() - 1);
  return {stat, chi_square_survival(dof, stat), dof};
}

ClusteredChiSquare rao_scott_chi_square(const std::vector<std::vector<double>>& cluster_counts,
                                        std::span<const double> probabilities) {
  const std::size_t clusters = cluster_counts.size();
  const std::size_t bins = probabilities.size();
  if (clusters < 2) throw DomainError("rao_scott_chi_square: need at least two clusters");
  std::vector<double> pooled(bins, 0.0);
  std::vector<double> sizes(clusters, 0.0);
  for (std::size_t c = 0; c < clusters; ++c) {
    if (cluster_counts[c].size() != bins) throw DomainError("rao_scott_chi_square: ragged cluster counts");
    for (std::size_t b = 0; b < bins; ++b) {
      pooled[b] += cluster_counts[c][b];
      sizes[c] += cluster_counts[c][b];
    }
  }
  ClusteredChiSquare out;
  out.naive = pearson_chi_square(pooled, probabilities);
  double total = 0.0;
  for (double s : sizes) total += s;

  // Ratio-estimator covariance of the pooled bin proportions across clusters.
  const double mean_size = total / static_cast<double>(clusters);
  const double kc = static_cast<double>(clusters);
  const std::size_t k1 = bins - 1;  // the last proportion is redundant
  std::vector<double> resid(clusters * k1);
  for (std::size_t c = 0; c < clusters; ++c)
    for (std::size_t b = 0; b < k1; ++b) resid[c * k1 + b] = cluster_counts[c][b] - pooled[b] / total * sizes[c];
  std::vector<double> cov(k1 * k1, 0.0);
  const double scale = 1.0 / (kc * (kc - 1.0) * mean_size * mean_size);
  for (std::size_t a = 0; a < k1; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double sum = 0.0;
      for (std::size_t c = 0; c < clusters; ++c) sum += resid[c * k1 + a] * resid[c * k1 + b];
      cov[a * k1 + b] = cov[b * k1 + a] = sum * scale;
    }

  // Design matrix D = N P^{-1} V with P the multinomial covariance, whose
  // inverse is diag(1/pi) + 1 1^T / pi_K. Only tr D and tr D^2 are needed.
  const double last = probabilities[k1];
  std::vector<double> column_sum(k1, 0.0);
  for (std::size_t a = 0; a < k1; ++a)
    for (std::size_t b = 0; b < k1; ++b) column_sum[b] += cov[a * k1 + b];
  std::vector<double> design(k1 * k1);
  for (std::size_t a = 0; a < k1; ++a)
    for (std::size_t b = 0; b < k1; ++b)
      design[a * k1 + b] = total * (cov[a * k1 + b] / probabilities[a] + column_sum[b] / last);
  double trace = 0.0;
  double trace_sq = 0.0;
  for (std::size_t a = 0; a < k1; ++a) {
    trace += design[a * k1 + a];
    for (std::size_t b = 0; b < k1; ++b) trace_sq += design[a * k1 + b] * design[b * k1 + a];
  }
  const double dim = static_cast<double>(k1);
  const double delta = trace / dim;
  const double cv2 = delta > 0.0 ? std::max(0.0, trace_sq / dim / (delta * delta) - 1.0) : 0.0;
  out.design_effect = delta;
  out.design_effect_cv2 = cv2;

  out.first_order.dof = dim;
  out.first_order.statistic = delta > 0.0 ? out.naive.statistic / delta : 0.0;
  out.first_order.p_value = chi_square_survival(dim, out.first_order.statistic);
  out.corrected.dof = dim / (1.0 + cv2);
  out.corrected.statistic = out.first_order.statistic / (1.0 + cv2);
  out.corrected.p_value = chi_square_survival(out.corrected.dof, out.corrected.statistic);
  return out;
}

std::vector<double> histogram(std::span<const double> samples, std::span<const double> edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
    throw DomainError("histogram: need at least two increasing edges");
  std::vector<double> counts(edges.size() - 1, 0.0);
  for (double x : samples) {
    if (x < edges.front() || x > edges.back()) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t k = static_cast<std::size_t>(it - edges.begin());
    k = k == 0 ? 0 : k - 1;
    counts[std::min(k, counts.size() - 1)] += 1.0;
  }
  return counts;
}

std::vector<std::complex<double>> empirical_cf(std::span<const double> samples, std::span<const double> u) {
  if (samples.empty()) throw DomainError("empirical_cf: no samples");
  std::vector<std::complex<double>> out(u.size());
  const double n = static_cast<double>(samples.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    double re = 0.0;
    double im = 0.0;
    for (double x : samples) {
      re += std::cos(u[k] * x);
      im += std::sin(u[k] * x);
    }
    out[k] = {re / n, im / n};
  }
  return out;
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = default_jobs();
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace harmosyn
