#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace harmosyn {

/// Streaming central moments up to order four. Two accumulators merge
/// exactly, so partial results from workers can be combined in any grouping.
class RunningMoments {
 public:
  void add(double x);
  void merge(const RunningMoments& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased (n-1) sample variance; 0 for fewer than two samples.
  double variance() const;
  double standard_error() const;
  /// m4 / m2^2 - 3 with population central moments.
  double excess_kurtosis() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

RunningMoments summarize(std::span<const double> values);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double dof = 0.0;  // chi-square tests only
  bool rejected(double alpha) const { return p_value < alpha; }
};

/// P(K > x) for the Kolmogorov distribution.
double kolmogorov_survival(double x);

/// One-sample Kolmogorov-Smirnov test against a continuous cdf.
/// The p-value uses Stephens' effective-size correction.
TestResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

double chi_square_quantile(double dof, double p);
double chi_square_survival(double dof, double x);

/// Pearson goodness of fit of bin counts against bin probabilities (which
/// must sum to 1). dof = bins - 1.
TestResult pearson_chi_square(std::span<const double> counts, std::span<const double> probabilities);

struct ClusteredChiSquare {
  TestResult naive;         // Pearson on the pooled counts, as if all draws were independent
  TestResult first_order;   // Pearson divided by the mean design effect
  TestResult corrected;     // second-order (Satterthwaite) Rao-Scott
  double design_effect = 1.0;  // mean generalized design effect
  double design_effect_cv2 = 0.0;  // squared coefficient of variation of the design effects
};

/// Goodness of fit for pooled counts from independent clusters of dependent
/// draws. cluster_counts[c][b] is the count of cluster c in bin b. The
/// covariance of the pooled bin proportions is estimated from the spread
/// between clusters; the Pearson statistic is rescaled by the mean design
/// effect and its degrees of freedom reduced by the spread of the design
/// effects.
ClusteredChiSquare rao_scott_chi_square(const std::vector<std::vector<double>>& cluster_counts,
                                        std::span<const double> probabilities);

/// Counts in [edges[k], edges[k+1]); the last bin is closed. Values outside
/// the edges are ignored.
std::vector<double> histogram(std::span<const double> samples, std::span<const double> edges);

/// (1/n) sum_j exp(i u x_j) at every u.
std::vector<std::complex<double>> empirical_cf(std::span<const double> samples, std::span<const double> u);

/// Number of workers used when a caller passes jobs = 0.
unsigned default_jobs();

/// Calls body(i) for i in [0, n) on up to `jobs` threads. Each index runs
/// exactly once; results written to per-index slots are independent of the
/// thread count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

}  // namespace harmosyn
