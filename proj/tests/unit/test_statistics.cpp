#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "harmosyn/errors.hpp"
#include "harmosyn/random_stream.hpp"
#include "harmosyn/statistics.hpp"

using namespace harmosyn;
using doctest::Approx;

TEST_CASE("running moments") {
  const std::vector<double> x{1.0, 2.0, 4.0, 7.0, 11.0, 3.0};
  const RunningMoments m = summarize(x);
  CHECK(m.count() == 6);
  CHECK(m.mean() == Approx(28.0 / 6.0));
  double ss = 0.0;
  double s4 = 0.0;
  for (double v : x) {
    ss += (v - m.mean()) * (v - m.mean());
    s4 += std::pow(v - m.mean(), 4);
  }
  CHECK(m.variance() == Approx(ss / 5.0));
  CHECK(m.excess_kurtosis() == Approx(6.0 * s4 / (ss * ss) - 3.0));

  RunningMoments a = summarize(std::span(x).first(2));
  const RunningMoments b = summarize(std::span(x).subspan(2));
  a.merge(b);
  CHECK(a.mean() == Approx(m.mean()));
  CHECK(a.variance() == Approx(m.variance()));
  CHECK(a.excess_kurtosis() == Approx(m.excess_kurtosis()));
}

TEST_CASE("Kolmogorov survival function") {
  // Frozen from an independent implementation.
  CHECK(kolmogorov_survival(1.0) == Approx(0.26999967167735456).epsilon(1e-10));
  CHECK(kolmogorov_survival(0.5) == Approx(0.9639452436648751).epsilon(1e-10));
  CHECK(kolmogorov_survival(0.3) == Approx(0.9999906941986655).epsilon(1e-10));
  CHECK(kolmogorov_survival(2.0) == Approx(0.0006709252557796953).epsilon(1e-8));
  CHECK(kolmogorov_survival(0.0) == 1.0);
}

TEST_CASE("KS statistics") {
  const std::vector<double> u{0.1, 0.3, 0.35, 0.8, 0.95};
  CHECK(ks_one_sample(u, [](double x) { return std::clamp(x, 0.0, 1.0); }).statistic == Approx(0.25));
  const std::vector<double> a{0.1, 0.4, 0.7, 1.3, 2.2};
  const std::vector<double> b{0.2, 0.25, 0.5, 0.9, 3.0, 3.1};
  CHECK(ks_two_sample(a, b).statistic == Approx(1.0 / 3.0));
  CHECK(ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("KS rejects a shifted sample") {
  RandomStream s(1, "normal");
  std::vector<double> x(2000);
  std::vector<double> y(2000);
  for (auto& v : x) v = s.normal();
  for (auto& v : y) v = s.normal() + 0.2;
  CHECK(ks_two_sample(x, y).rejected(0.01));
}

TEST_CASE("chi-square") {
  CHECK(chi_square_quantile(19.0, 0.99) == Approx(36.19086912927004).epsilon(1e-10));
  CHECK(chi_square_survival(19.0, 30.0) == Approx(0.05179845889302389).epsilon(1e-10));
  const std::vector<double> counts{10.0, 20.0, 30.0, 40.0};
  const std::vector<double> p{0.25, 0.25, 0.25, 0.25};
  const TestResult r = pearson_chi_square(counts, p);
  CHECK(r.statistic == Approx(20.0));
  CHECK(r.dof == 3.0);
  CHECK_THROWS_AS(pearson_chi_square(counts, std::vector<double>{0.5, 0.5}), DomainError);
}

TEST_CASE("Rao-Scott correction with independent clusters keeps the design effect near 1") {
  RandomStream s(9, "uniform");
  const std::vector<double> p(10, 0.1);
  std::vector<std::vector<double>> clusters(200, std::vector<double>(10, 0.0));
  for (auto& c : clusters)
    for (int k = 0; k < 100; ++k) c[static_cast<std::size_t>(s.uniform01() * 10.0)] += 1.0;
  const ClusteredChiSquare r = rao_scott_chi_square(clusters, p);
  CHECK(r.design_effect == Approx(1.0).epsilon(0.15));
  CHECK(r.design_effect_cv2 < 0.2);
  CHECK(r.corrected.p_value > 0.01);
}

TEST_CASE("Rao-Scott correction deflates clustered counts") {
  // Each cluster puts all its draws into one random bin: design effect ~ cluster size.
  RandomStream s(10, "uniform");
  const std::vector<double> p(5, 0.2);
  std::vector<std::vector<double>> clusters(400, std::vector<double>(5, 0.0));
  for (auto& c : clusters) c[static_cast<std::size_t>(s.uniform01() * 5.0)] = 50.0;
  const ClusteredChiSquare r = rao_scott_chi_square(clusters, p);
  CHECK(r.design_effect == Approx(50.0).epsilon(0.2));
  CHECK(r.naive.p_value < 1e-6);
  CHECK(r.corrected.p_value > 0.001);
}

TEST_CASE("histogram") {
  const std::vector<double> edges{-1.0, 0.0, 1.0, 2.0};
  const std::vector<double> x{-2.0, -0.5, 0.0, 0.3, 1.0, 2.0, 2.5};
  const auto h = histogram(x, edges);
  CHECK(h == std::vector<double>{1.0, 2.0, 2.0});
  const std::vector<double> open{-INFINITY, 0.0, INFINITY};
  CHECK(histogram(x, open) == std::vector<double>{2.0, 5.0});
}

TEST_CASE("empirical characteristic function") {
  const std::vector<double> x{-1.0, 1.0, 2.0, -2.0};
  const std::vector<double> u{0.0, 0.5};
  const auto c = empirical_cf(x, u);
  CHECK(c[0].real() == 1.0);
  CHECK(c[1].real() == Approx(0.5 * (std::cos(0.5) + std::cos(1.0))));
  CHECK(std::abs(c[1].imag()) < 1e-15);
}

TEST_CASE("parallel_for runs every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  std::vector<int> serial(50, 0);
  parallel_for(serial.size(), 1, [&](std::size_t i) { serial[i] = static_cast<int>(i); });
  CHECK(serial[49] == 49);
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 42) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  CHECK(default_jobs() >= 1);
}
