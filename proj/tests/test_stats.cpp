#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "regsat/errors.hpp"
#include "regsat/stats.hpp"

using namespace regsat;
using doctest::Approx;

TEST_CASE("poisson_gof on exact and gross inputs") {
  const double rate = 2.0;
  std::vector<std::int64_t> exact;
  for (int c = 0; c < 15; ++c) {
    exact.push_back(std::llround(1e6 * std::exp(-rate + c * std::log(rate) - std::lgamma(c + 1.0))));
  }
  const GofResult good = poisson_gof(exact, rate);
  // only integer rounding of the counts remains
  CHECK(good.chi_sq < 5e-2);
  CHECK(good.p > 0.99);
  CHECK(good.dof == good.bins - 1);

  const std::vector<std::int64_t> all_zero{1000};
  const GofResult bad = poisson_gof(all_zero, 5.0);
  CHECK(bad.p < 1e-10);
  CHECK(bad.p >= kPValueFloor);

  CHECK_THROWS_AS(poisson_gof(std::vector<std::int64_t>{50, 30}, 1.0), DomainError);
  CHECK_THROWS_AS(poisson_gof(exact, 0.0), DomainError);
}

TEST_CASE("poisson_gof bins expect at least five") {
  // rate 0.5 with N = 100: cells 0 and 1 expect 60.7 and 30.3, the tail is merged
  std::vector<std::int64_t> obs{61, 30, 8, 1};
  const GofResult g = poisson_gof(obs, 0.5);
  CHECK(g.bins == 3);
  CHECK(g.dof == 2);
}

TEST_CASE("poisson sampler against its pmf") {
  Rng rng(41);
  for (double rate : {0.05, 0.5, 1.0, 3.0, 8.0}) {
    std::vector<std::int64_t> hist;
    for (int i = 0; i < 10000; ++i) {
      const auto x = static_cast<std::size_t>(sample_poisson(rate, rng));
      if (hist.size() <= x) hist.resize(x + 1, 0);
      hist[x]++;
    }
    CHECK(poisson_gof(hist, rate).p >= 1e-3);
  }
  CHECK(sample_poisson(0.0, rng) == 0);
  CHECK_THROWS_AS(sample_poisson(-1.0, rng), DomainError);
}

TEST_CASE("factorial moments") {
  const std::vector<double> constant(50, 4.0);
  CHECK(factorial_moment(constant, 1).value == 4.0);
  CHECK(factorial_moment(constant, 2).value == 12.0);
  CHECK(factorial_moment(constant, 3).value == 24.0);
  CHECK(factorial_moment(constant, 3).se == 0.0);
  const std::vector<double> xs{1, 2, 3, 4, 5};
  CHECK(factorial_moment(xs, 1).value == 3.0);
  // the jackknife SE of a mean is the usual SE
  CHECK(factorial_moment(xs, 1).se == Approx(std::sqrt(2.5 / 5)).epsilon(1e-12));
  CHECK_THROWS_AS(factorial_moment(xs, 4), DomainError);

  Rng rng(42);
  const double rate = 1.3;
  std::vector<double> draws(100000);
  for (auto& x : draws) x = double(sample_poisson(rate, rng));
  for (int r = 1; r <= 3; ++r) {
    const Estimate e = factorial_moment(draws, r);
    CHECK(std::abs(e.value - std::pow(rate, r)) <= 4 * e.se);
  }
  const MomentReport m = moment_report(draws);
  CHECK(m.standard_error == Approx(std::sqrt(m.variance / m.sample_count)));
  CHECK(m.variance >= 0.0);
  CHECK(m.factorial.size() == 3);
}

TEST_CASE("W sampler") {
  const RateTable rates(3, 2, 3);
  // with every count zero W_1 = exp(-sum lambda delta)
  CHECK(std::exp(u_statistic(CycleCensus(1), rates, 1)) == Approx(0.7897269884419300).epsilon(1e-12));

  Rng rng(43);
  constexpr int kDraws = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double w = sample_w(rates, 1, rng);
    sum += w;
    sum2 += w * w;
  }
  const double mean = sum / kDraws;
  const double se = std::sqrt((sum2 / kDraws - mean * mean) / kDraws);
  CHECK(std::abs(mean - 1.0) <= 3 * se);
}

TEST_CASE("poisson censuses") {
  const RateTable rates(3, 2, 2);
  Rng rng(44);
  std::vector<double> sum(4, 0.0);
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) {
    const CycleCensus c = sample_poisson_census(rates, 1, rng);
    for (std::uint32_t b = 0; b < 4; ++b) sum[b] += double(c.at(1, b));
  }
  for (std::uint32_t b = 0; b < 4; ++b) {
    const double lambda = rates.lambda(SignPattern(1, b));
    CHECK(std::abs(sum[b] / kDraws - lambda) <= 4 * std::sqrt(lambda / kDraws));
  }
}

TEST_CASE("two-sample KS") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_statistic({0, 0, 1, 1}, {0, 1, 1, 1}) == Approx(0.25));
  CHECK(ks_critical_value(0.001, 100000, 100000) == Approx(1.9495 * std::sqrt(2.0 / 100000)).epsilon(1e-3));
  Rng rng(45);
  std::normal_distribution<double> g;
  std::vector<double> a(20000), b(20000);
  for (auto& x : a) x = g(rng);
  for (auto& x : b) x = g(rng);
  CHECK(ks_statistic(a, b) < ks_critical_value(0.001, 20000, 20000));
  for (auto& x : b) x += 0.2;
  CHECK(ks_statistic(a, b) > ks_critical_value(0.001, 20000, 20000));
}
