#include "regsat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "regsat/errors.hpp"

namespace regsat {

GofResult poisson_gof(std::span<const std::int64_t> observed, double rate) {
  if (!(rate > 0.0)) throw DomainError("Poisson rate must be positive");
  const std::int64_t total = std::accumulate(observed.begin(), observed.end(), std::int64_t{0});
  if (total < 100) throw DomainError("goodness of fit needs at least 100 observations");
  const double n = double(total);

  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double cdf = 0.0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double pmf = std::exp(-rate + double(c) * std::log(rate) - std::lgamma(double(c) + 1.0));
    cdf += pmf;
    cells.emplace_back(double(observed[c]), n * pmf);
  }
  cells.emplace_back(0.0, n * std::max(0.0, 1.0 - cdf));

  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> open{0.0, 0.0};
  for (const auto& cell : cells) {
    open.first += cell.first;
    open.second += cell.second;
    if (open.second >= 5.0) {
      bins.push_back(open);
      open = {0.0, 0.0};
    }
  }
  if (open.first > 0.0 || open.second > 0.0) {
    if (bins.empty()) {
      bins.push_back(open);
    } else {
      bins.back().first += open.first;
      bins.back().second += open.second;
    }
  }

  GofResult out;
  out.bins = static_cast<int>(bins.size());
  for (const auto& [o, e] : bins) out.chi_sq += (o - e) * (o - e) / e;
  out.dof = out.bins - 1;
  out.p = out.dof > 0 ? boost::math::gamma_q(out.dof / 2.0, out.chi_sq / 2.0) : 1.0;
  out.p = std::max(out.p, kPValueFloor);
  return out;
}

namespace {

double falling(double x, int r) {
  double v = 1.0;
  for (int i = 0; i < r; ++i) v *= x - i;
  return v;
}

}  // namespace

Estimate factorial_moment(std::span<const double> samples, int r) {
  if (r < 1 || r > 3) throw DomainError("factorial moment order must be 1, 2 or 3");
  if (samples.empty()) throw DomainError("factorial moment of an empty sample");
  const std::size_t n = samples.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = falling(samples[i], r);
  const double sum = std::accumulate(y.begin(), y.end(), 0.0);
  Estimate out{sum / double(n), 0.0};
  if (n < 2) return out;
  // Jackknife over leave-one-out means.
  double mean_loo = 0.0;
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    loo[i] = (sum - y[i]) / double(n - 1);
    mean_loo += loo[i];
  }
  mean_loo /= double(n);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
  out.se = std::sqrt(double(n - 1) / double(n) * ss);
  return out;
}

MomentReport moment_report(std::span<const double> samples) {
  MomentReport out;
  out.sample_count = static_cast<std::int64_t>(samples.size());
  if (samples.empty()) return out;
  const double n = double(samples.size());
  out.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - out.mean) * (x - out.mean);
  out.variance = samples.size() > 1 ? ss / (n - 1.0) : 0.0;
  out.standard_error = std::sqrt(out.variance / n);
  for (int r = 1; r <= 3; ++r) out.factorial.push_back(factorial_moment(samples, r));
  return out;
}

std::int64_t sample_poisson(double rate, Rng& rng) {
  if (!(rate >= 0.0) || rate > 700.0) throw DomainError("Poisson inversion needs 0 <= rate <= 700");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double p = std::exp(-rate);
  double cdf = p;
  std::int64_t x = 0;
  while (u > cdf) {
    ++x;
    p *= rate / double(x);
    if (p == 0.0 && cdf < u) break;  // u beyond the representable tail
    cdf += p;
  }
  return x;
}

CycleCensus sample_poisson_census(const RateTable& rates, int ell, Rng& rng) {
  if (ell > rates.max_len()) throw DomainError("rate table shorter than ell");
  CycleCensus out(ell);
  for (int l = 1; l <= ell; ++l) {
    for (std::uint32_t b = 0; b < (std::uint32_t{1} << (2 * l)); ++b) {
      out.at(l, b) = static_cast<std::uint64_t>(sample_poisson(rates.lambda(SignPattern(l, b)), rng));
    }
  }
  return out;
}

double sample_w(const RateTable& rates, int ell, Rng& rng) {
  if (ell > rates.max_len()) throw DomainError("rate table shorter than ell");
  double log_w = 0.0;
  for (int l = 1; l <= ell; ++l) {
    for (std::uint32_t b = 0; b < (std::uint32_t{1} << (2 * l)); ++b) {
      const SignPattern s(l, b);
      const double lambda = rates.lambda(s), delta = rates.delta(s);
      log_w += double(sample_poisson(lambda, rng)) * std::log1p(delta) - lambda * delta;
    }
  }
  return std::exp(log_w);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    best = std::max(best, std::abs(double(i) / na - double(j) / nb));
  }
  return best;
}

double ks_critical_value(double alpha, std::int64_t n, std::int64_t m) {
  if (!(alpha > 0.0 && alpha < 1.0) || n < 1 || m < 1) throw DomainError("invalid KS critical value request");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  return c * std::sqrt(double(n + m) / (double(n) * double(m)));
}

}  // namespace regsat
