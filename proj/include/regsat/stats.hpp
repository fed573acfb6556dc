#pragma once

// Estimators, goodness-of-fit tests and the sampler of the limit variable W.

#include <cstdint>
#include <span>
#include <vector>

#include "regsat/analytic.hpp"
#include "regsat/cycles.hpp"
#include "regsat/rng.hpp"

namespace regsat {

inline constexpr double kPValueFloor = 1e-15;

struct GofResult {
  double chi_sq = 0.0;
  int dof = 0;
  double p = 1.0;  ///< floored at kPValueFloor
  int bins = 0;
};

/// Chi-square test of a value histogram (observed[c] = #samples equal to c)
/// against Poisson(rate). Cells are merged until each expects at least 5.
/// Throws DomainError with fewer than 100 observations.
GofResult poisson_gof(std::span<const std::int64_t> observed, double rate);

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Mean of x(x-1)...(x-r+1) with a jackknife standard error, 1 <= r <= 3.
Estimate factorial_moment(std::span<const double> samples, int r);

struct MomentReport {
  std::int64_t sample_count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double standard_error = 0.0;
  std::vector<Estimate> factorial;  ///< orders 1..3
};

MomentReport moment_report(std::span<const double> samples);

/// Poisson variate by sequential inversion.
std::int64_t sample_poisson(double rate, Rng& rng);

/// Census of independent Poisson(lambda_s) counts for all patterns with l <= ell.
CycleCensus sample_poisson_census(const RateTable& rates, int ell, Rng& rng);

/// prod_s (1+delta_s)^{Lambda_s} exp(-lambda_s delta_s) over all patterns with
/// l <= ell, Lambda_s independent Poisson(lambda_s).
double sample_w(const RateTable& rates, int ell, Rng& rng);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| (ties handled).
double ks_statistic(std::vector<double> a, std::vector<double> b);
/// Asymptotic critical value c(alpha) sqrt((n+m)/(nm)).
double ks_critical_value(double alpha, std::int64_t n, std::int64_t m);

}  // namespace regsat
