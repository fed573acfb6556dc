#pragma once

// Monte Carlo campaigns comparing sampled statistics with their predicted
// limits. Each campaign returns a Report whose checks carry the pass/fail
// verdicts; replicate r always draws from make_stream(seed, r).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regsat/params.hpp"

namespace regsat {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Report {
  std::string experiment;
  std::string claim;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::vector<Check> checks;
  /// Per-replicate statistics (statistic name -> values by replicate index).
  std::map<std::string, std::vector<double>> series;
  double wall_clock_s = 0.0;

  bool passed() const;
  /// First failing check, if any.
  const Check* first_failure() const;
};

/// Version string fixed at configure time.
std::string version_string();

/// Report as the versioned JSON document; the "timing" object is the only
/// part that varies between identical runs.
nlohmann::json report_json(const Report& r, bool with_timing = true);
/// One row per (replicate, statistic).
std::string report_csv(const Report& r);

struct CampaignOptions {
  std::int64_t reps = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  int max_n = 28;  ///< exact-counting cap
};

/// Ensemble mean of Z against the closed-form first moment; the exact
/// finite-n mean is reported alongside.
Report run_first_moment(const ModelParams& params, const CampaignOptions& opt);

/// Cycle census means, Poisson fit and second factorial moments. With
/// planted = true the formulas come from the planted model and the targets
/// are (1+delta_s) lambda_s.
Report run_cycle_poisson(const ModelParams& params, int max_len, bool planted, const CampaignOptions& opt);

/// Moments of W_ell and the two-route distributional check.
Report run_w_moments(int k, int d, int ell, std::int64_t draws, std::uint64_t seed, int workers);

/// Agreement statistic of paired pattern arrays at the rounded tilted law.
Report run_a_stat(int k, std::int64_t m, std::int64_t draws, std::uint64_t seed, int workers);

/// E[Z^2]/E[Z]^2 over uniform formulas; checked against [1, 1.45] and, when
/// limit_tolerance is given, against the predicted limit.
Report run_second_moment(const ModelParams& params, const CampaignOptions& opt,
                         std::optional<double> limit_tolerance);

/// f, g and H on a grid of rho11, the stationarity check at the product point
/// and the stationary points of g.
Report run_overlap(int k, int d, const std::vector<double>& rho_grid);

}  // namespace regsat
