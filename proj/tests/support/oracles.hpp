#pragma once

// Independent reference implementations used only by the tests.

#include <cstdint>
#include <map>
#include <vector>

#include "regsat/counting.hpp"
#include "regsat/model.hpp"

namespace regsat::testing {

struct NaiveCount {
  std::uint64_t z = 0;
  std::map<MuKey, std::uint64_t> z_mu;
};

/// Evaluates every assignment from scratch in binary order.
NaiveCount naive_count(const Formula& f);

/// Random valid parameters with n in [n_lo, n_hi], d in [1, d_hi], k in [3, k_hi].
ModelParams random_params(Rng& rng, std::int64_t n_lo, std::int64_t n_hi, std::int64_t d_hi, std::int64_t k_hi);

/// Formula from a clause list of signed 1-based variables; copy indices are
/// assigned in order of occurrence.
Formula formula_from_clauses(std::int64_t n, std::int64_t d, const std::vector<std::vector<int>>& clauses);

}  // namespace regsat::testing
