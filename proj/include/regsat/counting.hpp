#pragma once

// Exact enumeration of satisfying assignments at desk scale: the count Z, its
// decomposition by clause-pattern histogram, the pair overlap census and the
// agreement statistic of paired pattern arrays.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "regsat/model.hpp"

namespace regsat {

inline constexpr int kDefaultMaxCountN = 28;
inline constexpr std::uint64_t kDefaultMaxPairs = 1'000'000;

struct Evaluation {
  bool satisfied = false;
  std::vector<PatternCode> patterns;  ///< per clause, bit j set iff literal j is true
};

Evaluation evaluate(const Formula& f, const Assignment& tau);

/// Sorted sparse histogram of clause patterns: (code, clause count) pairs with
/// nonzero counts, ascending by code.
using MuKey = std::vector<std::pair<PatternCode, std::int64_t>>;

/// sum_code count * (2 popcount(code) - k); zero iff the key is balanced.
std::int64_t mu_imbalance(const MuKey& key, int k);
/// Euclidean distance between key/m and the tilted law.
double mu_distance(const MuKey& key, int k, std::int64_t m);

struct PatternHistogram {
  int k = 0;
  std::int64_t m = 0;
  std::map<MuKey, std::uint64_t> z_mu;

  std::uint64_t total() const;
  /// Entries whose distance to the tilted law is at most omega / sqrt(m).
  std::vector<std::pair<MuKey, std::uint64_t>> window(double omega) const;
};

struct CountResult {
  std::uint64_t z = 0;
  std::optional<PatternHistogram> histogram;
};

/// Gray-code enumeration of all 2^n assignments. Throws ResourceError when
/// n exceeds max_n (hard ceiling 62).
CountResult count_all(const Formula& f, bool want_histogram = false, int max_n = kDefaultMaxCountN);

/// Satisfying assignments as bit masks (bit v = value of variable v), in Gray
/// order. Throws ResourceError once more than max_z are found.
std::vector<std::uint64_t> satisfying_masks(const Formula& f, std::uint64_t max_z = kDefaultMaxPairs,
                                            int max_n = kDefaultMaxCountN);

struct OverlapCensus {
  /// pairs[alpha] = ordered pairs of satisfying assignments agreeing on alpha variables.
  std::vector<std::uint64_t> pairs;
  std::uint64_t total() const;
};

OverlapCensus overlap_census(const Formula& f, std::uint64_t max_z = kDefaultMaxPairs,
                             int max_n = kDefaultMaxCountN);
OverlapCensus overlap_census(std::span<const std::uint64_t> masks, std::int64_t n);

/// Number of cells (i, j) where both arrays are true.
std::int64_t a_statistic(const PairedPatternArray& paired);

}  // namespace regsat
