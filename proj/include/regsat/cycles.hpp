#pragma once

// Signed short cycles of the clause/variable factor graph.

#include <cstdint>
#include <vector>

#include "regsat/analytic.hpp"
#include "regsat/model.hpp"

namespace regsat {

/// Exact counts C_s for every sign pattern of half-length l <= max_len.
class CycleCensus {
 public:
  static constexpr int kMaxLength = 8;

  explicit CycleCensus(int max_len);

  int max_len() const { return max_len_; }
  std::uint64_t count(const SignPattern& s) const { return counts_[s.half_length()][s.index()]; }
  std::uint64_t& at(int l, std::uint32_t bits) { return counts_[l][bits]; }
  std::uint64_t at(int l, std::uint32_t bits) const { return counts_[l][bits]; }
  /// Counts of half-length l indexed by pattern bits.
  const std::vector<std::uint64_t>& level(int l) const { return counts_[l]; }
  std::uint64_t total(int l) const;

  CycleCensus& operator+=(const CycleCensus& other);
  friend bool operator==(const CycleCensus&, const CycleCensus&) = default;

 private:
  int max_len_;
  std::vector<std::vector<std::uint64_t>> counts_;  // [l][bits], l = 0 unused
};

enum class Orientation {
  Canonical,  ///< exit slot of the start clause precedes its re-entry slot
  Both,       ///< both traversal directions (every cycle counted twice)
};

/// Depth-first census from each start clause through the inverse slot map.
/// Requires 1 <= L <= 8. Parallel over start clauses; result independent of
/// the worker count.
CycleCensus cycle_census(const Formula& f, int L, int workers = 1,
                         Orientation orientation = Orientation::Canonical);

/// Brute force over clause/slot sequences, checking the cycle conditions
/// literally. Requires L <= 4 and m*k <= 2000 (ResourceError otherwise).
CycleCensus cycle_census_oracle(const Formula& f, int L);

/// U = sum_{l <= ell} sum_s [C_s ln(1+delta_s) - lambda_s delta_s].
/// Throws DomainError when ell exceeds the census or the rate table.
double u_statistic(const CycleCensus& census, const RateTable& rates, int ell);

struct ISCount {
  std::uint64_t enumerated;
  double printed_form;  ///< (k(k-1))^{2l} d^l prod_h (d-1 or d)
  double corrected_form;  ///< same with exponent l on k(k-1)
  bool matches_printed;
  bool matches_corrected;
};

/// Exhaustive count of the walk encodings (j_h, g_h) of pattern s. Requires
/// k*d <= 64, l <= 3 and (kd)^{2l} <= 1e9.
ISCount i_s_enumerate(int k, int d, const SignPattern& s);

}  // namespace regsat
