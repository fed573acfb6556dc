#pragma once

#include <cstdint>

namespace regsat {

/// Size parameters of a random regular k-SAT formula.
///
/// Every variable occurs exactly d times positively and d times negatively,
/// so there are 2dn literal occurrences and m = 2dn/k clauses of width k.
class ModelParams {
 public:
  /// Throws DomainError unless k >= 2, d >= 1, n >= k and k | 2dn.
  ModelParams(std::int64_t n, std::int64_t d, std::int64_t k);

  std::int64_t n() const { return n_; }
  std::int64_t d() const { return d_; }
  std::int64_t k() const { return k_; }
  std::int64_t m() const { return m_; }

  /// Total number of clause slots (= number of literal clones) km = 2dn.
  std::int64_t slots() const { return m_ * k_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  std::int64_t n_;
  std::int64_t d_;
  std::int64_t k_;
  std::int64_t m_;
};

}  // namespace regsat
