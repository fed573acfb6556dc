#pragma once

// Random regular k-SAT formulas in the bijection (configuration) model, the
// planted formula/assignment pair, and paired clause-pattern arrays.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regsat/analytic.hpp"
#include "regsat/params.hpp"
#include "regsat/rng.hpp"

namespace regsat {

/// Image of one clause slot: variable, copy index and sign (all 0-based
/// except sign, which is +1 or -1).
struct Literal {
  std::int32_t var = 0;
  std::int32_t copy = 0;
  std::int32_t sign = 1;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Dense id of the literal clone (var, copy, sign) in [0, 2dn).
inline std::int64_t clone_id(const Literal& lit, std::int64_t d) {
  return std::int64_t{lit.var} * 2 * d + (lit.sign > 0 ? 0 : d) + lit.copy;
}

/// Bijection from the m*k clause slots onto the 2dn literal clones, with its
/// inverse. Slot (i, j) is stored at index i*k + j.
class Formula {
 public:
  /// Throws FormatError (listing the first violations) unless `slots` is a
  /// bijection onto the clone set of `params`.
  Formula(const ModelParams& params, std::vector<Literal> slots);

  const ModelParams& params() const { return params_; }
  std::span<const Literal> slots() const { return slots_; }
  const Literal& slot(std::int64_t clause, int pos) const { return slots_[clause * params_.k() + pos]; }
  std::span<const Literal> clause(std::int64_t i) const {
    return std::span<const Literal>(slots_).subspan(i * params_.k(), params_.k());
  }
  /// Slot index holding clone (var, copy, sign).
  std::int64_t slot_of(std::int32_t var, std::int32_t copy, std::int32_t sign) const;
  /// The 2d slot indices of a variable: positive copies first, then negative.
  std::span<const std::int64_t> occurrences(std::int32_t var) const {
    return std::span<const std::int64_t>(inverse_).subspan(std::size_t(var) * 2 * params_.d(),
                                                           2 * params_.d());
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.params_ == b.params_ && a.slots_ == b.slots_;
  }

 private:
  ModelParams params_;
  std::vector<Literal> slots_;
  std::vector<std::int64_t> inverse_;  // clone id -> slot index
};

/// Truth assignment; bit 1 is true (+1), bit 0 is false (-1).
class Assignment {
 public:
  explicit Assignment(std::vector<std::uint8_t> bits);
  static Assignment all_false(std::int64_t n) { return Assignment(std::vector<std::uint8_t>(n, 0)); }
  static Assignment from_mask(std::uint64_t mask, std::int64_t n);
  static Assignment random(std::int64_t n, Rng& rng);

  std::int64_t size() const { return static_cast<std::int64_t>(bits_.size()); }
  int value(std::int64_t var) const { return bits_[var] ? 1 : -1; }
  bool bit(std::int64_t var) const { return bits_[var] != 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Truth value sign(i,j) * tau(var(i,j)) of a literal under an assignment.
inline int literal_value(const Literal& lit, const Assignment& tau) { return lit.sign * tau.value(lit.var); }

/// sum_{i,j} sign(i,j) tau(var(i,j)); zero for every formula and assignment.
std::int64_t literal_balance(const Formula& f, const Assignment& tau);

/// Uniform bijection via a single shuffle of the clone sequence.
Formula sample_formula(const ModelParams& params, Rng& rng);

struct PlantedSample {
  Formula formula;
  Assignment assignment;
  std::int64_t retries;  ///< rejected pattern draws before the balance event held
};

/// Planted pair: uniform assignment, per-clause patterns from the tilted law
/// conditioned on exactly dn true slots, then uniform matching of true slots to
/// true clones and false slots to false clones.
PlantedSample sample_planted(const ModelParams& params, Rng& rng,
                             std::int64_t max_retries = 1'000'000);

/// Integral pattern histogram: counts[code] clauses with pattern code, over
/// codes 0..2^k-1 (counts[0] must be 0).
struct PatternCounts {
  int k = 0;
  std::vector<std::int64_t> counts;
  std::int64_t total() const;
  /// sum_code counts[code] * (2 popcount(code) - k); zero for balanced histograms.
  std::int64_t imbalance() const;
};

/// Converts a distribution on the 2^k codes to counts; throws DomainError when
/// m*mu is not integral (within 1e-9) or mu does not sum to 1.
PatternCounts counts_from_distribution(int k, std::span<const double> mu, std::int64_t m);

/// Largest-remainder rounding of m * bar_mu, then single-bit unit moves until the
/// true/false balance holds. Requires m*k even.
PatternCounts round_bar_mu(int k, std::int64_t m);

struct PairedPatternArray {
  int k = 0;
  std::vector<PatternCode> first;
  std::vector<PatternCode> second;
  std::int64_t rows() const { return static_cast<std::int64_t>(first.size()); }
};

/// Template array realizing `counts`, with two independent uniform row permutations.
PairedPatternArray sample_paired_patterns(const PatternCounts& counts, Rng& rng);

/// Violations of the bijection and degree invariants; empty means valid.
std::vector<std::string> validate(const ModelParams& params, std::span<const Literal> slots);
std::vector<std::string> validate(const Formula& f);

// Canonical JSON (lossless) and DIMACS (drops copy indices).
std::string to_json_text(const Formula& f);
Formula formula_from_json_text(std::string_view text);
std::string to_dimacs(const Formula& f);
/// Rebuilds copy indices in order of occurrence. When `d` is not given it is
/// inferred as (#literals)/(2n). Throws FormatError naming the first variable
/// whose degree profile is not exactly d/d.
Formula formula_from_dimacs(std::string_view text, std::optional<std::int64_t> d = std::nullopt);
/// Reads either format, deciding by the first non-blank character.
Formula read_formula(std::string_view text);

}  // namespace regsat
