#pragma once

// Closed-form quantities of the random regular k-SAT model: the balance
// probability q, cycle rates and tilts, moment formulas, and the overlap
// exponents used by the second-moment analysis.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regsat/params.hpp"

namespace regsat {

/// Truth-value pattern of a clause: bit j set iff the j-th literal is true.
/// The all-false pattern 0 is not a satisfying pattern.
using PatternCode = std::uint32_t;

/// Sign pattern (s_2, ..., s_{2l+1}) of a cycle of length 2l.
///
/// Stored as a 2l-bit string with s_2 in the most significant position and
/// bit value 1 for sign +1. Consecutive pairs (s_{2i}, s_{2i+1}) are the two
/// occurrences of the i-th variable on the cycle.
class SignPattern {
 public:
  static constexpr int kMaxHalfLength = 15;

  SignPattern(int half_length, std::uint32_t bits);
  /// Entries must be +1 or -1 and the length even and >= 2.
  explicit SignPattern(std::span<const int> entries);
  /// Parses "+-+-" style strings (ASCII '+'/'-').
  static SignPattern parse(std::string_view text);

  int half_length() const { return l_; }
  int length() const { return 2 * l_; }
  std::uint32_t bits() const { return bits_; }

  /// i-th entry, 0-based (entry(0) is s_2). Returns +1 or -1.
  int entry(int i) const { return (bits_ >> (2 * l_ - 1 - i)) & 1u ? 1 : -1; }

  /// Number of variable pairs whose two signs differ.
  int flips() const;

  std::string to_string() const;

  /// Dense index in [0, 4^l) used by census tables.
  std::uint32_t index() const { return bits_; }

  friend bool operator==(const SignPattern&, const SignPattern&) = default;
  friend auto operator<=>(const SignPattern& a, const SignPattern& b) {
    if (a.l_ != b.l_) return a.l_ <=> b.l_;
    return a.bits_ <=> b.bits_;
  }

 private:
  int l_;
  std::uint32_t bits_;
};

/// Unique root in (0,1) of 2q = 1 - (1-q)^k. Throws DomainError for k < 2.
double solve_q(int k);

struct Mat2 {
  std::array<double, 4> a{};  // row-major
  double operator()(int r, int c) const { return a[2 * r + c]; }
  double trace() const { return a[0] + a[3]; }
  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  std::array<double, 2> apply(std::array<double, 2> v) const;
};

/// Transfer matrix for a variable whose two cycle occurrences have sign product `product`.
Mat2 transfer_matrix(double q, int product);

/// Per-pattern cycle rates lambda_s and tilts delta_s for a given (k, d).
///
/// Both quantities depend on s only through (l, t(s)); the table stores them
/// per (l, t) and the pattern accessors reduce to that. Construction checks
/// the transfer-matrix trace route against the closed form for every pattern.
class RateTable {
 public:
  static constexpr int kMaxLength = 12;

  /// Requires k >= 2, d >= 1, 1 <= max_len <= 12. Throws ConsistencyError if
  /// the two delta routes disagree by more than 1e-12.
  RateTable(int k, int d, int max_len);

  int k() const { return k_; }
  int d() const { return d_; }
  double q() const { return q_; }
  int max_len() const { return max_len_; }

  double lambda(const SignPattern& s) const;
  double delta(const SignPattern& s) const;
  double lambda_lt(int l, int t) const;
  double delta_lt(int l, int t) const;

  /// Sum of lambda_s over the C(l,t) 2^l patterns with t flips.
  double lambda_agg(int l, int t) const;
  /// The (l,t) rate in the form stated alongside the limit theorem; it lacks
  /// the 2^l pattern multiplicity. Kept for documentation only.
  double theorem_lambda(int l, int t) const;

  /// Closed form -1/2 ln(1 - (2d-1)(k-1)(1-4q(1-q))); +inf when divergent.
  double series_sum() const { return series_sum_; }
  /// sum_{l <= L} sum_s lambda_s delta_s^2 (L <= max_len).
  double partial_series(int L) const;
  /// Largest deviation observed between the trace and closed-form delta routes.
  double delta_route_gap() const { return delta_route_gap_; }

  /// All patterns with half-length exactly l, in index order.
  static std::vector<SignPattern> patterns(int l);

 private:
  int k_, d_, max_len_;
  double q_;
  std::vector<std::vector<double>> lambda_;  // [l][t]
  std::vector<std::vector<double>> delta_;   // [l][t]
  double series_sum_;
  double delta_route_gap_ = 0.0;
};

/// Delta for one pattern through the trace of the transfer-matrix product.
double delta_by_trace(double q, const SignPattern& s);
/// Delta for one pattern through (-1)^t (2q-1)^l.
double delta_closed_form(double q, const SignPattern& s);

/// (2d-1)(k-1)(1-4q(1-q)); the cycle series converges iff this is < 1.
double series_argument(int k, int d);

/// -1/2 ln(1 - series_argument). Throws DomainError when the argument is >= 1.
double cycle_series_sum(int k, int d);

struct SeriesDiagnostic {
  double partial_sum;  ///< sum over l <= L of sum_s lambda_s delta_s^2
  double tail_bound;   ///< geometric bound on the omitted terms
};
SeriesDiagnostic cycle_series_partial(int k, int d, int L);

/// (1 - series_argument)^{-1/2}. Same domain as cycle_series_sum.
double second_moment_limit(int k, int d);

/// n ln 2 + (m+1/2) ln(1-(1-q)^k) - (dn+1/2) ln(4q(1-q)).
double log_first_moment(const ModelParams& p);
/// Log of the normalizing factor multiplying Z in the distributional limit.
double log_normalizer(const ModelParams& p);
/// Exact ln E[Z] at finite n: ln(2^n [x^{dn}]((1+x)^k-1)^m / C(km, dn)).
double exact_log_first_moment(const ModelParams& p);

struct EventProbabilities {
  double p_s;
  double p_b;
  double p_b_given_s;
  double log_p_s;
  double log_p_b;
};
EventProbabilities event_probabilities(const ModelParams& p);

/// Tilted clause-pattern law; throws DomainError for the all-false pattern.
double bar_mu(int k, PatternCode sigma);

/// KL(p || r) with 0 ln 0 = 0; +inf when p has mass where r has none.
/// Throws DomainError on size mismatch.
double kl_divergence(std::span<const double> p, std::span<const double> r);

/// Limiting variance per clause of the paired-array agreement statistic A.
double nu_sq(int k);

struct ThresholdInfo {
  double asymptotic_threshold;  ///< 2^k ln2 - k ln2/2 - (1+ln2)/2
  double max_2d_over_k;         ///< 2^k ln2 - k ln2/2 - 4
  bool admits(std::int64_t d, int k) const { return 2.0 * double(d) / k <= max_2d_over_k; }
  /// Largest integer d satisfying the degree condition (0 if none).
  std::int64_t max_degree(int k) const;
};
ThresholdInfo threshold_info(int k);

/// Overlap parameter rho_{1,1} together with the implicit distribution q_{z1,z2}.
/// Four-entry arrays are ordered (1,1), (1,-1), (-1,1), (-1,-1).
struct OverlapPoint {
  int k;
  double rho11;
  std::array<double, 4> rho;
  std::array<double, 4> qmat;
  double s;         ///< 1 - 2(q_{-1,-1}+q_{-1,1})^k + q_{-1,-1}^k
  double residual;  ///< max abs residual of the defining equations
  int iterations;
};

/// Newton solve for q_{z1,z2} given rho11 in (0, 1/2). Throws NumericalError
/// on non-convergence.
OverlapPoint overlap_solve(int k, double rho11);

/// Residuals (F1, F2) of the two non-trivial defining equations at (q11, q1m).
std::array<double, 2> overlap_residual(int k, double rho11, double q11, double q1m);
/// Analytic Jacobian of overlap_residual with respect to (q11, q1m), row-major.
std::array<double, 4> overlap_jacobian(int k, double q11, double q1m);

struct OverlapExponents {
  double f;
  double g;
  double entropy;
};
OverlapExponents overlap_exponents(int k, int d, double rho11);
/// f alone (independent of d).
double overlap_f(int k, double rho11);

struct StationaryPoints {
  double x1;
  double x2;
};
/// The two roots of x = exp(-2d(1+x)/((2^k-2)(1+x)^k+1)) in (0, 1/2 - 2^{-0.49k}).
StationaryPoints g_stationary_points(int k, std::int64_t d);

/// (1/s) prod_i q_{sigma_i, tau_i} at the solved overlap point.
double bar_nu(const OverlapPoint& pt, PatternCode sigma, PatternCode tau);
double bar_nu(int k, double rho11, PatternCode sigma, PatternCode tau);

}  // namespace regsat
