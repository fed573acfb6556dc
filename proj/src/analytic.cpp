#include "regsat/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "regsat/errors.hpp"

namespace regsat {

namespace {

double ipow(double base, long exponent) {
  double result = 1.0;
  for (long i = 0; i < exponent; ++i) result *= base;
  return result;
}

double binomial(int n, int r) {
  double result = 1.0;
  for (int i = 1; i <= r; ++i) result = result * (n - r + i) / i;
  return result;
}

double log_binomial(double n, double r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

void require_rate_domain(int k, int d) {
  if (k < 3) throw DomainError("cycle rates need k >= 3 (q degenerates to 0 at k = 2)");
  if (d < 1) throw DomainError("d must be at least 1");
}

}  // namespace

// --- SignPattern -----------------------------------------------------------

SignPattern::SignPattern(int half_length, std::uint32_t bits) : l_(half_length), bits_(bits) {
  if (half_length < 1 || half_length > kMaxHalfLength) {
    throw DomainError("sign pattern half-length must be in [1, 15]");
  }
  if (bits >= (std::uint32_t{1} << (2 * half_length))) {
    throw DomainError("sign pattern bits exceed pattern length");
  }
}

SignPattern::SignPattern(std::span<const int> entries) : l_(0), bits_(0) {
  if (entries.size() < 2 || entries.size() % 2 != 0 ||
      entries.size() > 2 * std::size_t{kMaxHalfLength}) {
    throw DomainError("sign pattern length must be even, >= 2 and <= 30");
  }
  l_ = static_cast<int>(entries.size() / 2);
  for (int e : entries) {
    if (e != 1 && e != -1) throw DomainError("sign pattern entries must be +1 or -1");
    bits_ = (bits_ << 1) | (e == 1 ? 1u : 0u);
  }
}

SignPattern SignPattern::parse(std::string_view text) {
  std::vector<int> entries;
  entries.reserve(text.size());
  for (char c : text) {
    if (c == '+') {
      entries.push_back(1);
    } else if (c == '-') {
      entries.push_back(-1);
    } else {
      throw DomainError("invalid character in sign pattern: '" + std::string(1, c) + "'");
    }
  }
  return SignPattern(entries);
}

int SignPattern::flips() const {
  int t = 0;
  for (int i = 0; i < l_; ++i) {
    if (entry(2 * i) != entry(2 * i + 1)) ++t;
  }
  return t;
}

std::string SignPattern::to_string() const {
  std::string out;
  out.reserve(2 * l_);
  for (int i = 0; i < 2 * l_; ++i) out.push_back(entry(i) == 1 ? '+' : '-');
  return out;
}

// --- q ---------------------------------------------------------------------

double solve_q(int k) {
  if (k < 2) throw DomainError("solve_q requires k >= 2 (got " + std::to_string(k) + ")");
  // At k = 2 the equation reduces to q^2 = 0: the only root in [0,1) is 0.
  if (k == 2) return 0.0;

  auto residual = [k](double q) { return 2.0 * q - 1.0 + std::pow(1.0 - q, k); };
  // residual(1/4) = -1/2 + (3/4)^k < 0 and residual(1/2) = 2^-k > 0 for k >= 3.
  double lo = 0.25, hi = 0.5;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  double q = 0.5 * (lo + hi);
  for (int iter = 0; iter < 50; ++iter) {
    const double slope = 2.0 - k * std::pow(1.0 - q, k - 1);
    const double step = residual(q) / slope;
    q -= step;
    if (std::abs(step) < 1e-17) break;
  }
  if (std::abs(residual(q)) > 1e-14) {
    throw NumericalError("solve_q did not reach residual 1e-14 for k=" + std::to_string(k));
  }
  return q;
}

// --- transfer matrices -----------------------------------------------------

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return Mat2{{x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
               x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]}};
}

std::array<double, 2> Mat2::apply(std::array<double, 2> v) const {
  return {a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]};
}

Mat2 transfer_matrix(double q, int product) {
  const double p = 1.0 - q;
  if (product == 1) return Mat2{{q, p * p / q, q, q}};
  if (product == -1) return Mat2{{p, p, q * q / p, p}};
  throw DomainError("transfer matrix index must be +1 or -1");
}

double delta_by_trace(double q, const SignPattern& s) {
  Mat2 acc{{1.0, 0.0, 0.0, 1.0}};
  for (int i = 0; i < s.half_length(); ++i) {
    acc = acc * transfer_matrix(q, s.entry(2 * i) * s.entry(2 * i + 1));
  }
  return acc.trace() - 1.0;
}

double delta_closed_form(double q, const SignPattern& s) {
  const double magnitude = ipow(2.0 * q - 1.0, s.half_length());
  return s.flips() % 2 == 0 ? magnitude : -magnitude;
}

// --- RateTable -------------------------------------------------------------

RateTable::RateTable(int k, int d, int max_len) : k_(k), d_(d), max_len_(max_len), q_(0.0) {
  require_rate_domain(k, d);
  if (max_len < 1 || max_len > kMaxLength) {
    throw DomainError("rate table length must be in [1, 12]");
  }
  q_ = solve_q(k);

  lambda_.assign(max_len + 1, {});
  delta_.assign(max_len + 1, {});
  for (int l = 1; l <= max_len; ++l) {
    lambda_[l].resize(l + 1);
    delta_[l].resize(l + 1);
    const double base = ipow((k - 1) / 2.0, l) / (2.0 * l);
    for (int t = 0; t <= l; ++t) {
      lambda_[l][t] = base * ipow(d - 1.0, l - t) * ipow(double(d), t);
      const double mag = ipow(2.0 * q_ - 1.0, l);
      delta_[l][t] = t % 2 == 0 ? mag : -mag;
    }
  }

  // Trace route over every pattern, by depth-first extension of the product.
  const std::array<Mat2, 2> mats{transfer_matrix(q_, 1), transfer_matrix(q_, -1)};
  double gap = 0.0;
  auto visit = [&](auto&& self, const Mat2& prefix, int l, int t) -> void {
    if (l > 0) gap = std::max(gap, std::abs(prefix.trace() - 1.0 - delta_[l][t]));
    if (l == max_len) return;
    // Each variable pair has two sign combinations with product +1 and two with -1.
    const Mat2 same = prefix * mats[0];
    const Mat2 flip = prefix * mats[1];
    for (int rep = 0; rep < 2; ++rep) {
      self(self, same, l + 1, t);
      self(self, flip, l + 1, t + 1);
    }
  };
  visit(visit, Mat2{{1.0, 0.0, 0.0, 1.0}}, 0, 0);
  delta_route_gap_ = gap;
  if (gap > 1e-12) {
    std::ostringstream msg;
    msg << "transfer-matrix and closed-form delta disagree by " << gap;
    throw ConsistencyError(msg.str());
  }

  const double x = series_argument(k, d);
  series_sum_ = x < 1.0 ? -0.5 * std::log1p(-x) : std::numeric_limits<double>::infinity();
}

double RateTable::lambda_lt(int l, int t) const {
  if (l < 1 || l > max_len_ || t < 0 || t > l) throw DomainError("(l,t) outside rate table");
  return lambda_[l][t];
}

double RateTable::delta_lt(int l, int t) const {
  if (l < 1 || l > max_len_ || t < 0 || t > l) throw DomainError("(l,t) outside rate table");
  return delta_[l][t];
}

double RateTable::lambda(const SignPattern& s) const {
  return lambda_lt(s.half_length(), s.flips());
}

double RateTable::delta(const SignPattern& s) const {
  return delta_lt(s.half_length(), s.flips());
}

double RateTable::lambda_agg(int l, int t) const {
  return binomial(l, t) * ipow(2.0, l) * lambda_lt(l, t);
}

double RateTable::theorem_lambda(int l, int t) const {
  if (l < 1 || t < 0 || t > l) throw DomainError("(l,t) out of range");
  return binomial(l, t) / (2.0 * l) * ipow((k_ - 1) / 2.0, l) * ipow(d_ - 1.0, l - t) *
         ipow(double(d_), t);
}

double RateTable::partial_series(int L) const {
  if (L < 0 || L > max_len_) throw DomainError("partial series length exceeds rate table");
  double sum = 0.0;
  for (int l = 1; l <= L; ++l) {
    for (int t = 0; t <= l; ++t) sum += lambda_agg(l, t) * delta_[l][t] * delta_[l][t];
  }
  return sum;
}

std::vector<SignPattern> RateTable::patterns(int l) {
  if (l < 1 || l > SignPattern::kMaxHalfLength) throw DomainError("pattern half-length out of range");
  std::vector<SignPattern> out;
  const std::uint32_t count = std::uint32_t{1} << (2 * l);
  out.reserve(count);
  for (std::uint32_t b = 0; b < count; ++b) out.emplace_back(l, b);
  return out;
}

// --- series ----------------------------------------------------------------

double series_argument(int k, int d) {
  require_rate_domain(k, d);
  const double q = solve_q(k);
  return (2.0 * d - 1.0) * (k - 1.0) * (1.0 - 4.0 * q * (1.0 - q));
}

double cycle_series_sum(int k, int d) {
  const double x = series_argument(k, d);
  if (x >= 1.0) {
    std::ostringstream msg;
    msg << "cycle series diverges: requires (2d-1)(k-1)(1-4q(1-q))<1, got " << x;
    throw DomainError(msg.str());
  }
  return -0.5 * std::log1p(-x);
}

SeriesDiagnostic cycle_series_partial(int k, int d, int L) {
  if (L < 1 || L > RateTable::kMaxLength) throw DomainError("truncation length must be in [1, 12]");
  const RateTable table(k, d, L);
  const double x = series_argument(k, d);
  const double tail = x < 1.0 ? ipow(x, L + 1) / (2.0 * (L + 1) * (1.0 - x))
                              : std::numeric_limits<double>::infinity();
  return {table.partial_series(L), tail};
}

double second_moment_limit(int k, int d) {
  const double x = series_argument(k, d);
  if (x >= 1.0) {
    std::ostringstream msg;
    msg << "second moment limit undefined: requires (2d-1)(k-1)(1-4q(1-q))<1, got " << x;
    throw DomainError(msg.str());
  }
  return 1.0 / std::sqrt(1.0 - x);
}

// --- first moment ----------------------------------------------------------

double log_first_moment(const ModelParams& p) {
  const int k = static_cast<int>(p.k());
  if (k < 3) throw DomainError("first moment formula needs k >= 3");
  const double q = solve_q(k);
  const double n = double(p.n()), m = double(p.m()), d = double(p.d());
  return n * std::numbers::ln2 + (m + 0.5) * std::log1p(-std::pow(1.0 - q, k)) -
         (d * n + 0.5) * std::log(4.0 * q * (1.0 - q));
}

double log_normalizer(const ModelParams& p) { return -log_first_moment(p); }

double exact_log_first_moment(const ModelParams& p) {
  const int k = static_cast<int>(p.k());
  const std::int64_t m = p.m();
  const std::int64_t target = p.d() * p.n();
  std::vector<double> clause(k + 1);
  for (int j = 1; j <= k; ++j) clause[j] = binomial(k, j);

  // Coefficients of ((1+x)^k - 1)^i truncated at degree dn, kept rescaled.
  std::vector<double> poly{1.0};
  double log_scale = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const std::size_t degree = std::min<std::size_t>(poly.size() - 1 + k, target);
    std::vector<double> next(degree + 1, 0.0);
    for (std::size_t a = 0; a < poly.size(); ++a) {
      if (poly[a] == 0.0) continue;
      for (int j = 1; j <= k && a + j <= degree; ++j) next[a + j] += poly[a] * clause[j];
    }
    const double peak = *std::max_element(next.begin(), next.end());
    for (double& c : next) c /= peak;
    log_scale += std::log(peak);
    poly = std::move(next);
  }
  if (poly.size() <= static_cast<std::size_t>(target) || poly[target] == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return double(p.n()) * std::numbers::ln2 + std::log(poly[target]) + log_scale -
         log_binomial(double(p.slots()), double(target));
}

EventProbabilities event_probabilities(const ModelParams& p) {
  const int k = static_cast<int>(p.k());
  if (k < 3) throw DomainError("event probabilities need k >= 3");
  const double q = solve_q(k);
  const double sat = 1.0 - std::pow(1.0 - q, k);
  const double km = double(p.slots());
  const double dn = double(p.d() * p.n());
  EventProbabilities out{};
  out.log_p_s = double(p.m()) * std::log(sat);
  out.log_p_b = log_binomial(km, dn) + dn * std::log(q * (1.0 - q));
  out.p_s = std::exp(out.log_p_s);
  out.p_b = std::exp(out.log_p_b);
  out.p_b_given_s = std::sqrt(sat / (2.0 * std::numbers::pi * km * q * (1.0 - q)));
  return out;
}

// --- clause patterns -------------------------------------------------------

double bar_mu(int k, PatternCode sigma) {
  if (k < 3 || k > 31) throw DomainError("bar_mu requires 3 <= k <= 31");
  if (sigma == 0) throw DomainError("the all-false pattern is not a satisfying pattern");
  if (sigma >= (PatternCode{1} << k)) throw DomainError("pattern code exceeds 2^k");
  const double q = solve_q(k);
  const int ones = std::popcount(sigma);
  return ipow(q, ones) * ipow(1.0 - q, k - ones) / (1.0 - std::pow(1.0 - q, k));
}

double kl_divergence(std::span<const double> p, std::span<const double> r) {
  if (p.size() != r.size()) throw DomainError("KL divergence needs equal index sets");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (r[i] == 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log(p[i] / r[i]);
  }
  return std::max(sum, 0.0);
}

double nu_sq(int k) {
  if (k < 2) throw DomainError("nu_sq requires k >= 2");
  const double q = solve_q(k);
  return k / 16.0 * (k - 4.0 * (k - 1.0) * q * (1.0 - q));
}

ThresholdInfo threshold_info(int k) {
  if (k < 2) throw DomainError("threshold_info requires k >= 2");
  const double ln2 = std::numbers::ln2;
  const double lead = std::ldexp(ln2, k) - k * ln2 / 2.0;
  return {lead - (1.0 + ln2) / 2.0, lead - 4.0};
}

std::int64_t ThresholdInfo::max_degree(int k) const {
  const double cap = std::floor(k * max_2d_over_k / 2.0);
  return cap >= 1.0 ? static_cast<std::int64_t>(cap) : 0;
}

// --- g stationary points ---------------------------------------------------

StationaryPoints g_stationary_points(int k, std::int64_t d) {
  if (k < 8 || k > 60) throw DomainError("g_stationary_points requires 8 <= k <= 60");
  if (d < 1) throw DomainError("d must be positive");
  const double two_k = std::ldexp(1.0, k);
  auto fixed_point_gap = [&](double x) {
    const double denom = (two_k - 2.0) * std::pow(1.0 + x, k) + 1.0;
    return x - std::exp(-2.0 * double(d) * (1.0 + x) / denom);
  };
  const double upper = 0.5 - std::pow(2.0, -0.49 * k);
  const double lower = std::ldexp(1.0, -4 * k);
  constexpr int kGrid = 512;
  const double log_lo = std::log(lower), log_hi = std::log(upper);

  std::vector<double> roots;
  double prev_x = lower, prev_f = fixed_point_gap(lower);
  for (int i = 1; i < kGrid && roots.size() < 2; ++i) {
    const double x = std::exp(log_lo + (log_hi - log_lo) * i / (kGrid - 1));
    const double fx = fixed_point_gap(x);
    if ((prev_f < 0.0) != (fx < 0.0)) {
      double a = prev_x, b = x, fa = prev_f;
      for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = fixed_point_gap(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = fx;
  }
  if (roots.size() < 2) {
    throw NumericalError("g_stationary_points: found " + std::to_string(roots.size()) +
                         " bracketed root(s), expected 2 (k=" + std::to_string(k) +
                         ", d=" + std::to_string(d) + ")");
  }
  return {roots[0], roots[1]};
}

}  // namespace regsat
