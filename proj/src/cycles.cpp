#include "regsat/cycles.hpp"

#include <cmath>

#include "regsat/errors.hpp"
#include "regsat/parallel.hpp"

namespace regsat {

CycleCensus::CycleCensus(int max_len) : max_len_(max_len) {
  if (max_len < 0 || max_len > kMaxLength) throw DomainError("census length must be in [0, 8]");
  counts_.resize(max_len + 1);
  for (int l = 1; l <= max_len; ++l) counts_[l].assign(std::size_t{1} << (2 * l), 0);
}

std::uint64_t CycleCensus::total(int l) const {
  std::uint64_t sum = 0;
  for (auto c : counts_.at(l)) sum += c;
  return sum;
}

CycleCensus& CycleCensus::operator+=(const CycleCensus& other) {
  if (other.max_len_ != max_len_) throw DomainError("cannot add censuses of different lengths");
  for (int l = 1; l <= max_len_; ++l) {
    for (std::size_t b = 0; b < counts_[l].size(); ++b) counts_[l][b] += other.counts_[l][b];
  }
  return *this;
}

namespace {

class Walker {
 public:
  Walker(const Formula& f, int L, Orientation orientation, CycleCensus& out)
      : f_(f), k_(static_cast<int>(f.params().k())), L_(L), orientation_(orientation), out_(out),
        clause_used_(f.params().m(), 0), var_used_(f.params().n(), 0) {}

  void from(std::int64_t start) {
    start_ = start;
    clause_used_[start] = 1;
    for (int j = 0; j < k_; ++j) {
      const Literal& lit = f_.slot(start, j);
      if (var_used_[lit.var]) continue;
      start_slot_ = j;
      var_used_[lit.var] = 1;
      extend(lit.var, start * k_ + j, lit.sign > 0 ? 1u : 0u, 1);
      var_used_[lit.var] = 0;
    }
    clause_used_[start] = 0;
  }

 private:
  // `bits` holds the signs so far with the exit sign of variable `var` last.
  void extend(std::int32_t var, std::int64_t exit_slot, std::uint32_t bits, int l) {
    for (std::int64_t slot : f_.occurrences(var)) {
      if (slot == exit_slot) continue;
      const std::int64_t c = slot / k_;
      const int j = static_cast<int>(slot % k_);
      const std::uint32_t closed = (bits << 1) | (f_.slots()[slot].sign > 0 ? 1u : 0u);
      if (c == start_) {
        const bool ok = orientation_ == Orientation::Canonical ? j > start_slot_ : j != start_slot_;
        if (ok) out_.at(l, closed)++;
        continue;
      }
      if (l == L_ || c < start_ || clause_used_[c]) continue;
      clause_used_[c] = 1;
      for (int jj = 0; jj < k_; ++jj) {
        if (jj == j) continue;
        const Literal& lit = f_.slot(c, jj);
        if (var_used_[lit.var]) continue;
        var_used_[lit.var] = 1;
        extend(lit.var, c * k_ + jj, (closed << 1) | (lit.sign > 0 ? 1u : 0u), l + 1);
        var_used_[lit.var] = 0;
      }
      clause_used_[c] = 0;
    }
  }

  const Formula& f_;
  int k_, L_;
  Orientation orientation_;
  CycleCensus& out_;
  std::vector<std::uint8_t> clause_used_, var_used_;
  std::int64_t start_ = 0;
  int start_slot_ = 0;
};

}  // namespace

CycleCensus cycle_census(const Formula& f, int L, int workers, Orientation orientation) {
  if (L < 1 || L > CycleCensus::kMaxLength) throw DomainError("cycle length L must be in [1, 8]");
  const std::int64_t m = f.params().m();
  workers = static_cast<int>(std::clamp<std::int64_t>(workers, 1, m));
  std::vector<CycleCensus> partial(workers, CycleCensus(L));
  std::vector<Walker> walkers;
  walkers.reserve(workers);
  for (int w = 0; w < workers; ++w) walkers.emplace_back(f, L, orientation, partial[w]);
  parallel_for(m, workers, [&](std::int64_t start, int w) { walkers[w].from(start); });
  CycleCensus out(L);
  for (const auto& p : partial) out += p;
  return out;
}

namespace {

// Positions t = 2..2l+1 of the literal definition are stored at index t-2.
struct OracleState {
  const Formula& f;
  std::int64_t m;
  int k;
  int l;
  std::vector<std::int64_t> i;
  std::vector<int> j;
  CycleCensus& out;

  std::int32_t var_at(int idx) const { return f.slot(i[idx], j[idx]).var; }

  // Conditions that become decidable once position idx is fixed.
  bool admissible(int idx) const {
    const int t = idx + 2;
    if (i[idx] < i[0]) return false;  // start clause is the minimum
    if (t % 2 == 0 && t <= 2 * l) {
      // even position opens a clause; the clauses i_2, i_4, ..., i_{2l} are distinct
      for (int u = 0; u < idx; u += 2) {
        if (i[u] == i[idx]) return false;
      }
      // variables at even positions pairwise distinct
      for (int u = 0; u < idx; u += 2) {
        if (var_at(u) == var_at(idx)) return false;
      }
    }
    if (t % 2 == 1) {
      // odd position shares a variable with the preceding even position
      if (var_at(idx) != var_at(idx - 1)) return false;
      if (t == 2 * l + 1 && (i[idx] != i[0] || !(j[0] < j[idx]))) return false;
    }
    // the clause entered at odd position t-1 is left at even position t
    if (t % 2 == 0 && t >= 4 && i[idx] != i[idx - 1]) return false;
    return true;
  }

  void place(int idx) {
    if (idx == 2 * l) {
      std::uint32_t bits = 0;
      for (int u = 0; u < 2 * l; ++u) bits = (bits << 1) | (f.slot(i[u], j[u]).sign > 0 ? 1u : 0u);
      out.at(l, bits)++;
      return;
    }
    for (std::int64_t ii = 0; ii < m; ++ii) {
      for (int jj = 0; jj < k; ++jj) {
        i[idx] = ii;
        j[idx] = jj;
        if (admissible(idx)) place(idx + 1);
      }
    }
  }
};

}  // namespace

CycleCensus cycle_census_oracle(const Formula& f, int L) {
  if (L < 1 || L > 4) throw DomainError("oracle census supports 1 <= L <= 4");
  if (f.params().slots() > 2000) throw ResourceError("oracle census requires m*k <= 2000");
  CycleCensus out(L);
  for (int l = 1; l <= L; ++l) {
    OracleState st{f, f.params().m(), static_cast<int>(f.params().k()), l,
                   std::vector<std::int64_t>(2 * l), std::vector<int>(2 * l), out};
    st.place(0);
  }
  return out;
}

double u_statistic(const CycleCensus& census, const RateTable& rates, int ell) {
  if (ell < 0) throw DomainError("ell must be nonnegative");
  if (ell > census.max_len()) throw DomainError("census shorter than ell");
  if (ell > rates.max_len()) throw DomainError("rate table shorter than ell");
  double u = 0.0;
  for (int l = 1; l <= ell; ++l) {
    const auto& level = census.level(l);
    for (std::uint32_t b = 0; b < level.size(); ++b) {
      const SignPattern s(l, b);
      const double delta = rates.delta(s);
      if (!(1.0 + delta > 0.0)) throw DomainError("1 + delta_s must be positive");
      u += double(level[b]) * std::log1p(delta) - rates.lambda(s) * delta;
    }
  }
  return u;
}

ISCount i_s_enumerate(int k, int d, const SignPattern& s) {
  if (k < 2 || d < 1) throw DomainError("i_s_enumerate requires k >= 2 and d >= 1");
  const int l = s.half_length();
  if (k * d > 64 || l > 3) throw ResourceError("i_s_enumerate requires k*d <= 64 and l <= 3");
  if (std::pow(double(k) * d, 2.0 * l) > 1e9) throw ResourceError("i_s_enumerate: (kd)^{2l} exceeds 1e9");

  // Position h = 2..2l+1 is stored at index h-2.
  const int len = 2 * l;
  std::vector<int> j(len, 0), g(len, 0);
  std::uint64_t count = 0;
  for (;;) {
    bool ok = j[0] != j[len - 1];
    for (int h = 1; ok && h < l; ++h) ok = j[2 * h - 1] != j[2 * h];
    for (int h = 0; ok && h < l; ++h) {
      if (s.entry(2 * h) * s.entry(2 * h + 1) == 1) ok = g[2 * h] != g[2 * h + 1];
    }
    count += ok;
    int pos = 0;
    for (; pos < 2 * len; ++pos) {
      int& digit = pos < len ? j[pos] : g[pos - len];
      const int base = pos < len ? k : d;
      if (++digit < base) break;
      digit = 0;
    }
    if (pos == 2 * len) break;
  }

  double per_pair = 1.0;
  for (int h = 0; h < l; ++h) {
    per_pair *= s.entry(2 * h) * s.entry(2 * h + 1) == 1 ? double(d - 1) : double(d);
  }
  const double kk = double(k) * (k - 1);
  ISCount out{};
  out.enumerated = count;
  out.printed_form = std::pow(kk, 2 * l) * std::pow(double(d), l) * per_pair;
  out.corrected_form = std::pow(kk, l) * std::pow(double(d), l) * per_pair;
  out.matches_printed = double(count) == out.printed_form;
  out.matches_corrected = double(count) == out.corrected_form;
  return out;
}

}  // namespace regsat
