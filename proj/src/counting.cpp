#include "regsat/counting.hpp"

#include <bit>
#include <cmath>

#include "regsat/errors.hpp"

namespace regsat {

namespace {

struct Occurrence {
  std::int64_t clause;
  PatternCode bit;
};

// Clause codes under the all-false assignment and, per variable, the clause
// bits toggled when the variable flips.
struct FlipTables {
  std::vector<PatternCode> codes;
  std::vector<std::vector<Occurrence>> occ;
};

FlipTables flip_tables(const Formula& f) {
  const auto& p = f.params();
  FlipTables t;
  t.codes.assign(p.m(), 0);
  t.occ.resize(p.n());
  for (std::int64_t i = 0; i < p.m(); ++i) {
    for (int j = 0; j < p.k(); ++j) {
      const Literal& lit = f.slot(i, j);
      const PatternCode bit = PatternCode{1} << j;
      if (lit.sign < 0) t.codes[i] |= bit;
      t.occ[lit.var].push_back({i, bit});
    }
  }
  return t;
}

void check_size(const Formula& f, int max_n) {
  const std::int64_t n = f.params().n();
  if (f.params().k() > 31) throw DomainError("exact counting supports k <= 31");
  if (n > max_n || n > 62) {
    throw ResourceError("exact counting of n=" + std::to_string(n) + " exceeds the cap n<=" +
                        std::to_string(std::min(max_n, 62)) + "; use a Monte Carlo experiment instead");
  }
}

// Walks all 2^n assignments in reflected Gray order and calls visit(mask, codes)
// on each satisfying one. The visitor returns false to stop early.
template <class Visit, class OnToggle>
void gray_walk(const Formula& f, Visit&& visit, OnToggle&& on_toggle) {
  FlipTables t = flip_tables(f);
  const std::int64_t n = f.params().n();
  std::int64_t unsat = 0;
  for (PatternCode c : t.codes) unsat += c == 0;
  std::uint64_t mask = 0;
  if (unsat == 0 && !visit(mask, t.codes)) return;
  const std::uint64_t steps = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < steps; ++step) {
    const int v = std::countr_zero(step);
    mask ^= std::uint64_t{1} << v;
    for (const Occurrence& o : t.occ[v]) {
      PatternCode& code = t.codes[o.clause];
      const PatternCode before = code;
      code ^= o.bit;
      unsat += (code == 0) - (before == 0);
      on_toggle(before, code);
    }
    if (unsat == 0 && !visit(mask, t.codes)) return;
  }
}

}  // namespace

Evaluation evaluate(const Formula& f, const Assignment& tau) {
  const auto& p = f.params();
  if (tau.size() != p.n()) throw DomainError("assignment length differs from n");
  Evaluation out;
  out.satisfied = true;
  out.patterns.assign(p.m(), 0);
  for (std::int64_t i = 0; i < p.m(); ++i) {
    for (int j = 0; j < p.k(); ++j) {
      if (literal_value(f.slot(i, j), tau) > 0) out.patterns[i] |= PatternCode{1} << j;
    }
    if (out.patterns[i] == 0) out.satisfied = false;
  }
  return out;
}

std::int64_t mu_imbalance(const MuKey& key, int k) {
  std::int64_t sum = 0;
  for (const auto& [code, count] : key) sum += count * (2 * std::popcount(code) - k);
  return sum;
}

double mu_distance(const MuKey& key, int k, std::int64_t m) {
  const std::size_t size = std::size_t{1} << k;
  std::vector<double> diff(size, 0.0);
  for (std::size_t c = 1; c < size; ++c) diff[c] = -bar_mu(k, static_cast<PatternCode>(c));
  for (const auto& [code, count] : key) diff[code] += double(count) / double(m);
  double sq = 0.0;
  for (double x : diff) sq += x * x;
  return std::sqrt(sq);
}

std::uint64_t PatternHistogram::total() const {
  std::uint64_t z = 0;
  for (const auto& [key, value] : z_mu) z += value;
  return z;
}

std::vector<std::pair<MuKey, std::uint64_t>> PatternHistogram::window(double omega) const {
  std::vector<std::pair<MuKey, std::uint64_t>> out;
  const double radius = omega / std::sqrt(double(m));
  for (const auto& entry : z_mu) {
    if (mu_distance(entry.first, k, m) <= radius) out.push_back(entry);
  }
  return out;
}

CountResult count_all(const Formula& f, bool want_histogram, int max_n) {
  check_size(f, max_n);
  const auto& p = f.params();
  CountResult out;
  if (!want_histogram) {
    gray_walk(
        f, [&](std::uint64_t, const std::vector<PatternCode>&) { return ++out.z, true; },
        [](PatternCode, PatternCode) {});
    return out;
  }
  const int k = static_cast<int>(p.k());
  std::vector<std::int64_t> per_code(std::size_t{1} << k, 0);
  for (PatternCode c : flip_tables(f).codes) per_code[c]++;
  PatternHistogram hist{k, p.m(), {}};
  MuKey key;
  gray_walk(
      f,
      [&](std::uint64_t, const std::vector<PatternCode>&) {
        ++out.z;
        key.clear();
        for (std::size_t c = 1; c < per_code.size(); ++c) {
          if (per_code[c]) key.emplace_back(static_cast<PatternCode>(c), per_code[c]);
        }
        hist.z_mu[key]++;
        return true;
      },
      [&](PatternCode before, PatternCode after) {
        per_code[before]--;
        per_code[after]++;
      });
  out.histogram = std::move(hist);
  return out;
}

std::vector<std::uint64_t> satisfying_masks(const Formula& f, std::uint64_t max_z, int max_n) {
  check_size(f, max_n);
  std::vector<std::uint64_t> masks;
  bool overflow = false;
  gray_walk(
      f,
      [&](std::uint64_t mask, const std::vector<PatternCode>&) {
        if (masks.size() >= max_z) {
          overflow = true;
          return false;
        }
        masks.push_back(mask);
        return true;
      },
      [](PatternCode, PatternCode) {});
  if (overflow) {
    throw ResourceError("more than " + std::to_string(max_z) +
                        " satisfying assignments; pair census not materializable");
  }
  return masks;
}

std::uint64_t OverlapCensus::total() const {
  std::uint64_t sum = 0;
  for (auto x : pairs) sum += x;
  return sum;
}

OverlapCensus overlap_census(std::span<const std::uint64_t> masks, std::int64_t n) {
  OverlapCensus out;
  out.pairs.assign(n + 1, 0);
  for (std::size_t a = 0; a < masks.size(); ++a) {
    out.pairs[n]++;
    for (std::size_t b = a + 1; b < masks.size(); ++b) {
      out.pairs[n - std::popcount(masks[a] ^ masks[b])] += 2;
    }
  }
  return out;
}

OverlapCensus overlap_census(const Formula& f, std::uint64_t max_z, int max_n) {
  const auto masks = satisfying_masks(f, max_z, max_n);
  return overlap_census(masks, f.params().n());
}

std::int64_t a_statistic(const PairedPatternArray& paired) {
  if (paired.first.size() != paired.second.size()) {
    throw DomainError("paired arrays have different row counts");
  }
  std::int64_t a = 0;
  for (std::size_t i = 0; i < paired.first.size(); ++i) a += std::popcount(paired.first[i] & paired.second[i]);
  return a;
}

}  // namespace regsat
