#include "regsat/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "regsat/errors.hpp"

namespace regsat {

namespace {

std::string join_violations(const std::vector<std::string>& v, std::size_t limit = 5) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) out << (i ? "; " : "") << v[i];
  if (v.size() > limit) out << "; ... (" << v.size() << " violations)";
  return out.str();
}

Literal clone_literal(std::int64_t clone, std::int64_t d) {
  const std::int64_t r = clone % (2 * d);
  return Literal{static_cast<std::int32_t>(clone / (2 * d)), static_cast<std::int32_t>(r % d),
                 r < d ? 1 : -1};
}

}  // namespace

// --- Formula ---------------------------------------------------------------

Formula::Formula(const ModelParams& params, std::vector<Literal> slots)
    : params_(params), slots_(std::move(slots)) {
  const auto violations = validate(params_, slots_);
  if (!violations.empty()) throw FormatError("invalid formula: " + join_violations(violations));
  inverse_.assign(params_.slots(), 0);
  for (std::int64_t s = 0; s < params_.slots(); ++s) {
    inverse_[clone_id(slots_[s], params_.d())] = s;
  }
}

std::int64_t Formula::slot_of(std::int32_t var, std::int32_t copy, std::int32_t sign) const {
  return inverse_[clone_id(Literal{var, copy, sign}, params_.d())];
}

// --- Assignment ------------------------------------------------------------

Assignment::Assignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

Assignment Assignment::from_mask(std::uint64_t mask, std::int64_t n) {
  std::vector<std::uint8_t> bits(n);
  for (std::int64_t v = 0; v < n && v < 64; ++v) bits[v] = (mask >> v) & 1u;
  return Assignment(std::move(bits));
}

Assignment Assignment::random(std::int64_t n, Rng& rng) {
  std::vector<std::uint8_t> bits(n);
  std::bernoulli_distribution coin(0.5);
  for (auto& b : bits) b = coin(rng) ? 1 : 0;
  return Assignment(std::move(bits));
}

std::int64_t literal_balance(const Formula& f, const Assignment& tau) {
  std::int64_t sum = 0;
  for (const Literal& lit : f.slots()) sum += literal_value(lit, tau);
  return sum;
}

// --- validation ------------------------------------------------------------

std::vector<std::string> validate(const ModelParams& params, std::span<const Literal> slots) {
  std::vector<std::string> out;
  const std::int64_t n = params.n(), d = params.d(), k = params.k();
  if (static_cast<std::int64_t>(slots.size()) != params.slots()) {
    out.push_back("slot table has " + std::to_string(slots.size()) + " entries, expected " +
                  std::to_string(params.slots()));
    return out;
  }
  std::vector<std::uint8_t> used(params.slots(), 0);
  std::vector<std::int64_t> pos(n, 0), neg(n, 0);
  for (std::int64_t s = 0; s < params.slots(); ++s) {
    const Literal& lit = slots[s];
    const std::string where =
        "slot (" + std::to_string(s / k) + "," + std::to_string(s % k) + ")";
    if (lit.var < 0 || lit.var >= n) {
      out.push_back(where + ": variable index " + std::to_string(lit.var) + " out of range");
      continue;
    }
    if (lit.copy < 0 || lit.copy >= d) {
      out.push_back(where + ": copy index " + std::to_string(lit.copy) + " out of range");
      continue;
    }
    if (lit.sign != 1 && lit.sign != -1) {
      out.push_back(where + ": sign must be +1 or -1");
      continue;
    }
    (lit.sign > 0 ? pos : neg)[lit.var]++;
    auto& mark = used[clone_id(lit, d)];
    if (mark) {
      out.push_back("clone used twice: x" + std::to_string(lit.var + 1) + " copy " +
                    std::to_string(lit.copy + 1) + (lit.sign > 0 ? " positive" : " negative") +
                    " at " + where);
    }
    mark = 1;
  }
  for (std::int64_t v = 0; v < n; ++v) {
    if (pos[v] != d || neg[v] != d) {
      out.push_back("degree: variable x" + std::to_string(v + 1) + " has " +
                    std::to_string(pos[v]) + " positive and " + std::to_string(neg[v]) +
                    " negative occurrences, expected " + std::to_string(d) + "/" +
                    std::to_string(d));
    }
  }
  return out;
}

std::vector<std::string> validate(const Formula& f) { return validate(f.params(), f.slots()); }

// --- samplers --------------------------------------------------------------

Formula sample_formula(const ModelParams& params, Rng& rng) {
  std::vector<std::int64_t> clones(params.slots());
  std::iota(clones.begin(), clones.end(), 0);
  std::shuffle(clones.begin(), clones.end(), rng);
  std::vector<Literal> slots(params.slots());
  for (std::int64_t s = 0; s < params.slots(); ++s) slots[s] = clone_literal(clones[s], params.d());
  return Formula(params, std::move(slots));
}

PlantedSample sample_planted(const ModelParams& params, Rng& rng, std::int64_t max_retries) {
  const std::int64_t n = params.n(), d = params.d(), m = params.m();
  const int k = static_cast<int>(params.k());
  if (k > 31) throw DomainError("planted sampler supports k <= 31");
  const double q = solve_q(k);
  if (!(q > 0.0)) throw DomainError("planted sampler needs k >= 3");

  Assignment sigma = Assignment::random(n, rng);

  // Per-clause pattern: k independent Bernoulli(q) bits conditioned on not all
  // false, which is exactly the tilted clause law.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PatternCode> chi(m);
  std::int64_t retries = 0;
  for (;; ++retries) {
    if (retries >= max_retries) {
      throw SamplingError("planted sampler: balance event not reached after " +
                          std::to_string(max_retries) + " retries");
    }
    std::int64_t trues = 0;
    for (auto& code : chi) {
      do {
        code = 0;
        for (int j = 0; j < k; ++j) {
          if (unit(rng) < q) code |= PatternCode{1} << j;
        }
      } while (code == 0);
      trues += std::popcount(code);
    }
    if (trues == d * n) break;
  }

  std::vector<std::int64_t> true_clones, false_clones;
  true_clones.reserve(d * n);
  false_clones.reserve(d * n);
  for (std::int64_t v = 0; v < n; ++v) {
    for (std::int64_t r = 0; r < 2 * d; ++r) {
      const bool positive = r < d;
      (positive == sigma.bit(v) ? true_clones : false_clones).push_back(v * 2 * d + r);
    }
  }
  std::shuffle(true_clones.begin(), true_clones.end(), rng);
  std::shuffle(false_clones.begin(), false_clones.end(), rng);

  std::vector<Literal> slots(params.slots());
  std::size_t ti = 0, fi = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j) {
      const bool is_true = (chi[i] >> j) & 1u;
      const std::int64_t clone = is_true ? true_clones[ti++] : false_clones[fi++];
      slots[i * k + j] = clone_literal(clone, d);
    }
  }
  return PlantedSample{Formula(params, std::move(slots)), std::move(sigma), retries};
}

// --- pattern histograms ----------------------------------------------------

std::int64_t PatternCounts::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t PatternCounts::imbalance() const {
  std::int64_t sum = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    sum += counts[c] * (2 * std::popcount(static_cast<PatternCode>(c)) - k);
  }
  return sum;
}

PatternCounts counts_from_distribution(int k, std::span<const double> mu, std::int64_t m) {
  if (k < 1 || k > 20) throw DomainError("pattern width must be in [1, 20]");
  if (mu.size() != (std::size_t{1} << k)) throw DomainError("distribution must have 2^k entries");
  if (m < 1) throw DomainError("m must be positive");
  if (mu[0] != 0.0) throw DomainError("the all-false pattern must have zero mass");
  PatternCounts out{k, std::vector<std::int64_t>(mu.size(), 0)};
  double total = 0.0;
  for (std::size_t c = 0; c < mu.size(); ++c) {
    if (mu[c] < 0.0) throw DomainError("distribution has negative mass");
    total += mu[c];
    const double scaled = mu[c] * double(m);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, double(m))) {
      throw DomainError("m*mu(" + std::to_string(c) + ") = " + std::to_string(scaled) +
                        " is not integral");
    }
    out.counts[c] = static_cast<std::int64_t>(rounded);
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("distribution does not sum to 1");
  return out;
}

PatternCounts round_bar_mu(int k, std::int64_t m) {
  if (k < 3 || k > 20) throw DomainError("round_bar_mu supports 3 <= k <= 20");
  if ((m * k) % 2 != 0) throw DomainError("balanced histograms need m*k even");
  const std::size_t size = std::size_t{1} << k;
  std::vector<double> target(size, 0.0);
  for (std::size_t c = 1; c < size; ++c) target[c] = double(m) * bar_mu(k, static_cast<PatternCode>(c));

  PatternCounts out{k, std::vector<std::int64_t>(size, 0)};
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t c = 1; c < size; ++c) {
    out.counts[c] = static_cast<std::int64_t>(std::floor(target[c]));
    assigned += out.counts[c];
    remainders.emplace_back(target[c] - double(out.counts[c]), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < m; ++i, ++assigned) out.counts[remainders[i].second]++;

  // Each unit move toggles one bit of one clause and shifts the imbalance by 2.
  for (std::int64_t imbalance = out.imbalance(); imbalance != 0; imbalance = out.imbalance()) {
    const bool clear_bit = imbalance > 0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_from = 0, best_to = 0;
    for (std::size_t a = 1; a < size; ++a) {
      if (out.counts[a] == 0) continue;
      for (int j = 0; j < k; ++j) {
        const bool set = (a >> j) & 1u;
        if (set != clear_bit) continue;
        const std::size_t b = a ^ (std::size_t{1} << j);
        if (b == 0) continue;
        const double cost = -2.0 * (double(out.counts[a]) - target[a]) +
                            2.0 * (double(out.counts[b]) - target[b]) + 2.0;
        if (cost < best) {
          best = cost;
          best_from = a;
          best_to = b;
        }
      }
    }
    out.counts[best_from]--;
    out.counts[best_to]++;
  }
  return out;
}

PairedPatternArray sample_paired_patterns(const PatternCounts& counts, Rng& rng) {
  if (counts.counts.size() != (std::size_t{1} << counts.k)) {
    throw DomainError("pattern counts must cover all 2^k codes");
  }
  if (!counts.counts.empty() && counts.counts[0] != 0) {
    throw DomainError("the all-false pattern cannot occur in a satisfying array");
  }
  PairedPatternArray out;
  out.k = counts.k;
  for (std::size_t c = 0; c < counts.counts.size(); ++c) {
    if (counts.counts[c] < 0) throw DomainError("negative pattern count");
    out.first.insert(out.first.end(), counts.counts[c], static_cast<PatternCode>(c));
  }
  out.second = out.first;
  std::shuffle(out.first.begin(), out.first.end(), rng);
  std::shuffle(out.second.begin(), out.second.end(), rng);
  return out;
}

}  // namespace regsat
