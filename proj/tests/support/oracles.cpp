#include "oracles.hpp"

#include <cstdlib>

namespace regsat::testing {

NaiveCount naive_count(const Formula& f) {
  const auto& p = f.params();
  NaiveCount out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.n()); ++mask) {
    const Evaluation e = evaluate(f, Assignment::from_mask(mask, p.n()));
    if (!e.satisfied) continue;
    ++out.z;
    std::map<PatternCode, std::int64_t> hist;
    for (PatternCode c : e.patterns) hist[c]++;
    out.z_mu[MuKey(hist.begin(), hist.end())]++;
  }
  return out;
}

ModelParams random_params(Rng& rng, std::int64_t n_lo, std::int64_t n_hi, std::int64_t d_hi, std::int64_t k_hi) {
  for (;;) {
    const std::int64_t k = std::uniform_int_distribution<std::int64_t>(3, k_hi)(rng);
    const std::int64_t d = std::uniform_int_distribution<std::int64_t>(1, d_hi)(rng);
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(std::max(n_lo, k), n_hi)(rng);
    if ((2 * d * n) % k == 0) return ModelParams(n, d, k);
  }
}

Formula formula_from_clauses(std::int64_t n, std::int64_t d, const std::vector<std::vector<int>>& clauses) {
  const ModelParams p(n, d, static_cast<std::int64_t>(clauses.front().size()));
  std::vector<std::int32_t> next_pos(n, 0), next_neg(n, 0);
  std::vector<Literal> slots;
  for (const auto& c : clauses) {
    for (int lit : c) {
      const auto v = static_cast<std::int32_t>(std::abs(lit) - 1);
      auto& next = lit > 0 ? next_pos : next_neg;
      slots.push_back(Literal{v, next[v]++, lit > 0 ? 1 : -1});
    }
  }
  return Formula(p, std::move(slots));
}

}  // namespace regsat::testing
