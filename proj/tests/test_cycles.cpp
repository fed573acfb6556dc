#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "regsat/cycles.hpp"
#include "regsat/errors.hpp"

using namespace regsat;
using doctest::Approx;

namespace {

// Clauses 1 and 2 share x1 and x2; no other pair of clauses shares two
// variables and no clause repeats a variable.
Formula one_four_cycle() {
  return testing::formula_from_clauses(
      9, 1, {{1, 2, 3}, {-1, -2, 4}, {-3, 5, 6}, {-4, 7, 8}, {-5, -7, 9}, {-6, -8, -9}});
}

SignPattern reversed(const SignPattern& s) {
  std::vector<int> e(s.length());
  for (int i = 0; i < s.length(); ++i) e[i] = s.entry(s.length() - 1 - i);
  return SignPattern(e);
}

}  // namespace

TEST_CASE("planted four-cycle fixture") {
  const Formula f = one_four_cycle();
  const CycleCensus c = cycle_census(f, 2);
  CHECK(c.total(1) == 0);
  CHECK(c.total(2) == 1);
  CHECK(c.count(SignPattern::parse("+--+")) == 1);
  CHECK(cycle_census_oracle(f, 2) == c);
  CHECK(cycle_census_oracle(f, 4) == cycle_census(f, 4));
  // the triangle through clauses 3, 5, 6 is the only cycle of length 6
  CHECK(c.max_len() == 2);
  CHECK(cycle_census(f, 3).total(3) >= 1);
}

TEST_CASE("repeated variables inside a clause are the l=1 cycles") {
  // x1 twice positive in clause 1, x2 positive and negative in clause 2
  const Formula f = testing::formula_from_clauses(3, 2, {{1, 1, 3}, {2, -2, -1}, {-1, -3, 3}, {-3, 2, -2}});
  const CycleCensus c = cycle_census(f, 1);
  CHECK(c.count(SignPattern::parse("++")) == 1);
  CHECK(c.count(SignPattern::parse("+-")) == 2);  // x2 in clauses 2 and 4
  CHECK(c.count(SignPattern::parse("-+")) == 1);  // x3 in clause 3, negative slot first
  CHECK(c.count(SignPattern::parse("--")) == 0);
  CHECK(cycle_census_oracle(f, 3) == cycle_census(f, 3));
}

TEST_CASE("census equals the brute-force oracle on random instances") {
  Rng rng(31);
  for (int rep = 0; rep < 120; ++rep) {
    const ModelParams p = testing::random_params(rng, 3, 30, 2, 4);
    const Formula f = sample_formula(p, rng);
    const int L = 1 + rep % 3;
    CHECK(cycle_census(f, L) == cycle_census_oracle(f, L));
  }
}

TEST_CASE("census is independent of the worker count") {
  Rng rng(32);
  const Formula f = sample_formula(ModelParams(300, 2, 3), rng);
  const CycleCensus one = cycle_census(f, 4, 1);
  CHECK(cycle_census(f, 4, 3) == one);
  CHECK(cycle_census(f, 4, 8) == one);
}

TEST_CASE("each geometric cycle is counted once per orientation") {
  Rng rng(33);
  for (int rep = 0; rep < 30; ++rep) {
    const ModelParams p = testing::random_params(rng, 6, 200, 3, 5);
    const Formula f = sample_formula(p, rng);
    const CycleCensus canon = cycle_census(f, 3);
    const CycleCensus both = cycle_census(f, 3, 1, Orientation::Both);
    for (int l = 1; l <= 3; ++l) {
      CHECK(both.total(l) == 2 * canon.total(l));
      std::vector<std::uint64_t> by_t(l + 1, 0), by_t_both(l + 1, 0);
      for (const SignPattern& s : RateTable::patterns(l)) {
        CHECK(both.count(s) == canon.count(s) + canon.count(reversed(s)));
        by_t[s.flips()] += canon.count(s);
        by_t_both[s.flips()] += both.count(s);
      }
      for (int t = 0; t <= l; ++t) CHECK(by_t_both[t] == 2 * by_t[t]);
    }
  }
}

TEST_CASE("census limits") {
  Rng rng(34);
  const Formula f = sample_formula(ModelParams(30, 2, 3), rng);
  CHECK_THROWS_AS(cycle_census(f, 0), DomainError);
  CHECK_THROWS_AS(cycle_census(f, 9), DomainError);
  CHECK_THROWS_AS(cycle_census_oracle(f, 5), DomainError);
  const Formula big = sample_formula(ModelParams(600, 2, 3), rng);
  CHECK_THROWS_AS(cycle_census_oracle(big, 2), ResourceError);
}

TEST_CASE("U statistic") {
  const RateTable rates(3, 2, 3);
  CycleCensus empty(1);
  CHECK(u_statistic(empty, rates, 1) == Approx(-0.2360679774997897).epsilon(1e-12));
  CHECK(u_statistic(empty, rates, 0) == 0.0);
  CycleCensus single(1);
  single.at(1, SignPattern::parse("+-").index()) = 1;
  CHECK(u_statistic(single, rates, 1) == Approx(-0.02413262199944783).epsilon(1e-10));
  CHECK_THROWS_AS(u_statistic(single, rates, 2), DomainError);
  CycleCensus long_census(5);
  CHECK_THROWS_AS(u_statistic(long_census, rates, 4), DomainError);
}

TEST_CASE("walk encodings I(s)") {
  const auto pp = i_s_enumerate(3, 2, SignPattern::parse("++"));
  CHECK(pp.enumerated == 12);
  CHECK(pp.matches_corrected);
  CHECK_FALSE(pp.matches_printed);
  CHECK(pp.printed_form == 72.0);
  CHECK(i_s_enumerate(3, 2, SignPattern::parse("+-")).enumerated == 24);

  for (int k = 3; k <= 4; ++k) {
    for (int d = 1; d <= 3; ++d) {
      const RateTable rates(k, d, 2);
      for (int l = 1; l <= 2; ++l) {
        for (const SignPattern& s : RateTable::patterns(l)) {
          const ISCount c = i_s_enumerate(k, d, s);
          CHECK(c.matches_corrected);
          const double lambda = double(c.enumerated) * std::pow(2.0 * k * d, -l) / (2.0 * l);
          CHECK(std::abs(lambda - rates.lambda(s)) <= 1e-12);
        }
      }
    }
  }
  CHECK_THROWS_AS(i_s_enumerate(8, 9, SignPattern::parse("++")), ResourceError);
  CHECK_THROWS_AS(i_s_enumerate(3, 2, SignPattern::parse("++++++++")), ResourceError);
}
