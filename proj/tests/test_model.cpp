#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "regsat/counting.hpp"
#include "regsat/errors.hpp"
#include "regsat/model.hpp"

using namespace regsat;

TEST_CASE("model parameters") {
  const ModelParams p(15, 2, 3);
  CHECK(p.m() == 20);
  CHECK(p.slots() == 60);
  try {
    ModelParams(5, 2, 3);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("k must divide 2dn") != std::string::npos);
  }
  CHECK_THROWS_AS(ModelParams(2, 3, 3), DomainError);
  CHECK_THROWS_AS(ModelParams(6, 0, 3), DomainError);
  CHECK_THROWS_AS(ModelParams(6, 1, 1), DomainError);
}

TEST_CASE("sampled formulas satisfy the degree and bijection invariants") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const ModelParams p = testing::random_params(rng, 3, 40, 4, 6);
    const Formula f = sample_formula(p, rng);
    CHECK(validate(f).empty());
    std::vector<int> pos(p.n()), neg(p.n());
    for (const Literal& lit : f.slots()) (lit.sign > 0 ? pos : neg)[lit.var]++;
    for (std::int64_t v = 0; v < p.n(); ++v) {
      CHECK(pos[v] == p.d());
      CHECK(neg[v] == p.d());
    }
    for (std::int64_t s = 0; s < p.slots(); ++s) {
      const Literal& lit = f.slots()[s];
      CHECK(f.slot_of(lit.var, lit.copy, lit.sign) == s);
    }
  }
}

TEST_CASE("literal balance vanishes") {
  Rng rng(12);
  for (int rep = 0; rep < 500; ++rep) {
    const ModelParams p = testing::random_params(rng, 3, 60, 3, 5);
    const Formula f = sample_formula(p, rng);
    CHECK(literal_balance(f, Assignment::random(p.n(), rng)) == 0);
  }
}

TEST_CASE("sampling is deterministic per stream") {
  const ModelParams p(30, 2, 3);
  Rng a = make_stream(99, 4), b = make_stream(99, 4), c = make_stream(99, 5);
  const Formula fa = sample_formula(p, a), fb = sample_formula(p, b), fc = sample_formula(p, c);
  CHECK(fa == fb);
  CHECK_FALSE(fa == fc);
  Rng pa = make_stream(7, 0), pb = make_stream(7, 0);
  const PlantedSample sa = sample_planted(p, pa), sb = sample_planted(p, pb);
  CHECK(sa.formula == sb.formula);
  CHECK(sa.assignment == sb.assignment);
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("uniform slot marginals") {
  // each slot takes each of the 12 clones with probability 1/12
  const ModelParams p(6, 1, 3);
  constexpr int kReps = 100000;
  std::vector<std::vector<int>> hits(p.slots(), std::vector<int>(p.slots(), 0));
  Rng rng(13);
  for (int r = 0; r < kReps; ++r) {
    const Formula f = sample_formula(p, rng);
    for (std::int64_t s = 0; s < p.slots(); ++s) hits[s][clone_id(f.slots()[s], p.d())]++;
  }
  const double pr = 1.0 / 12.0;
  const double se = std::sqrt(pr * (1 - pr) / kReps);
  int outside = 0;
  for (const auto& row : hits) {
    for (int h : row) outside += std::abs(double(h) / kReps - pr) > 3 * se;
  }
  // 144 cells at 3 SE: a handful of exceedances is expected
  CHECK(outside <= 6);
  for (const auto& row : hits) {
    for (int h : row) CHECK(std::abs(double(h) / kReps - pr) <= 5 * se);
  }
}

TEST_CASE("planted samples") {
  Rng rng(14);
  for (int rep = 0; rep < 100; ++rep) {
    const ModelParams p = testing::random_params(rng, 3, 80, 3, 6);
    const PlantedSample s = sample_planted(p, rng);
    CHECK(validate(s.formula).empty());
    const Evaluation e = evaluate(s.formula, s.assignment);
    CHECK(e.satisfied);
    std::int64_t trues = 0;
    for (PatternCode c : e.patterns) trues += std::popcount(c);
    CHECK(trues == p.d() * p.n());
  }
  CHECK_THROWS_AS(sample_planted(ModelParams(60, 2, 3), rng, 0), SamplingError);
}

TEST_CASE("planted clause patterns follow the tilted law") {
  const ModelParams p(300, 2, 3);  // m = 400 clauses per sample
  std::vector<double> freq(8, 0.0);
  std::int64_t clauses = 0;
  Rng rng(15);
  while (clauses < 100000) {
    const PlantedSample s = sample_planted(p, rng);
    for (PatternCode c : evaluate(s.formula, s.assignment).patterns) freq[c] += 1.0;
    clauses += p.m();
  }
  CHECK(freq[0] == 0.0);
  for (PatternCode c = 1; c < 8; ++c) {
    const double pr = bar_mu(3, c);
    const double se = std::sqrt(pr * (1 - pr) / double(clauses));
    CHECK(std::abs(freq[c] / double(clauses) - pr) <= 3 * se);
  }
}

TEST_CASE("validation reports") {
  const ModelParams p(3, 2, 3);
  Rng rng(16);
  const Formula base = sample_formula(p, rng);
  std::vector<Literal> slots(base.slots().begin(), base.slots().end());
  CHECK(validate(p, slots).empty());

  auto dup = slots;
  dup[1] = dup[0];
  const auto r1 = validate(p, dup);
  REQUIRE_FALSE(r1.empty());
  bool clone_twice = false;
  for (const auto& v : r1) clone_twice |= v.find("clone used twice") != std::string::npos;
  CHECK(clone_twice);
  CHECK_THROWS_AS(Formula(p, dup), FormatError);

  // turn a negative occurrence of x1 into an extra positive one
  auto deg = slots;
  for (auto& lit : deg) {
    if (lit.var == 0 && lit.sign < 0 && lit.copy == 0) {
      lit.sign = 1;
      lit.copy = 1;
      break;
    }
  }
  bool degree = false;
  for (const auto& v : validate(p, deg)) degree |= v.rfind("degree", 0) == 0 && v.find("x1") != std::string::npos;
  CHECK(degree);

  auto out_of_range = slots;
  out_of_range[0].var = 7;
  CHECK_FALSE(validate(p, out_of_range).empty());
  CHECK_FALSE(validate(p, std::span<const Literal>(slots).first(5)).empty());
}

TEST_CASE("JSON round trip") {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const ModelParams p = testing::random_params(rng, 3, 40, 3, 5);
    const Formula f = sample_formula(p, rng);
    const std::string text = to_json_text(f);
    CHECK(formula_from_json_text(text) == f);
    CHECK(read_formula(text) == f);
    CHECK(to_json_text(formula_from_json_text(text)) == text);
  }
  CHECK_THROWS_AS(formula_from_json_text("{"), FormatError);
  CHECK_THROWS_AS(formula_from_json_text(R"({"params":{"n":3,"d":2,"k":3},"slots":[]})"), FormatError);
  CHECK_THROWS_AS(formula_from_json_text(R"({"params":{"n":5,"d":2,"k":3},"slots":[]})"), FormatError);
}

TEST_CASE("DIMACS export and import") {
  const Formula f = testing::formula_from_clauses(3, 1, {{1, -2, 3}, {-1, 2, -3}});
  const std::string text = to_dimacs(f);
  CHECK(text.find("p cnf 3 2\n") != std::string::npos);
  CHECK(text.find("1 -2 3 0\n") != std::string::npos);
  CHECK(formula_from_dimacs(text) == f);
  CHECK(formula_from_dimacs(text, 1) == f);

  Rng rng(18);
  for (int rep = 0; rep < 50; ++rep) {
    const ModelParams p = testing::random_params(rng, 3, 40, 3, 5);
    const Formula g = sample_formula(p, rng);
    const Formula back = read_formula(to_dimacs(g));
    CHECK(back.params() == p);
    // only copy indices may differ
    for (std::int64_t s = 0; s < p.slots(); ++s) {
      CHECK(back.slots()[s].var == g.slots()[s].var);
      CHECK(back.slots()[s].sign == g.slots()[s].sign);
    }
    if (p.n() <= 16) CHECK(count_all(back).z == count_all(g).z);
  }

  const std::string bad = "p cnf 3 4\n1 2 3 0\n1 -2 -3 0\n1 -1 2 0\n-2 3 -3 0\n";
  try {
    formula_from_dimacs(bad, 2);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("x1") != std::string::npos);
  }
  CHECK_THROWS_AS(formula_from_dimacs("1 2 3 0\n"), FormatError);
  CHECK_THROWS_AS(formula_from_dimacs("p cnf 3 2\n1 -2 3 0\n-1 2 -3\n"), FormatError);
  CHECK_THROWS_AS(formula_from_dimacs("p cnf 3 2\n1 -2 3 0\n-1 2 0\n"), FormatError);
}

TEST_CASE("rounded tilted histograms are balanced and close") {
  for (int k = 3; k <= 8; ++k) {
    for (std::int64_t m : {2, 10, 101, 2000, 12345}) {
      if ((m * k) % 2) continue;
      const PatternCounts c = round_bar_mu(k, m);
      CHECK(c.total() == m);
      CHECK(c.imbalance() == 0);
      CHECK(c.counts[0] == 0);
      double sq = 0.0;
      for (PatternCode code = 1; code < (PatternCode{1} << k); ++code) {
        CHECK(c.counts[code] >= 0);
        const double diff = double(c.counts[code]) / double(m) - bar_mu(k, code);
        sq += diff * diff;
      }
      CHECK(std::sqrt(sq) <= 3.0 / std::sqrt(double(m)));
    }
  }
  CHECK_THROWS_AS(round_bar_mu(3, 3), DomainError);
}

TEST_CASE("paired pattern arrays") {
  const PatternCounts c = round_bar_mu(3, 2000);
  Rng rng(19);
  const PairedPatternArray a = sample_paired_patterns(c, rng);
  CHECK(a.rows() == 2000);
  std::vector<std::int64_t> h1(8, 0), h2(8, 0);
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    h1[a.first[i]]++;
    h2[a.second[i]]++;
  }
  CHECK(h1 == c.counts);
  CHECK(h2 == c.counts);

  PatternCounts one{3, std::vector<std::int64_t>(8, 0)};
  one.counts[0b101] = 1;
  const PairedPatternArray single = sample_paired_patterns(one, rng);
  CHECK(single.first == std::vector<PatternCode>{0b101});
  CHECK(single.second == std::vector<PatternCode>{0b101});
  CHECK(a_statistic(single) == 2);

  std::vector<double> mu(8, 0.0);
  mu[1] = 0.5;
  mu[6] = 0.5;
  CHECK(counts_from_distribution(3, mu, 4).counts[6] == 2);
  CHECK_THROWS_AS(counts_from_distribution(3, mu, 3), DomainError);
  mu[0] = 0.1;
  CHECK_THROWS_AS(counts_from_distribution(3, mu, 4), DomainError);
}
