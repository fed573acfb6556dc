// Command-line front end: closed-form values, formula generation and
// counting, and the Monte Carlo experiments.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "regsat/analytic.hpp"
#include "regsat/counting.hpp"
#include "regsat/cycles.hpp"
#include "regsat/errors.hpp"
#include "regsat/experiments.hpp"
#include "regsat/json_io.hpp"
#include "regsat/model.hpp"
#include "regsat/parallel.hpp"

namespace {

using namespace regsat;
using nlohmann::json;

constexpr int kExitStatFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct Caps {
  bool unsafe = false;
  int max_n() const { return unsafe ? 62 : kDefaultMaxCountN; }
  int max_len() const { return unsafe ? CycleCensus::kMaxLength : 4; }
  void check_reps(std::int64_t reps) const {
    if (reps < 1) throw DomainError("replicate count must be at least 1");
    if (!unsafe && reps > 1'000'000) {
      throw ResourceError("replicate count " + std::to_string(reps) + " exceeds 10^6; pass --unsafe-caps");
    }
  }
  void check_len(int L) const {
    if (L < 1) throw DomainError("cycle length must be at least 1");
    if (L > max_len()) {
      throw ResourceError("cycle length " + std::to_string(L) + " exceeds the cap " + std::to_string(max_len()) +
                          (unsafe ? "" : "; pass --unsafe-caps"));
    }
  }
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + path);
  out << text;
}

struct Output {
  std::string path;
  std::string format = "json";
  bool no_timing = false;
};

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("--out,-o", out.path, "output file (default stdout)");
  cmd->add_option("--format", out.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--no-timing", out.no_timing, "omit the timing object from JSON reports");
}

int finish(const Report& r, const Output& out) {
  if (out.format == "csv") {
    emit(report_csv(r), out.path);
  } else {
    emit(report_json(r, !out.no_timing).dump(2) + "\n", out.path);
  }
  if (const Check* bad = r.first_failure()) {
    std::cerr << "FAIL: " << bad->name << " = " << bad->value << " (target " << bad->target << ", tolerance "
              << bad->tolerance << ")\n";
    return kExitStatFail;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regsat: verification lab for random regular k-SAT"};
  app.require_subcommand(1);
  Caps caps;
  int workers = default_workers();
  app.add_flag("--unsafe-caps", caps.unsafe, "lift the default resource caps");
  app.add_option("--workers", workers, "worker threads (default REGSAT_WORKERS or cores)")
      ->check(CLI::PositiveNumber);

  std::int64_t n = 0, d = 0, k = 0, reps = 1000, m = 0, draws = 0;
  std::uint64_t seed = 1;
  int max_len = 1, ell = 3;
  double omega = 3.0;
  std::string in_path, gen_format = "json";
  bool histogram = false, overlap_census_flag = false;
  std::optional<double> limit_tol;
  std::vector<double> rho_grid;
  Output out;
  int result = 0;

  auto* q_cmd = app.add_subcommand("q", "root q of 2q = 1-(1-q)^k");
  q_cmd->add_option("--k", k)->required();
  q_cmd->callback([&] {
    std::printf("%.10f\n", solve_q(static_cast<int>(k)));
  });

  auto* rates_cmd = app.add_subcommand("rates", "cycle rates lambda_s and tilts delta_s");
  rates_cmd->add_option("--k", k)->required();
  rates_cmd->add_option("--d", d)->required();
  rates_cmd->add_option("--max-len", max_len)->default_val(3);
  rates_cmd->add_option("--out,-o", out.path);
  rates_cmd->callback([&] {
    const RateTable t(static_cast<int>(k), static_cast<int>(d), max_len);
    emit(to_json(t).dump(2) + "\n", out.path);
  });

  auto* gen_cmd = app.add_subcommand("gen", "sample a uniform formula");
  gen_cmd->add_option("--n", n)->required();
  gen_cmd->add_option("--d", d)->required();
  gen_cmd->add_option("--k", k)->required();
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--format", gen_format)->check(CLI::IsMember({"json", "dimacs"}));
  gen_cmd->add_option("--out,-o", out.path);
  gen_cmd->callback([&] {
    const ModelParams p(n, d, k);
    Rng rng = make_stream(seed, 0);
    const Formula f = sample_formula(p, rng);
    emit(gen_format == "dimacs" ? to_dimacs(f) : to_json_text(f), out.path);
  });

  auto* count_cmd = app.add_subcommand("count", "exact count of satisfying assignments");
  count_cmd->add_option("--in", in_path)->required();
  count_cmd->add_flag("--histogram", histogram, "decompose Z by clause-pattern histogram");
  count_cmd->add_flag("--overlap", overlap_census_flag, "pair overlap census");
  count_cmd->add_option("--omega", omega, "window radius factor for the histogram")->default_val(3.0);
  count_cmd->add_option("--out,-o", out.path);
  count_cmd->callback([&] {
    const Formula f = read_formula(read_file(in_path));
    const CountResult c = count_all(f, histogram, caps.max_n());
    std::optional<OverlapCensus> oc;
    if (overlap_census_flag) oc = overlap_census(f, kDefaultMaxPairs, caps.max_n());
    json doc = to_json(c, oc ? &*oc : nullptr, omega);
    doc["params"] = {{"n", f.params().n()}, {"d", f.params().d()}, {"k", f.params().k()}, {"m", f.params().m()}};
    doc["log_normalizer"] = log_normalizer(f.params());
    doc["lnZ_normalized"] = c.z > 0 ? json(std::log(double(c.z)) + log_normalizer(f.params())) : json(nullptr);
    if (histogram) doc["omega"] = omega;
    emit(doc.dump(2) + "\n", out.path);
  });

  auto* cycles_cmd = app.add_subcommand("cycles", "signed cycle census and U statistics");
  cycles_cmd->add_option("--in", in_path)->required();
  cycles_cmd->add_option("--max-len", max_len)->required();
  cycles_cmd->add_option("--out,-o", out.path);
  cycles_cmd->callback([&] {
    caps.check_len(max_len);
    const Formula f = read_formula(read_file(in_path));
    const CycleCensus census = cycle_census(f, max_len, workers);
    json doc = to_json(census);
    const auto& p = f.params();
    if (p.k() >= 3) {
      const RateTable rates(static_cast<int>(p.k()), static_cast<int>(p.d()), max_len);
      json u = json::array();
      for (int l = 1; l <= max_len; ++l) u.push_back({{"ell", l}, {"U", u_statistic(census, rates, l)}});
      doc["U"] = std::move(u);
    }
    emit(doc.dump(2) + "\n", out.path);
  });

  auto* exp_cmd = app.add_subcommand("exp", "Monte Carlo experiments");
  exp_cmd->require_subcommand(1);

  auto campaign = [&] {
    caps.check_reps(reps);
    return CampaignOptions{reps, seed, workers, caps.max_n()};
  };
  auto add_nkd = [&](CLI::App* c) {
    c->add_option("--n", n)->required();
    c->add_option("--d", d)->required();
    c->add_option("--k", k)->required();
    c->add_option("--reps", reps)->default_val(1000);
    c->add_option("--seed", seed)->default_val(1);
    add_output(c, out);
  };

  auto* fm = exp_cmd->add_subcommand("first-moment", "mean of Z against the first-moment formula");
  add_nkd(fm);
  fm->callback([&] { result = finish(run_first_moment(ModelParams(n, d, k), campaign()), out); });

  auto* cp = exp_cmd->add_subcommand("cycle-poisson", "cycle counts against Poisson(lambda_s)");
  add_nkd(cp);
  cp->add_option("--max-len", max_len)->default_val(1);
  cp->callback([&] {
    caps.check_len(max_len);
    result = finish(run_cycle_poisson(ModelParams(n, d, k), max_len, false, campaign()), out);
  });

  auto* pc = exp_cmd->add_subcommand("planted-cycles", "planted cycle counts against (1+delta_s) lambda_s");
  add_nkd(pc);
  pc->add_option("--max-len", max_len)->default_val(1);
  pc->callback([&] {
    caps.check_len(max_len);
    result = finish(run_cycle_poisson(ModelParams(n, d, k), max_len, true, campaign()), out);
  });

  auto* wm = exp_cmd->add_subcommand("w-moments", "moments of the limit variable W_ell");
  wm->add_option("--k", k)->default_val(3);
  wm->add_option("--d", d)->default_val(2);
  wm->add_option("--ell", ell)->default_val(3);
  wm->add_option("--draws", draws)->default_val(100000);
  wm->add_option("--seed", seed)->default_val(1);
  add_output(wm, out);
  wm->callback([&] {
    caps.check_reps(draws);
    caps.check_len(ell);
    result = finish(run_w_moments(static_cast<int>(k), static_cast<int>(d), ell, draws, seed, workers), out);
  });

  auto* as = exp_cmd->add_subcommand("a-stat", "agreement statistic of paired pattern arrays");
  as->add_option("--k", k)->default_val(3);
  as->add_option("--m", m)->required();
  as->add_option("--draws", draws)->default_val(5000);
  as->add_option("--seed", seed)->default_val(1);
  add_output(as, out);
  as->callback([&] {
    caps.check_reps(draws);
    result = finish(run_a_stat(static_cast<int>(k), m, draws, seed, workers), out);
  });

  auto* sm = exp_cmd->add_subcommand("second-moment", "E[Z^2]/E[Z]^2 against its limit");
  add_nkd(sm);
  sm->add_option("--limit-tol", limit_tol, "also check |ratio - limit| <= tolerance");
  sm->callback([&] { result = finish(run_second_moment(ModelParams(n, d, k), campaign(), limit_tol), out); });

  auto* ov = exp_cmd->add_subcommand("overlap", "overlap exponents f and g");
  ov->add_option("--k", k)->required();
  std::int64_t overlap_d = 0;
  ov->add_option("--d", overlap_d, "degree (default: largest admissible)");
  ov->add_option("--rho-grid", rho_grid, "rho11 values in (0, 1/2)")->delimiter(',');
  add_output(ov, out);
  ov->callback([&] {
    if (overlap_d == 0) overlap_d = threshold_info(static_cast<int>(k)).max_degree(static_cast<int>(k));
    if (overlap_d < 1) throw DomainError("no admissible degree for this k; pass --d");
    if (rho_grid.empty()) rho_grid = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
    result = finish(run_overlap(static_cast<int>(k), static_cast<int>(overlap_d), rho_grid), out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStatFail;
  }
  return result;
}
