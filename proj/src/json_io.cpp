#include "regsat/json_io.hpp"

#include <string>

namespace regsat {

using nlohmann::json;

json to_json(const RateTable& rates) {
  json lambda = json::array(), delta = json::array();
  for (int l = 1; l <= rates.max_len(); ++l) {
    for (const SignPattern& s : RateTable::patterns(l)) {
      lambda.push_back({{"s", s.to_string()}, {"value", rates.lambda(s)}});
      delta.push_back({{"s", s.to_string()}, {"value", rates.delta(s)}});
    }
  }
  const double series = rates.series_sum();
  return {
      {"k", rates.k()},
      {"d", rates.d()},
      {"q", rates.q()},
      {"max_len", rates.max_len()},
      {"lambda", std::move(lambda)},
      {"delta", std::move(delta)},
      {"series_sum", std::isfinite(series) ? json(series) : json(nullptr)},
  };
}

namespace {

json mu_json(const MuKey& key) {
  json mu = json::array();
  for (const auto& [code, count] : key) mu.push_back({code, count});
  return mu;
}

}  // namespace

json to_json(const PatternHistogram& hist, double omega) {
  json entries = json::array();
  for (const auto& [key, z] : hist.z_mu) {
    entries.push_back({{"mu", mu_json(key)},
                       {"z_mu", std::to_string(z)},
                       {"distance", mu_distance(key, hist.k, hist.m)},
                       {"in_window", mu_distance(key, hist.k, hist.m) <= omega / std::sqrt(double(hist.m))}});
  }
  return entries;
}

json to_json(const CountResult& count, const OverlapCensus* overlap, double omega) {
  json out = {{"Z", std::to_string(count.z)}};
  if (count.histogram) out["histogram"] = to_json(*count.histogram, omega);
  if (overlap) out["overlap"] = overlap->pairs;
  return out;
}

json to_json(const CycleCensus& census) {
  json counts = json::object();
  for (int l = 1; l <= census.max_len(); ++l) {
    for (std::uint32_t b = 0; b < census.level(l).size(); ++b) {
      counts[SignPattern(l, b).to_string()] = census.at(l, b);
    }
  }
  return {{"L", census.max_len()}, {"counts", std::move(counts)}};
}

json to_json(const GofResult& gof) {
  return {{"chi_sq", gof.chi_sq}, {"dof", gof.dof}, {"p", gof.p}, {"bins", gof.bins}};
}

json to_json(const Estimate& est) { return {{"value", est.value}, {"se", est.se}}; }

json to_json(const MomentReport& report) {
  json factorial = json::array();
  for (const auto& e : report.factorial) factorial.push_back(to_json(e));
  return {{"n", report.sample_count},
          {"mean", report.mean},
          {"var", report.variance},
          {"se", report.standard_error},
          {"factorial", std::move(factorial)}};
}

}  // namespace regsat
