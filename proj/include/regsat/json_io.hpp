#pragma once

// JSON views of the library's result types.

#include <json.hpp>

#include "regsat/analytic.hpp"
#include "regsat/counting.hpp"
#include "regsat/cycles.hpp"
#include "regsat/stats.hpp"

namespace regsat {

nlohmann::json to_json(const RateTable& rates);
nlohmann::json to_json(const PatternHistogram& hist, double omega);
/// {"Z": "...", "histogram": [...]?, "overlap": [...]?}; big counts as decimal strings.
nlohmann::json to_json(const CountResult& count, const OverlapCensus* overlap = nullptr, double omega = 3.0);
/// {"L": L, "counts": {"+-": n, ...}} with every pattern of length <= 2L.
nlohmann::json to_json(const CycleCensus& census);
nlohmann::json to_json(const GofResult& gof);
nlohmann::json to_json(const Estimate& est);
nlohmann::json to_json(const MomentReport& report);

}  // namespace regsat
