#pragma once

#include <string>

#include <json.hpp>

#include "yieldnet/equilibrium.hpp"
#include "yieldnet/model.hpp"
#include "yieldnet/montecarlo.hpp"
#include "yieldnet/payoff.hpp"
#include "yieldnet/planner.hpp"
#include "yieldnet/pricing.hpp"

namespace yieldnet {

using json = nlohmann::json;

// GameParams: {"n", "m", "s_max", "delta", "mu", "sigma2", "c"}; mu and
// sigma2 may be scalars (broadcast to m) or arrays of length m.
json to_json(const GameParams& p);
GameParams params_from_json(const json& j);

// Network: {"n", "m", "links": [[i, j], ...]}. Links may also be objects
// {"retailer": i, "supplier": j}. n and m default to the given values.
json to_json(const Network& g);
Network network_from_json(const json& j, std::size_t n = 0, std::size_t m = 0);

// PriceVector: {"w": [...], "left_limit": [...]} or a plain array.
json to_json(const PriceVector& w);
PriceVector prices_from_json(const json& j);

json to_json(const WelfareBreakdown& wb);
json to_json(const EquilibriumSummary& s);
json to_json(const VerificationReport& r);
json to_json(const HomogeneousOutcome& h);
json to_json(const PlannerSolution& s);
json to_json(const PriceEquilibrium& e);
json to_json(const PriceDeviationReport& r);
json to_json(const StatReport& r);
json to_json(const ValidationReport& r);

std::string_view to_string(PriceCase c);
std::string_view to_string(Oracle o);
std::string_view to_string(ViolationKind k);

json read_json_file(const std::string& path);

}  // namespace yieldnet
