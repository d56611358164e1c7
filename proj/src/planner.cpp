#include "yieldnet/planner.hpp"

#include <sstream>
#include <vector>

#include "yieldnet/numeric.hpp"
#include "yieldnet/payoff.hpp"
#include "yieldnet/pricing.hpp"

namespace yieldnet {

PlannerSolution planner_optimum(const GameParams& p) {
  p.check_shape();
  if (!p.is_homogeneous()) throw Error(ErrorKind::shape_mismatch, "planner optimum needs identical suppliers");
  const double mu = p.mu[0];
  const double s2 = p.sigma2[0];
  const double mu2 = mu * mu;

  PlannerSolution sol;
  sol.y = p.delta / mu - s2 / (2.0 * mu2) - p.c / mu2;
  const long long floor_y = floor_snap(sol.y);
  if (floor_y > static_cast<long long>(p.m) || floor_y > static_cast<long long>(p.n)) {
    std::ostringstream os;
    os << "optimum K_opt = " << floor_y << " exceeds min(n, m) = " << std::min(p.n, p.m);
    throw Error(ErrorKind::boundary_optimum, os.str());
  }
  if (floor_y < 1) {
    sol.network = Network(p.n, p.m);
    return sol;
  }
  sol.k_opt = static_cast<std::size_t>(floor_y);

  const double lead = p.delta * mu - s2 / 2.0 - p.c;
  const double tail = mu2 * frac_snap(sol.y);
  sol.welfare_opt = (lead * lead - tail * tail) / (2.0 * mu2);
  const auto k = static_cast<double>(sol.k_opt);
  sol.welfare_direct = expected_welfare_homogeneous(p, k, k);

  std::vector<Link> links;
  for (std::size_t j = 0; j < sol.k_opt; ++j) links.push_back({j % p.n, j});
  sol.network = Network::from_links(p.n, p.m, links);

  const std::size_t limit = std::min(p.n, p.m);
  sol.k_enumerated = 0;
  sol.welfare_enumerated = 0.0;
  for (std::size_t kk = 1; kk <= limit; ++kk) {
    const double value = expected_welfare_homogeneous(p, static_cast<double>(kk), static_cast<double>(kk));
    if (definitely_positive(value - sol.welfare_enumerated, magnitude({value, sol.welfare_enumerated}))) {
      sol.k_enumerated = kk;
      sol.welfare_enumerated = value;
    }
  }
  return sol;
}

double price_of_stability(const GameParams& p) {
  const PlannerSolution opt = planner_optimum(p);
  const HomogeneousOutcome eq = homogeneous_outcome(p);
  if (!(opt.welfare_opt > 0.0)) throw Error(ErrorKind::invalid_argument, "planner welfare must be positive");
  return eq.welfare / opt.welfare_opt;
}

}  // namespace yieldnet
