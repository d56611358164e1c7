#pragma once

#include <cstddef>

#include "yieldnet/model.hpp"

namespace yieldnet {

/// Welfare-maximizing network for identical suppliers: K_opt suppliers with
/// one link each, placed on retailer j mod n.
struct PlannerSolution {
  std::size_t k_opt = 0;        // floor(y)
  double y = 0.0;               // delta/mu - sigma2/(2 mu^2) - c/mu^2
  double welfare_opt = 0.0;     // closed form at K_opt
  double welfare_direct = 0.0;  // expected welfare formula at (K_opt, K_opt links)
  Network network;
  // Integer argmax of the welfare parabola found by enumeration. It can
  // differ from floor(y) by one when {y} > 1/2.
  std::size_t k_enumerated = 0;
  double welfare_enumerated = 0.0;
};

/// Throws Error(boundary_optimum) when K_opt exceeds n or m, and
/// Error(shape_mismatch) for non-identical suppliers.
PlannerSolution planner_optimum(const GameParams& p);

/// Equilibrium welfare over planner welfare.
double price_of_stability(const GameParams& p);

}  // namespace yieldnet
