#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "yieldnet/model.hpp"
#include "yieldnet/payoff.hpp"
#include "yieldnet/supplier_sets.hpp"

namespace yieldnet {

enum class PriceCase { homogeneous, hetero_variance, hetero_mean };

/// Network-level outcome of the homogeneous two-stage equilibrium (w* = 0).
struct HomogeneousOutcome {
  double z = 0.0;                 // delta/mu - (sigma/mu)^2 - c/mu^2
  std::size_t k_star = 0;
  bool may_drop_one = false;      // v(K*) = c: K*-1 active suppliers also admissible
  std::size_t degree = 0;         // floor(1 + mu^2 {z} / c)
  std::optional<std::size_t> degree_if_dropped;  // floor(1 + mu^2 (1 + {z}) / c)
  std::size_t links = 0;
  double welfare = 0.0;           // closed form in z
  double welfare_direct = 0.0;    // expected welfare formula at (K*, K* d)
};

struct PriceEquilibrium {
  PriceCase kind = PriceCase::homogeneous;
  PriceVector w_star;
  std::size_t k_ref = 0;                 // K* (homogeneous, variance) or K*max (mean)
  std::vector<std::size_t> admissible_k;
  std::optional<std::size_t> improved;   // the distinguished supplier
  double raw_price = 0.0;                // formula value before clamping
  bool clamped_negative = false;
  std::optional<std::pair<double, double>> others_interval;  // K*max == 1 corner
  WelfareBreakdown welfare_delta{0, 0, 0, 0, WelfareKind::delta};
  std::optional<HomogeneousOutcome> homogeneous;
};

/// Mean-shift deltas: the component breakdown (retailer reported as 0),
/// the stated closed-form total, and the exact retailer residual left by
/// the floor/ceiling divisibility approximation.
struct HeteroMeanWelfareDelta {
  WelfareBreakdown components{0, 0, 0, 0, WelfareKind::delta};
  double stated_total = 0.0;
  double retailer_residual = 0.0;
};

HomogeneousOutcome homogeneous_outcome(const GameParams& p);

/// w* = 0 with K*, degrees and welfare. Throws InsufficientSuppliers if
/// m < floor(z) and InsufficientRetailers if n cannot host K* d links.
PriceEquilibrium homogeneous_price_equilibrium(const GameParams& p);

/// One supplier with strictly lower variance prices at (sigma2_2 - sigma2_1)/mu - eps,
/// all others at 0. Equal variances fall back to the homogeneous case.
PriceEquilibrium hetero_variance_prices(const GameParams& p);
WelfareBreakdown hetero_variance_welfare_delta(const GameParams& p);

/// One supplier with mean mu + delta prices at
/// delta ((Delta - mu K*max) / (mu + delta) - 1) - eps, others at 0.
/// K*max is evaluated at all-zero prices. Negative formula values are
/// clamped to 0 and flagged.
PriceEquilibrium hetero_mean_prices(const GameParams& p);
HeteroMeanWelfareDelta hetero_mean_welfare_delta(const GameParams& p, std::size_t k_star_selected);

/// Mean shift (mu, delta) for the one-improved-mean structure.
struct MeanShift {
  std::size_t improved;
  double mu;
  double delta;
};
std::optional<MeanShift> mean_shift(const GameParams& p);

/// Chooses the case from the parameter structure and dispatches.
PriceEquilibrium price_equilibrium(const GameParams& p);

struct SupplierDeviation {
  std::size_t supplier = 0;
  double activation = 0.0;
  double current = 0.0;
  double best_price = 0.0;
  double best_payoff = 0.0;
  bool profitable = false;
};

struct PriceDeviationReport {
  bool certified = false;
  double resolution = 0.0;
  std::vector<SupplierDeviation> suppliers;
};

/// Grid search over unilateral price deviations in [0, price bound] with step
/// resolution * bound; a_j is recomputed for every grid point.
PriceDeviationReport supplier_price_deviation_check(const GameParams& p, const PriceVector& w_star,
                                                    double resolution = 1e-3);

}  // namespace yieldnet
