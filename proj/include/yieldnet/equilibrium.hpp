#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "yieldnet/model.hpp"

namespace yieldnet {

/// How phase-2 links are assigned to retailers. `fresh` gives every link its
/// own previously unlinked retailer; `packed` reuses retailers across
/// suppliers (link t of every supplier goes to retailer t).
enum class LinkPacking { fresh, packed };

struct EquilibriumSummary {
  Network network;
  std::size_t k = 0;
  std::vector<std::size_t> degrees;  // per supplier, 0 when vacant
  std::vector<double> activation;    // a_j(w)
  bool selected = false;
  std::size_t steps = 0;             // supplier-link steps taken by the construction
};

struct ActiveCount {
  std::size_t k_star = 0;
  bool may_drop_one = false;
};

/// Suppliers in ascending order of the activation key sigma2_j + mu w_j
/// (equal means required). Exact ties are ordered by left-limit first, then index.
std::vector<std::size_t> activation_order(const GameParams& p, const PriceVector& w);

/// Greedy two-phase construction. Phase 1 activates suppliers one fresh
/// retailer at a time while the next one still pays; phase 2 saturates each
/// active supplier with links. With unequal means the active set comes from
/// the best-supplier sets at K*max instead of a price ranking.
///
/// Throws Error(insufficient_retailers) when n cannot host the links.
EquilibriumSummary greedy_equilibrium(const GameParams& p, const PriceVector& w,
                                      LinkPacking packing = LinkPacking::fresh);

/// K* = min{K : v(K+1) - mu w_(K+1) - c < 0} over the sorted activation
/// order; may_drop_one is set when the K*-th supplier's margin is exactly zero.
ActiveCount active_supplier_count(const GameParams& p, const PriceVector& w);

/// Equilibrium degrees floor((v_j(K) - mu_j w_j) / c) for the K best
/// suppliers; vacant entries are 0.
std::vector<std::size_t> equilibrium_degrees(const GameParams& p, const PriceVector& w, std::size_t k);

/// Same formula for an explicit active set.
std::vector<std::size_t> equilibrium_degrees(const GameParams& p, const PriceVector& w,
                                             const std::vector<std::size_t>& active);

enum class Oracle { exhaustive, characterized };

struct RetailerCheck {
  std::size_t retailer = 0;
  double current = 0.0;
  double best_deviation = 0.0;
  std::vector<std::size_t> best_links;
  bool profitable = false;
};

struct VerificationReport {
  Oracle mode = Oracle::exhaustive;
  bool certified = false;
  std::vector<RetailerCheck> retailers;  // exhaustive mode
  std::vector<std::string> failures;     // human-readable reasons
  std::size_t evaluated = 0;             // deviations (exhaustive) or conditions (characterized) checked
};

/// Expected payoff retailer i would get by replacing its links with `links`,
/// everything else fixed (the active set is recomputed).
double deviation_payoff(const Network& g, const GameParams& p, const PriceVector& w, std::size_t i,
                        std::span<const std::size_t> links);

/// Checks that no retailer has a profitable unilateral deviation.
/// Exhaustive mode enumerates all 2^m link sets per retailer (m <= 20,
/// otherwise Error(size_limit)); characterized mode checks the count,
/// degree, and entry conditions in O(m).
VerificationReport verify_retailer_nash(const Network& g, const GameParams& p, const PriceVector& w,
                                        Oracle mode = Oracle::exhaustive);

/// True iff no vacant supplier offers strictly more net value than the
/// worst active one (lowest prices active, in the homogeneous case).
bool selection_filter(const Network& g, const GameParams& p, const PriceVector& w);

/// a_j(w): 1 for suppliers that beat the marginal slot, 0 for those that lose,
/// slots/ties for suppliers tied at the margin.
std::vector<double> activation_likelihoods(const GameParams& p, const PriceVector& w);

}  // namespace yieldnet
