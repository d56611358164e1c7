#pragma once

#include <cstddef>

#include "yieldnet/model.hpp"

namespace yieldnet {

enum class WelfareKind { expected, realized, delta };

/// Welfare split into retailer, supplier, and consumer parts. `total` is
/// always the plain sum of the three components.
struct WelfareBreakdown {
  double retailer_total = 0.0;
  double supplier_total = 0.0;
  double consumer_surplus = 0.0;
  double total = 0.0;
  WelfareKind kind = WelfareKind::expected;

  static WelfareBreakdown make(double retailer, double supplier, double consumer, WelfareKind kind) {
    return {retailer, supplier, consumer, retailer + supplier + consumer, kind};
  }
};

/// Sum of mean supplies over the suppliers active in g.
double active_mean_sum(const GameParams& p, const Network& g);

/// v_j(S+(g)) for supplier j in network g.
double supplier_value(const GameParams& p, const Network& g, std::size_t j);

/// Realized payoff of retailer i for one supply draw:
///   sum_{j in N(i)} ((delta - T(S) - w_j) S_j / d(j) - c).
double retailer_realized_payoff(const Network& g, const PriceVector& w, const GameParams& p,
                                const SupplyRealization& s, std::size_t i);

/// Expected payoff of retailer i: sum_{j in N(i)} ((v_j(S+) - mu_j w_j) / d(j) - c).
/// The active set is always taken from g itself.
double retailer_expected_payoff(const Network& g, const PriceVector& w, const GameParams& p, std::size_t i);

/// a_j mu_j w_j.
double supplier_expected_payoff(const GameParams& p, const PriceVector& w, std::size_t j, double activation);

WelfareBreakdown expected_welfare(const Network& g, const GameParams& p, const PriceVector& w);

/// Realized welfare for one draw; active suppliers sell their whole output
/// (activation indicator 1), consumer surplus is T(S)^2 / 2.
WelfareBreakdown realized_welfare(const Network& g, const GameParams& p, const PriceVector& w,
                                  const SupplyRealization& s);

/// Homogeneous closed form mu K (delta - mu K / 2) - K sigma2 / 2 - c |g|.
double expected_welfare_homogeneous(const GameParams& p, double k, double links);

}  // namespace yieldnet
