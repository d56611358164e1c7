#include "yieldnet/payoff.hpp"

namespace yieldnet {

double active_mean_sum(const GameParams& p, const Network& g) {
  double sum = 0.0;
  for (std::size_t j = 0; j < g.m(); ++j)
    if (g.is_active(j)) sum += p.mu[j];
  return sum;
}

double supplier_value(const GameParams& p, const Network& g, std::size_t j) {
  return p.value(j, active_mean_sum(p, g));
}

double retailer_realized_payoff(const Network& g, const PriceVector& w, const GameParams& p,
                                const SupplyRealization& s, std::size_t i) {
  const double market_price = p.delta - s.total_active(g);
  double u = 0.0;
  for (std::size_t j : g.suppliers_of(i)) {
    const double share = s.s.at(j) / static_cast<double>(g.degree(j));
    u += (market_price - w[j]) * share - p.c;
  }
  return u;
}

double retailer_expected_payoff(const Network& g, const PriceVector& w, const GameParams& p, std::size_t i) {
  const double mean_sum = active_mean_sum(p, g);
  double u = 0.0;
  for (std::size_t j : g.suppliers_of(i))
    u += (p.value(j, mean_sum) - p.mu[j] * w[j]) / static_cast<double>(g.degree(j)) - p.c;
  return u;
}

double supplier_expected_payoff(const GameParams& p, const PriceVector& w, std::size_t j, double activation) {
  return activation * p.mu.at(j) * w[j];
}

WelfareBreakdown expected_welfare(const Network& g, const GameParams& p, const PriceVector& w) {
  const double mean_sum = active_mean_sum(p, g);
  double retailer = 0.0;
  double supplier = 0.0;
  double variance_sum = 0.0;
  for (std::size_t j = 0; j < g.m(); ++j) {
    if (!g.is_active(j)) continue;
    const double revenue = p.mu[j] * w[j];
    retailer += p.value(j, mean_sum) - revenue - p.c * static_cast<double>(g.degree(j));
    supplier += revenue;
    variance_sum += p.sigma2[j];
  }
  const double consumer = 0.5 * (mean_sum * mean_sum + variance_sum);
  return WelfareBreakdown::make(retailer, supplier, consumer, WelfareKind::expected);
}

WelfareBreakdown realized_welfare(const Network& g, const GameParams& p, const PriceVector& w,
                                  const SupplyRealization& s) {
  const double total_supply = s.total_active(g);
  double retailer = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) retailer += retailer_realized_payoff(g, w, p, s, i);
  double supplier = 0.0;
  for (std::size_t j = 0; j < g.m(); ++j)
    if (g.is_active(j)) supplier += s.s[j] * w[j];
  const double consumer = 0.5 * total_supply * total_supply;
  return WelfareBreakdown::make(retailer, supplier, consumer, WelfareKind::realized);
}

double expected_welfare_homogeneous(const GameParams& p, double k, double links) {
  const double mu = p.mu[0];
  return mu * k * (p.delta - mu * k / 2.0) - k * p.sigma2[0] / 2.0 - p.c * links;
}

}  // namespace yieldnet
