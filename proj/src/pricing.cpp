#include "yieldnet/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "yieldnet/equilibrium.hpp"
#include "yieldnet/numeric.hpp"

namespace yieldnet {
namespace {

long long ceil_snap(double x) { return -floor_snap(-x); }

GameParams with_uniform_variance(const GameParams& p, double sigma2) {
  GameParams q = p;
  std::fill(q.sigma2.begin(), q.sigma2.end(), sigma2);
  return q;
}

std::vector<std::size_t> admissible(const HomogeneousOutcome& h) {
  std::vector<std::size_t> ks{h.k_star};
  if (h.may_drop_one && h.k_star > 0) ks.push_back(h.k_star - 1);
  return ks;
}

}  // namespace

HomogeneousOutcome homogeneous_outcome(const GameParams& p) {
  p.check_shape();
  if (!p.is_homogeneous()) throw Error(ErrorKind::shape_mismatch, "homogeneous outcome needs identical suppliers");
  const double mu = p.mu[0];
  const double s2 = p.sigma2[0];
  const double mu2 = mu * mu;

  HomogeneousOutcome out;
  out.z = p.delta / mu - s2 / mu2 - p.c / mu2;
  const long long floor_z = floor_snap(out.z);
  if (floor_z > static_cast<long long>(p.m)) {
    std::ostringstream os;
    os << "need m >= floor(z) = " << floor_z << " suppliers for an interior equilibrium (m=" << p.m << ")";
    throw Error(ErrorKind::insufficient_suppliers, os.str());
  }
  const PriceVector zero = PriceVector::uniform(p.m, 0.0);
  const ActiveCount count = active_supplier_count(p, zero);
  out.k_star = count.k_star;
  out.may_drop_one = count.may_drop_one;
  if (out.k_star == 0) return out;

  const double fz = frac_snap(out.z);
  out.degree = static_cast<std::size_t>(floor_snap(1.0 + mu2 * fz / p.c));
  if (out.may_drop_one) out.degree_if_dropped = static_cast<std::size_t>(floor_snap(1.0 + mu2 * (1.0 + fz) / p.c));
  out.links = out.k_star * out.degree;

  const double base = p.delta * mu - p.c - mu2 * fz;
  out.welfare = (base - s2) * (base + 2.0 * p.c * frac_snap(mu2 * fz / p.c)) / (2.0 * mu2);
  out.welfare_direct =
      expected_welfare_homogeneous(p, static_cast<double>(out.k_star), static_cast<double>(out.links));
  return out;
}

PriceEquilibrium homogeneous_price_equilibrium(const GameParams& p) {
  PriceEquilibrium eq;
  eq.kind = PriceCase::homogeneous;
  eq.w_star = PriceVector::uniform(p.m, 0.0);
  const HomogeneousOutcome h = homogeneous_outcome(p);
  if (p.n < h.links) {
    std::ostringstream os;
    os << "equilibrium needs at least n=" << h.links << " retailers (have " << p.n << ")";
    throw Error(ErrorKind::insufficient_retailers, os.str());
  }
  eq.k_ref = h.k_star;
  eq.admissible_k = admissible(h);
  eq.homogeneous = h;
  return eq;
}

PriceEquilibrium hetero_variance_prices(const GameParams& p) {
  p.check_shape();
  if (!p.equal_means()) throw Error(ErrorKind::shape_mismatch, "variance case needs equal means");
  if (p.equal_variances()) return homogeneous_price_equilibrium(p);

  const auto lowest = static_cast<std::size_t>(std::min_element(p.sigma2.begin(), p.sigma2.end()) - p.sigma2.begin());
  const double high = p.sigma2[lowest == 0 ? 1 : 0];
  for (std::size_t j = 0; j < p.m; ++j) {
    if (j == lowest) continue;
    if (p.sigma2[j] != high || p.sigma2[j] <= p.sigma2[lowest])
      throw Error(ErrorKind::shape_mismatch,
                  "variance case needs exactly one supplier with strictly lower variance, others equal");
  }
  const double mu = p.mu[0];
  const double gap = high - p.sigma2[lowest];

  PriceEquilibrium eq;
  eq.kind = PriceCase::hetero_variance;
  eq.improved = lowest;
  eq.raw_price = gap / mu;
  eq.w_star = PriceVector::uniform(p.m, 0.0);
  eq.w_star.w[lowest] = eq.raw_price;
  eq.w_star.left_limit[lowest] = true;

  // K* and degrees coincide with the identical-supplier baseline at variance sigma2_2.
  const HomogeneousOutcome baseline = homogeneous_outcome(with_uniform_variance(p, high));
  if (p.n < baseline.links) {
    std::ostringstream os;
    os << "equilibrium needs at least n=" << baseline.links << " retailers (have " << p.n << ")";
    throw Error(ErrorKind::insufficient_retailers, os.str());
  }
  eq.k_ref = active_supplier_count(p, eq.w_star).k_star;
  eq.admissible_k = admissible(baseline);
  eq.homogeneous = baseline;
  eq.welfare_delta = hetero_variance_welfare_delta(p);
  return eq;
}

WelfareBreakdown hetero_variance_welfare_delta(const GameParams& p) {
  p.check_shape();
  const double lowest = *std::min_element(p.sigma2.begin(), p.sigma2.end());
  const double highest = *std::max_element(p.sigma2.begin(), p.sigma2.end());
  const double gap = highest - lowest;
  return WelfareBreakdown::make(0.0, gap, -gap / 2.0, WelfareKind::delta);
}

std::optional<MeanShift> mean_shift(const GameParams& p) {
  p.check_shape();
  if (!p.equal_variances()) return std::nullopt;
  if (p.equal_means()) return MeanShift{0, p.mu[0], 0.0};
  const auto top = static_cast<std::size_t>(std::max_element(p.mu.begin(), p.mu.end()) - p.mu.begin());
  const double base = p.mu[top == 0 ? 1 : 0];
  for (std::size_t j = 0; j < p.m; ++j)
    if (j != top && p.mu[j] != base) return std::nullopt;
  return MeanShift{top, base, p.mu[top] - base};
}

PriceEquilibrium hetero_mean_prices(const GameParams& p) {
  const auto shift = mean_shift(p);
  if (!shift) throw Error(ErrorKind::shape_mismatch, "mean case needs one supplier with a higher mean, others equal");
  if (shift->delta == 0.0) return homogeneous_price_equilibrium(p);

  const double mu = shift->mu;
  const double delta = shift->delta;
  const std::size_t kmax = k_max(p, PriceVector::uniform(p.m, 0.0));

  PriceEquilibrium eq;
  eq.kind = PriceCase::hetero_mean;
  eq.improved = shift->improved;
  eq.k_ref = kmax;
  eq.admissible_k = {kmax};
  eq.raw_price = delta * ((p.delta - mu * static_cast<double>(kmax)) / (mu + delta) - 1.0);
  eq.clamped_negative = definitely_negative(eq.raw_price, magnitude({p.delta * delta}));
  eq.w_star = PriceVector::uniform(p.m, 0.0);
  eq.w_star.w[shift->improved] = std::max(0.0, eq.raw_price);
  eq.w_star.left_limit[shift->improved] = true;
  if (kmax <= 1) {
    const std::size_t other = shift->improved == 0 ? 1 : 0;
    eq.others_interval = std::make_pair(0.0, p.price_bound(other));
  } else {
    eq.welfare_delta = hetero_mean_welfare_delta(p, kmax).components;
  }
  return eq;
}

HeteroMeanWelfareDelta hetero_mean_welfare_delta(const GameParams& p, std::size_t k_star_selected) {
  const auto shift = mean_shift(p);
  if (!shift) throw Error(ErrorKind::shape_mismatch, "mean case needs one supplier with a higher mean, others equal");
  HeteroMeanWelfareDelta out;
  if (shift->delta == 0.0) return out;

  const double mu = shift->mu;
  const double d = shift->delta;
  const double kmax = static_cast<double>(k_max(p, PriceVector::uniform(p.m, 0.0)));
  const double ks = static_cast<double>(k_star_selected);
  const double raw = d * ((p.delta - mu * kmax) / (mu + d) - 1.0);
  const double price = std::max(0.0, raw);

  const double supplier = (mu + d) * price;
  const double consumer = d * (mu * ks + d / 2.0);
  out.components = WelfareBreakdown::make(0.0, supplier, consumer, WelfareKind::delta);
  out.stated_total = d * (p.delta - mu * (kmax - ks + 1.0) - d / 2.0);

  const double c = p.c;
  out.retailer_residual = (p.delta - ks * mu - d) * d - d * (p.delta - mu * (kmax + 1.0) - d) -
                          c * static_cast<double>(floor_snap(d * mu * (kmax - ks + 1.0) / c)) +
                          (ks - 1.0) * (c * static_cast<double>(ceil_snap(d * mu / c)) - d * mu);
  return out;
}

PriceEquilibrium price_equilibrium(const GameParams& p) {
  p.check_shape();
  if (p.is_homogeneous()) return homogeneous_price_equilibrium(p);
  if (p.equal_means()) return hetero_variance_prices(p);
  if (p.equal_variances()) return hetero_mean_prices(p);
  throw Error(ErrorKind::shape_mismatch, "only one-supplier variance or mean improvements are supported");
}

PriceDeviationReport supplier_price_deviation_check(const GameParams& p, const PriceVector& w_star,
                                                    double resolution) {
  if (!(resolution > 0.0) || resolution > 1.0)
    throw Error(ErrorKind::invalid_argument, "grid resolution must lie in (0, 1]");
  PriceDeviationReport report;
  report.resolution = resolution;
  const auto activation = activation_likelihoods(p, w_star);
  const auto steps = static_cast<std::size_t>(std::ceil(1.0 / resolution - kSnapTolerance));

  for (std::size_t j = 0; j < p.m; ++j) {
    SupplierDeviation dev;
    dev.supplier = j;
    dev.activation = activation[j];
    dev.current = supplier_expected_payoff(p, w_star, j, activation[j]);
    dev.best_payoff = dev.current;
    dev.best_price = w_star[j];
    const double bound = std::max(0.0, p.price_bound(j));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double price = bound * static_cast<double>(k) / static_cast<double>(steps);
      const PriceVector trial = w_star.with_price(j, price);
      const double a = activation_likelihoods(p, trial)[j];
      const double payoff = supplier_expected_payoff(p, trial, j, a);
      if (payoff > dev.best_payoff) {
        dev.best_payoff = payoff;
        dev.best_price = price;
      }
      if (bound == 0.0) break;
    }
    dev.profitable = definitely_positive(dev.best_payoff - dev.current, magnitude({dev.current, dev.best_payoff}));
    report.suppliers.push_back(dev);
  }
  report.certified = std::none_of(report.suppliers.begin(), report.suppliers.end(),
                                  [](const SupplierDeviation& d) { return d.profitable; });
  return report;
}

}  // namespace yieldnet
