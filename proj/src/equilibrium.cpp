#include "yieldnet/equilibrium.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>

#include "yieldnet/numeric.hpp"
#include "yieldnet/payoff.hpp"
#include "yieldnet/supplier_sets.hpp"

namespace yieldnet {
namespace {

void require_equal_means(const GameParams& p, const char* what) {
  if (!p.equal_means())
    throw Error(ErrorKind::shape_mismatch,
                std::string(what) + " needs equal supplier means; use k_max for heterogeneous means");
}

void require_prices(const GameParams& p, const PriceVector& w) {
  p.check_shape();
  if (w.size() != p.m) throw Error(ErrorKind::invalid_argument, "price vector must have m entries");
}

double margin_scale(const GameParams& p, const PriceVector& w, std::size_t j, double v) {
  return magnitude({v, p.mu[j] * w[j], p.c});
}

/// Tie groups over a ranked list: [begin, end) ranges of equally ranked suppliers.
std::vector<std::pair<std::size_t, std::size_t>> tie_groups(const std::vector<std::size_t>& ranked,
                                                            auto&& tied) {
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  std::size_t begin = 0;
  for (std::size_t pos = 1; pos <= ranked.size(); ++pos) {
    if (pos == ranked.size() || !tied(ranked[begin], ranked[pos])) {
      groups.emplace_back(begin, pos);
      begin = pos;
    }
  }
  return groups;
}

std::vector<double> shares_from_groups(std::size_t m, const std::vector<std::size_t>& ranked,
                                       const std::vector<std::pair<std::size_t, std::size_t>>& groups,
                                       std::size_t slots) {
  std::vector<double> a(m, 0.0);
  for (auto [begin, end] : groups) {
    double share = 0.0;
    if (end <= slots) share = 1.0;
    else if (begin < slots) share = static_cast<double>(slots - begin) / static_cast<double>(end - begin);
    for (std::size_t pos = begin; pos < end; ++pos) a[ranked[pos]] = share;
  }
  return a;
}

std::vector<Link> assign_links(const std::vector<std::size_t>& active, const std::vector<std::size_t>& degrees,
                               LinkPacking packing) {
  std::vector<Link> links;
  if (packing == LinkPacking::packed) {
    for (std::size_t j : active)
      for (std::size_t t = 0; t < degrees[j]; ++t) links.push_back({t, j});
    return links;
  }
  // One fresh retailer per activation, then one fresh retailer per extra link.
  std::size_t next = 0;
  for (std::size_t j : active) links.push_back({next++, j});
  for (std::size_t j : active)
    for (std::size_t t = 1; t < degrees[j]; ++t) links.push_back({next++, j});
  return links;
}

std::uint32_t link_mask(const Network& g, std::size_t i) {
  std::uint32_t mask = 0;
  for (std::size_t j : g.suppliers_of(i)) mask |= 1u << j;
  return mask;
}

std::vector<std::size_t> bits(std::uint32_t mask) {
  std::vector<std::size_t> out;
  while (mask != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

VerificationReport verify_exhaustive(const Network& g, const GameParams& p, const PriceVector& w) {
  if (p.m > kMaxExhaustiveSuppliers) {
    std::ostringstream os;
    os << "exhaustive verification limited to m <= " << kMaxExhaustiveSuppliers << " (m=" << p.m << ")";
    throw Error(ErrorKind::size_limit, os.str());
  }
  VerificationReport report;
  report.mode = Oracle::exhaustive;
  const std::size_t m = p.m;
  const std::uint32_t full = 1u << m;
  std::vector<double> gain(full), slope(full), added_mean(full);
  std::map<std::uint32_t, RetailerCheck> cache;

  for (std::size_t i = 0; i < g.n(); ++i) {
    const std::uint32_t own = link_mask(g, i);
    auto hit = cache.find(own);
    if (hit == cache.end()) {
      std::vector<std::size_t> base_degree(m);
      double base_sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        base_degree[j] = g.degree(j) - ((own >> j) & 1u);
        if (base_degree[j] > 0) base_sum += p.mu[j];
      }
      // payoff(T) = gain[T] - (base_sum + added_mean[T]) * slope[T]
      gain[0] = slope[0] = added_mean[0] = 0.0;
      for (std::uint32_t mask = 1; mask < full; ++mask) {
        const std::uint32_t low = mask & (~mask + 1);
        const auto j = static_cast<std::size_t>(std::countr_zero(mask));
        const double share = static_cast<double>(base_degree[j] + 1);
        gain[mask] = gain[mask ^ low] + (p.delta * p.mu[j] - p.sigma2[j] - p.mu[j] * w[j]) / share - p.c;
        slope[mask] = slope[mask ^ low] + p.mu[j] / share;
        added_mean[mask] = added_mean[mask ^ low] + (base_degree[j] == 0 ? p.mu[j] : 0.0);
      }
      auto payoff = [&](std::uint32_t mask) { return gain[mask] - (base_sum + added_mean[mask]) * slope[mask]; };
      RetailerCheck check;
      check.current = payoff(own);
      std::uint32_t best = own;
      double best_value = check.current;
      for (std::uint32_t mask = 0; mask < full; ++mask) {
        const double value = payoff(mask);
        if (value > best_value) {
          best_value = value;
          best = mask;
        }
      }
      report.evaluated += full;
      check.best_deviation = best_value;
      check.best_links = bits(best);
      check.profitable = definitely_positive(best_value - check.current, magnitude({check.current, best_value}));
      hit = cache.emplace(own, std::move(check)).first;
    }
    RetailerCheck check = hit->second;
    check.retailer = i;
    if (check.profitable) {
      std::ostringstream os;
      os << "retailer " << i << " gains " << (check.best_deviation - check.current) << " by deviating";
      report.failures.push_back(os.str());
    }
    report.retailers.push_back(std::move(check));
  }
  report.certified = report.failures.empty();
  return report;
}

VerificationReport verify_characterized(const Network& g, const GameParams& p, const PriceVector& w) {
  VerificationReport report;
  report.mode = Oracle::characterized;
  const double sum = active_mean_sum(p, g);
  const std::size_t k = g.active_count();
  auto fail = [&](const std::string& s) { report.failures.push_back(s); };

  if (p.equal_means()) {
    const ActiveCount count = active_supplier_count(p, w);
    const bool ok = k == count.k_star || (count.may_drop_one && k + 1 == count.k_star);
    if (!ok) {
      std::ostringstream os;
      os << "active count " << k << " not admissible (K*=" << count.k_star
         << (count.may_drop_one ? ", K*-1 allowed" : "") << ")";
      fail(os.str());
    }
  } else if (k > k_max(p, w)) {
    fail("active count exceeds K*max");
  }
  ++report.evaluated;

  for (std::size_t j = 0; j < p.m; ++j) {
    ++report.evaluated;
    if (g.is_active(j)) {
      const double v = p.value(j, sum);
      const long long expected = std::max(0LL, floor_snap((v - p.mu[j] * w[j]) / p.c));
      if (static_cast<long long>(g.degree(j)) != expected) {
        std::ostringstream os;
        os << "supplier " << j << " has degree " << g.degree(j) << ", expected " << expected;
        fail(os.str());
      }
    } else {
      const double v = p.value(j, sum + p.mu[j]);
      const double entry = v - p.mu[j] * w[j] - p.c;
      if (definitely_positive(entry, margin_scale(p, w, j, v))) {
        std::ostringstream os;
        os << "vacant supplier " << j << " attracts an unlinked retailer (margin " << entry << ")";
        fail(os.str());
      }
    }
  }
  report.certified = report.failures.empty();
  return report;
}

}  // namespace

std::vector<std::size_t> activation_order(const GameParams& p, const PriceVector& w) {
  require_prices(p, w);
  require_equal_means(p, "activation_order");
  std::vector<double> key(p.m);
  for (std::size_t j = 0; j < p.m; ++j) key[j] = p.sigma2[j] + p.mu[j] * w[j];
  std::vector<std::size_t> order(p.m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  // Within a group of tolerance-equal keys, left-limit prices come first.
  const auto groups = tie_groups(order, [&](std::size_t a, std::size_t b) {
    return near_zero(key[a] - key[b], magnitude({key[a], key[b]}));
  });
  for (auto [begin, end] : groups)
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       if (w.is_left_limit(a) != w.is_left_limit(b)) return w.is_left_limit(a);
                       return a < b;
                     });
  return order;
}

ActiveCount active_supplier_count(const GameParams& p, const PriceVector& w) {
  const auto order = activation_order(p, w);
  const double mu = p.mu[0];
  ActiveCount out;
  for (std::size_t j : order) {
    const double v = p.value(j, mu * static_cast<double>(out.k_star + 1));
    const double margin = v - p.mu[j] * w[j] - p.c;
    if (definitely_negative(margin, margin_scale(p, w, j, v))) break;
    ++out.k_star;
  }
  if (out.k_star > 0) {
    const std::size_t j = order[out.k_star - 1];
    const double v = p.value(j, mu * static_cast<double>(out.k_star));
    out.may_drop_one = near_zero(v - p.mu[j] * w[j] - p.c, margin_scale(p, w, j, v));
  }
  return out;
}

std::vector<std::size_t> equilibrium_degrees(const GameParams& p, const PriceVector& w, std::size_t k) {
  require_prices(p, w);
  std::vector<std::size_t> active;
  if (p.equal_means()) {
    const auto order = activation_order(p, w);
    active.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(k, p.m)));
  } else {
    active = choose_active_set(p, w, k);
  }
  return equilibrium_degrees(p, w, active);
}

std::vector<std::size_t> equilibrium_degrees(const GameParams& p, const PriceVector& w,
                                             const std::vector<std::size_t>& active) {
  require_prices(p, w);
  double sum = 0.0;
  for (std::size_t j : active) {
    if (j >= p.m) throw Error(ErrorKind::index_out_of_range, "supplier index out of range");
    sum += p.mu[j];
  }
  std::vector<std::size_t> degrees(p.m, 0);
  for (std::size_t j : active) {
    const double ratio = (p.value(j, sum) - p.mu[j] * w[j]) / p.c;
    degrees[j] = static_cast<std::size_t>(std::max(0LL, floor_snap(ratio)));
  }
  return degrees;
}

EquilibriumSummary greedy_equilibrium(const GameParams& p, const PriceVector& w, LinkPacking packing) {
  require_prices(p, w);
  if (!(p.c > 0.0)) throw Error(ErrorKind::invalid_argument, "link cost c must be positive");
  EquilibriumSummary out;
  std::vector<std::size_t> active;

  // Phase 1: activation.
  if (p.equal_means()) {
    const auto order = activation_order(p, w);
    for (std::size_t j : order) {
      ++out.steps;
      const double v = p.value(j, p.mu[0] * static_cast<double>(active.size() + 1));
      if (definitely_negative(v - p.mu[j] * w[j] - p.c, margin_scale(p, w, j, v))) break;
      active.push_back(j);
    }
  } else {
    active = choose_active_set(p, w, k_max(p, w));
    out.steps += active.size();
  }

  // Phase 2: saturate every active supplier.
  double sum = 0.0;
  for (std::size_t j : active) sum += p.mu[j];
  out.degrees.assign(p.m, 0);
  for (std::size_t j : active) {
    const double net = p.value(j, sum) - p.mu[j] * w[j];
    std::size_t d = 1;
    while (true) {
      ++out.steps;
      const double margin = net / static_cast<double>(d + 1) - p.c;
      if (definitely_negative(margin, magnitude({net / static_cast<double>(d + 1), p.c}))) break;
      ++d;
    }
    out.degrees[j] = d;
  }

  std::size_t links = 0;
  std::size_t widest = 0;
  for (std::size_t d : out.degrees) {
    links += d;
    widest = std::max(widest, d);
  }
  const std::size_t needed = packing == LinkPacking::fresh ? links : widest;
  if (p.n < needed) {
    std::ostringstream os;
    os << "equilibrium needs at least n=" << needed << " retailers (have " << p.n << ")";
    throw Error(ErrorKind::insufficient_retailers, os.str());
  }

  const auto link_list = assign_links(active, out.degrees, packing);
  out.network = Network::from_links(p.n, p.m, link_list);
  out.k = active.size();
  out.activation = activation_likelihoods(p, w);
  out.selected = selection_filter(out.network, p, w);
  return out;
}

double deviation_payoff(const Network& g, const GameParams& p, const PriceVector& w, std::size_t i,
                        std::span<const std::size_t> links) {
  Network h = g;
  for (std::size_t j : g.suppliers_of(i)) h = h.without_link(i, j);
  for (std::size_t j : links) h = h.with_link(i, j);
  return retailer_expected_payoff(h, w, p, i);
}

VerificationReport verify_retailer_nash(const Network& g, const GameParams& p, const PriceVector& w, Oracle mode) {
  require_prices(p, w);
  if (g.m() != p.m) throw Error(ErrorKind::invalid_argument, "network and parameters disagree on m");
  return mode == Oracle::exhaustive ? verify_exhaustive(g, p, w) : verify_characterized(g, p, w);
}

bool selection_filter(const Network& g, const GameParams& p, const PriceVector& w) {
  require_prices(p, w);
  const auto active = g.active_suppliers();
  if (active.empty()) return true;
  const double sum = active_mean_sum(p, g);
  std::size_t worst = active.front();
  for (std::size_t j : active)
    if (compare_net_value(p, w, j, worst, sum) < 0) worst = j;
  for (std::size_t j : g.vacant_suppliers())
    if (compare_net_value(p, w, j, worst, sum) > 0) return false;
  return true;
}

std::vector<double> activation_likelihoods(const GameParams& p, const PriceVector& w) {
  require_prices(p, w);
  if (p.equal_means()) {
    const auto order = activation_order(p, w);
    const std::size_t slots = active_supplier_count(p, w).k_star;
    const auto groups = tie_groups(order, [&](std::size_t a, std::size_t b) {
      return compare_net_value(p, w, a, b, p.mu[0] * static_cast<double>(slots)) == 0;
    });
    return shares_from_groups(p.m, order, groups, slots);
  }
  const std::size_t slots = k_max(p, w);
  const auto chosen = choose_active_set(p, w, slots);
  double sum = 0.0;
  for (std::size_t j : chosen) sum += p.mu[j];
  std::vector<std::size_t> ranked(p.m);
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](std::size_t a, std::size_t b) { return compare_net_value(p, w, a, b, sum) > 0; });
  const auto groups =
      tie_groups(ranked, [&](std::size_t a, std::size_t b) { return compare_net_value(p, w, a, b, sum) == 0; });
  return shares_from_groups(p.m, ranked, groups, slots);
}

}  // namespace yieldnet
