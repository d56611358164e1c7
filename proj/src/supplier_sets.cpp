#include "yieldnet/supplier_sets.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include "yieldnet/numeric.hpp"

namespace yieldnet {
namespace {

double mean_sum_of(const GameParams& p, const std::vector<std::size_t>& s) {
  double sum = 0.0;
  for (std::size_t j : s) sum += p.mu[j];
  return sum;
}

std::vector<std::size_t> mask_to_set(std::uint32_t mask) {
  std::vector<std::size_t> s;
  while (mask != 0) {
    s.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return s;
}

bool objective_ties(double a, double best) { return !definitely_negative(a - best, magnitude({a, best})); }

struct MaskScan {
  std::vector<double> best;            // per K
  std::vector<std::vector<std::uint32_t>> feasible_optimal;  // per K
};

MaskScan scan_masks(const GameParams& p, const PriceVector& w, bool collect) {
  const std::size_t m = p.m;
  const std::uint32_t full = 1u << m;
  std::vector<double> mean_sum(full, 0.0);
  std::vector<double> weighted_price(full, 0.0);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    const auto j = static_cast<std::size_t>(std::countr_zero(mask));
    mean_sum[mask] = mean_sum[mask ^ low] + p.mu[j];
    weighted_price[mask] = weighted_price[mask ^ low] + p.mu[j] * w[j];
  }
  MaskScan scan;
  scan.best.assign(m + 1, -std::numeric_limits<double>::infinity());
  scan.feasible_optimal.resize(m + 1);
  std::vector<double> objective(full);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    const double s = mean_sum[mask];
    objective[mask] = (p.delta - s) * s - weighted_price[mask];
    auto k = static_cast<std::size_t>(std::popcount(mask));
    scan.best[k] = std::max(scan.best[k], objective[mask]);
  }
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    auto k = static_cast<std::size_t>(std::popcount(mask));
    if (!objective_ties(objective[mask], scan.best[k])) continue;
    const auto set = mask_to_set(mask);
    if (!is_feasible_set(p, w, set)) continue;
    if (collect || scan.feasible_optimal[k].empty()) scan.feasible_optimal[k].push_back(mask);
  }
  return scan;
}

std::vector<std::size_t> others_by_price(const GameParams& p, const PriceVector& w,
                                         std::optional<std::size_t> skip) {
  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < p.m; ++j)
    if (!skip || *skip != j) others.push_back(j);
  std::stable_sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
    if (w[a] != w[b]) return w[a] < w[b];
    return w.is_left_limit(a) && !w.is_left_limit(b);
  });
  return others;
}

/// Candidate compositions of size k under the one-distinguished structure:
/// the distinguished supplier with the k-1 cheapest others, and the k cheapest others.
std::vector<std::vector<std::size_t>> structured_candidates(const GameParams& p, const PriceVector& w,
                                                            std::size_t k) {
  const auto d = distinguished_supplier(p);
  const auto others = others_by_price(p, w, d);
  std::vector<std::vector<std::size_t>> out;
  if (d && k >= 1 && k - 1 <= others.size()) {
    std::vector<std::size_t> s{*d};
    s.insert(s.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k - 1));
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  if (k <= others.size()) {
    std::vector<std::size_t> s(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
  }
  return out;
}

Enumeration resolve(const GameParams& p, Enumeration mode) {
  if (mode != Enumeration::automatic) return mode;
  if (has_one_distinguished_structure(p)) return Enumeration::structured;
  if (p.m <= kMaxExhaustiveSuppliers) return Enumeration::exhaustive;
  std::ostringstream os;
  os << "best-set enumeration needs m <= " << kMaxExhaustiveSuppliers
     << " or at most one distinguished supplier (m=" << p.m << ")";
  throw Error(ErrorKind::size_limit, os.str());
}

void require_exhaustive_size(const GameParams& p) {
  if (p.m > kMaxExhaustiveSuppliers) {
    std::ostringstream os;
    os << "exhaustive enumeration limited to m <= " << kMaxExhaustiveSuppliers << " (m=" << p.m << ")";
    throw Error(ErrorKind::size_limit, os.str());
  }
}

bool passes_selection(const GameParams& p, const PriceVector& w, const std::vector<std::size_t>& s) {
  if (s.empty()) return true;
  const double sum = mean_sum_of(p, s);
  std::size_t worst = s.front();
  for (std::size_t j : s)
    if (compare_net_value(p, w, j, worst, sum) < 0) worst = j;
  std::vector<bool> in(p.m, false);
  for (std::size_t j : s) in[j] = true;
  for (std::size_t j = 0; j < p.m; ++j)
    if (!in[j] && compare_net_value(p, w, j, worst, sum) > 0) return false;
  return true;
}

/// Calls fn on every size-k subset of {0..m-1} in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t m, std::size_t k, Fn&& fn) {
  if (k > m) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t t = pos; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
}

}  // namespace

double gross_value(const GameParams& p, const PriceVector& w, const std::vector<std::size_t>& s) {
  const double sum = mean_sum_of(p, s);
  double total = 0.0;
  for (std::size_t j : s) total += (p.delta - sum - w[j]) * p.mu[j];
  return total;
}

bool is_feasible_set(const GameParams& p, const PriceVector& w, const std::vector<std::size_t>& s) {
  const double sum = mean_sum_of(p, s);
  for (std::size_t j : s) {
    const double v = p.value(j, sum);
    const double margin = v - p.mu[j] * w[j] - p.c;
    if (definitely_negative(margin, magnitude({v, p.mu[j] * w[j], p.c}))) return false;
  }
  return true;
}

std::optional<std::size_t> distinguished_supplier(const GameParams& p) {
  if (p.is_homogeneous()) return std::nullopt;
  auto same = [&](std::size_t a, std::size_t b) { return p.mu[a] == p.mu[b] && p.sigma2[a] == p.sigma2[b]; };
  if (p.m == 2) return 0;  // with two distinct suppliers either can be called distinguished
  // The common pair is the one shared by suppliers 0 and 1, or 0 and 2.
  std::size_t reference = same(0, 1) ? 0 : (same(0, 2) ? 0 : 1);
  std::optional<std::size_t> odd;
  for (std::size_t j = 0; j < p.m; ++j) {
    if (same(j, reference)) continue;
    if (odd) throw Error(ErrorKind::shape_mismatch, "more than one supplier differs from the rest");
    odd = j;
  }
  return odd;
}

bool has_one_distinguished_structure(const GameParams& p) {
  try {
    (void)distinguished_supplier(p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

int compare_net_value(const GameParams& p, const PriceVector& w, std::size_t a, std::size_t b, double mean_sum) {
  const double va = net_value(p, w, a, mean_sum);
  const double vb = net_value(p, w, b, mean_sum);
  const double scale = magnitude({va, vb, p.value(a, mean_sum), p.value(b, mean_sum)});
  if (definitely_positive(va - vb, scale)) return 1;
  if (definitely_negative(va - vb, scale)) return -1;
  const bool la = w.is_left_limit(a);
  const bool lb = w.is_left_limit(b);
  if (la == lb) return 0;
  return la ? 1 : -1;
}

BestSupplierSets best_supplier_sets(const GameParams& p, const PriceVector& w, std::size_t k, Enumeration mode) {
  p.check_shape();
  BestSupplierSets out;
  out.k = k;
  const Enumeration resolved = resolve(p, mode);
  if (resolved == Enumeration::exhaustive) {
    require_exhaustive_size(p);
    const MaskScan scan = scan_masks(p, w, true);
    if (k <= p.m)
      for (std::uint32_t mask : scan.feasible_optimal[k]) out.sets.push_back(mask_to_set(mask));
    for (std::size_t kk = p.m + 1; kk-- > 0;)
      if (!scan.feasible_optimal[kk].empty()) {
        out.k_max = kk;
        break;
      }
    return out;
  }
  out.representatives_only = true;
  if (k <= p.m) {
    const auto candidates = structured_candidates(p, w, k);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : candidates) best = std::max(best, gross_value(p, w, s));
    for (const auto& s : candidates)
      if (objective_ties(gross_value(p, w, s), best) && is_feasible_set(p, w, s)) out.sets.push_back(s);
  }
  out.k_max = k_max(p, w, Enumeration::structured);
  return out;
}

std::size_t k_max(const GameParams& p, const PriceVector& w, Enumeration mode) {
  p.check_shape();
  const Enumeration resolved = resolve(p, mode);
  if (resolved == Enumeration::exhaustive) {
    require_exhaustive_size(p);
    const MaskScan scan = scan_masks(p, w, false);
    for (std::size_t k = p.m + 1; k-- > 0;)
      if (!scan.feasible_optimal[k].empty()) return k;
    return 0;
  }
  (void)distinguished_supplier(p);  // throws ShapeMismatch if the structure does not hold
  for (std::size_t k = p.m; k >= 1; --k) {
    const auto candidates = structured_candidates(p, w, k);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : candidates) best = std::max(best, gross_value(p, w, s));
    for (const auto& s : candidates)
      if (objective_ties(gross_value(p, w, s), best) && is_feasible_set(p, w, s)) return k;
  }
  return 0;
}

std::vector<std::size_t> choose_active_set(const GameParams& p, const PriceVector& w, std::size_t k) {
  if (k == 0) return {};
  std::vector<std::size_t> chosen;
  double chosen_value = -std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<std::size_t>& s) {
    if (!is_feasible_set(p, w, s) || !passes_selection(p, w, s)) return;
    const double value = gross_value(p, w, s);
    if (chosen.empty() || definitely_positive(value - chosen_value, magnitude({value, chosen_value}))) {
      chosen = s;
      chosen_value = value;
    }
  };
  if (has_one_distinguished_structure(p)) {
    for (const auto& s : structured_candidates(p, w, k)) consider(s);
  } else {
    require_exhaustive_size(p);
    for_each_combination(p.m, k, consider);
  }
  if (!chosen.empty()) return chosen;
  const BestSupplierSets best = best_supplier_sets(p, w, k);
  if (!best.sets.empty()) return best.sets.front();
  std::ostringstream os;
  os << "no feasible supplier set of size " << k;
  throw Error(ErrorKind::invalid_argument, os.str());
}

}  // namespace yieldnet
