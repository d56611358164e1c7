#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "yieldnet/model.hpp"

namespace yieldnet {

/// Upper bound on m for exhaustive subset enumeration.
inline constexpr std::size_t kMaxExhaustiveSuppliers = 20;

enum class Enumeration { automatic, exhaustive, structured };

/// B(K): the size-K supplier subsets that are individually feasible
/// (v_j(s) - mu_j w_j - c >= 0 for every member) and maximize the aggregate
/// gross value sum_{j in s} (delta - sum_{l in s} mu_l - w_j) mu_j.
///
/// The structured path returns one representative per optimal composition
/// (`representatives_only`), since identical suppliers make the full family
/// combinatorially large.
struct BestSupplierSets {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> sets;
  std::size_t k_max = 0;
  bool representatives_only = false;
};

/// Aggregate gross value of a supplier set.
double gross_value(const GameParams& p, const PriceVector& w, const std::vector<std::size_t>& s);

/// True iff every member satisfies v_j(s) - mu_j w_j - c >= 0 (after the tolerance snap).
bool is_feasible_set(const GameParams& p, const PriceVector& w, const std::vector<std::size_t>& s);

/// Index of the single supplier whose (mu, sigma2) differ from all others,
/// if every other supplier shares one (mu, sigma2) pair. Returns
/// std::nullopt if all suppliers are identical; throws ShapeMismatch when
/// the structure does not hold.
std::optional<std::size_t> distinguished_supplier(const GameParams& p);

/// True when at most one supplier differs from the rest in (mu, sigma2).
bool has_one_distinguished_structure(const GameParams& p);

BestSupplierSets best_supplier_sets(const GameParams& p, const PriceVector& w, std::size_t k,
                                    Enumeration mode = Enumeration::automatic);

/// K*max: the largest K with B(K) non-empty (0 if none).
std::size_t k_max(const GameParams& p, const PriceVector& w, Enumeration mode = Enumeration::automatic);

/// Active set of size k used to build an equilibrium when means differ:
/// among feasible size-k sets that pass the selection rule (no vacant
/// supplier offers retailers strictly more net value than the worst active
/// one), the one with the largest gross value; falls back to a member of B(k).
std::vector<std::size_t> choose_active_set(const GameParams& p, const PriceVector& w, std::size_t k);

/// Net value v_j(s) - mu_j w_j of supplier j against an active mean sum.
inline double net_value(const GameParams& p, const PriceVector& w, std::size_t j, double mean_sum) {
  return p.value(j, mean_sum) - p.mu[j] * w[j];
}

/// Compares net values with the tolerance snap; left-limit prices win exact ties.
/// Returns >0 if a is strictly better than b, <0 if worse, 0 if tied.
int compare_net_value(const GameParams& p, const PriceVector& w, std::size_t a, std::size_t b, double mean_sum);

}  // namespace yieldnet
