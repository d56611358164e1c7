#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "yieldnet/errors.hpp"

namespace yieldnet {

/// Market and population parameters of a supply chain.
///
/// Supplier moments are always stored per supplier; the homogeneous case is a
/// vector of equal entries. `delta` is the inverse-demand intercept and
/// defaults to m * s_max when built through the factories.
struct GameParams {
  std::size_t n = 0;  // retailers
  std::size_t m = 0;  // suppliers
  double s_max = 1.0;
  double delta = 0.0;
  std::vector<double> mu;
  std::vector<double> sigma2;
  double c = 0.0;

  static GameParams homogeneous(std::size_t n, std::size_t m, double s_max, double mu, double sigma2,
                                double c, std::optional<double> delta = std::nullopt);
  static GameParams heterogeneous(std::size_t n, std::size_t m, double s_max, std::vector<double> mu,
                                  std::vector<double> sigma2, double c,
                                  std::optional<double> delta = std::nullopt);

  /// Throws Error(invalid_argument) when vector sizes or counts are inconsistent.
  void check_shape() const;

  bool equal_means() const;
  bool equal_variances() const;
  bool is_homogeneous() const { return equal_means() && equal_variances(); }

  /// Supplier value v_j(s) = (delta - sum_{l in s} mu_l) * mu_j - sigma2_j,
  /// given the mean-supply sum of the active set s.
  double value(std::size_t j, double active_mean_sum) const {
    return (delta - active_mean_sum) * mu[j] - sigma2[j];
  }

  /// Homogeneous-case v(K) = mu (delta - mu K) - sigma2, using supplier 0's moments.
  double value_homogeneous(double k) const { return mu[0] * (delta - mu[0] * k) - sigma2[0]; }

  /// Largest price at which supplier j can still be linked in the best case
  /// (alone in the market, one link): (v_j({j}) - c) / mu_j.
  double price_bound(std::size_t j) const { return (value(j, mu[j]) - c) / mu[j]; }

  bool operator==(const GameParams&) const = default;
};

/// Per-supplier wholesale prices. `left_limit[j]` marks a strategic price
/// w_j - eps with eps -> 0+: arithmetic uses w_j, comparisons treat it as
/// strictly below w_j.
struct PriceVector {
  std::vector<double> w;
  std::vector<bool> left_limit;

  PriceVector() = default;
  explicit PriceVector(std::vector<double> prices);
  static PriceVector uniform(std::size_t m, double price);

  std::size_t size() const { return w.size(); }
  double operator[](std::size_t j) const { return w[j]; }
  bool is_left_limit(std::size_t j) const { return j < left_limit.size() && left_limit[j]; }

  /// Copy with supplier j's price replaced by an ordinary (non-limit) price.
  PriceVector with_price(std::size_t j, double price) const;

  bool operator==(const PriceVector&) const = default;
};

struct Link {
  std::size_t retailer;
  std::size_t supplier;
  auto operator<=>(const Link&) const = default;
};

/// Bipartite retailer-supplier link structure. Values are immutable; the
/// mutators return new networks.
class Network {
 public:
  Network() = default;
  Network(std::size_t n, std::size_t m);

  /// Builds from a link list. Throws on out-of-range indices or duplicates.
  static Network from_links(std::size_t n, std::size_t m, std::span<const Link> links);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }

  std::size_t degree(std::size_t j) const { return degree_.at(j); }
  std::span<const std::size_t> degrees() const { return degree_; }
  std::span<const std::size_t> suppliers_of(std::size_t i) const { return retailer_links_.at(i); }
  std::vector<std::size_t> retailers_of(std::size_t j) const;
  bool has_link(std::size_t i, std::size_t j) const;

  /// S+(g), ascending.
  std::vector<std::size_t> active_suppliers() const;
  /// S0(g), ascending.
  std::vector<std::size_t> vacant_suppliers() const;
  bool is_active(std::size_t j) const { return degree_.at(j) > 0; }
  std::size_t active_count() const { return active_count_; }
  std::size_t link_count() const { return link_count_; }
  std::vector<Link> links() const;

  Network with_link(std::size_t i, std::size_t j) const;
  Network without_link(std::size_t i, std::size_t j) const;

  bool operator==(const Network&) const = default;

 private:
  void check_indices(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<std::size_t>> retailer_links_;  // sorted supplier ids
  std::vector<std::size_t> degree_;
  std::size_t active_count_ = 0;
  std::size_t link_count_ = 0;
};

Network build_network(std::size_t n, std::size_t m, std::span<const Link> links);
Network add_link(const Network& g, std::size_t i, std::size_t j);
Network remove_link(const Network& g, std::size_t i, std::size_t j);

/// One draw of all suppliers' realized output.
struct SupplyRealization {
  std::vector<double> s;

  /// T(S): total realized supply of the suppliers active in g.
  double total_active(const Network& g) const;
};

enum class ViolationKind {
  shape,
  mean_range,
  negative_variance,
  moment_feasibility,
  link_cost,
  negative_price,
  price_bound,
};

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> supplier;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Checks the standing assumptions on parameters (and prices, if given).
/// Moment feasibility sigma2_j <= mu_j (s_max - mu_j) is only checked when
/// moment-matched sampling is requested.
ValidationReport validate_params(const GameParams& p, const PriceVector* w = nullptr,
                                 bool moment_matched_sampling = false);

}  // namespace yieldnet
