#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "yieldnet/model.hpp"
#include "yieldnet/payoff.hpp"

namespace yieldnet {

enum class SupplyFamily { scaled_beta, uniform, two_point };

std::string_view to_string(SupplyFamily f);
SupplyFamily parse_family(std::string_view name);

/// Per-supplier output law on [0, s_max] matched to (mu_j, sigma2_j).
struct SupplyDistribution {
  SupplyFamily family = SupplyFamily::scaled_beta;
  std::vector<double> mu;
  std::vector<double> sigma2;
  double s_max = 1.0;
  std::uint64_t seed = 0;

  /// Throws Error(infeasible_moments) naming the violated inequality.
  static SupplyDistribution matched(const GameParams& p, SupplyFamily family, std::uint64_t seed);

  std::size_t size() const { return mu.size(); }

  /// Inverse CDF of supplier j at u in (0, 1).
  double quantile(std::size_t j, double u) const;
};

/// Counter-based uniform in (0, 1) keyed by (seed, supplier, draw).
double uniform01(std::uint64_t seed, std::size_t supplier, std::uint64_t draw);

/// Draw number `draw` of all suppliers.
SupplyRealization sample_supply(const SupplyDistribution& dist, std::uint64_t draw);

/// Draws [first, first + count).
std::vector<SupplyRealization> sample_supply(const SupplyDistribution& dist, std::uint64_t first,
                                             std::size_t count);

/// Streaming mean/variance (Welford) with an order-fixed merge.
class RunningStats {
 public:
  void push(double x);
  void merge(const RunningStats& other);
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct StatReport {
  std::string target;
  double closed_form = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  std::uint64_t draws = 0;
  bool pass = false;
};

/// |z| <= 3, or agreement to the snap tolerance when the estimator has no spread.
StatReport make_report(std::string target, double closed_form, const RunningStats& stats);

enum class Target {
  retailer_payoff,
  supplier_payoff,
  retailer_welfare,
  supplier_welfare,
  consumer_surplus,
  total_welfare,
};

std::string_view to_string(Target t);

struct Scenario {
  Network network;
  GameParams params;
  PriceVector prices;
};

struct MonteCarloOptions {
  std::uint64_t draws = 100000;
  std::uint64_t seed = 0;
  SupplyFamily family = SupplyFamily::scaled_beta;
  unsigned threads = 1;
};

/// One target against its closed form. `index` selects the retailer or
/// supplier for the per-agent targets.
StatReport validate_closed_form(Target target, const Scenario& s, const MonteCarloOptions& opt,
                                std::size_t index = 0);

/// Every retailer and active supplier payoff plus the four welfare parts, in one pass.
std::vector<StatReport> validate_all(const Scenario& s, const MonteCarloOptions& opt);

/// Paired welfare differences alt - base under common random numbers: the
/// same uniforms feed both scenarios' quantile functions.
std::vector<StatReport> validate_welfare_delta(const Scenario& base, const Scenario& alt,
                                               const WelfareBreakdown& expected, const MonteCarloOptions& opt);

}  // namespace yieldnet
