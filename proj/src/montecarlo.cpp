#include "yieldnet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "yieldnet/numeric.hpp"

namespace yieldnet {
namespace {

constexpr std::uint64_t kBlock = 4096;

using BetaPolicy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

[[noreturn]] void infeasible(std::size_t j, const std::string& what) {
  std::ostringstream os;
  os << "supplier " << j << ": " << what;
  throw Error(ErrorKind::infeasible_moments, os.str());
}

/// Calls fn(draw, out) for every draw and accumulates `width` observables per
/// block; blocks are merged in index order so the result does not depend on
/// the thread count.
std::vector<RunningStats> run_blocks(std::uint64_t draws, unsigned threads, std::size_t width,
                                     const std::function<void(std::uint64_t, std::vector<double>&)>& fn) {
  const std::uint64_t blocks = (draws + kBlock - 1) / kBlock;
  std::vector<std::vector<RunningStats>> per_block(blocks, std::vector<RunningStats>(width));
  auto work = [&](unsigned t, unsigned stride) {
    std::vector<double> out(width);
    for (std::uint64_t b = t; b < blocks; b += stride) {
      const std::uint64_t end = std::min(draws, (b + 1) * kBlock);
      for (std::uint64_t d = b * kBlock; d < end; ++d) {
        fn(d, out);
        for (std::size_t k = 0; k < width; ++k) per_block[b][k].push(out[k]);
      }
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  std::vector<RunningStats> total(width);
  for (const auto& block : per_block)
    for (std::size_t k = 0; k < width; ++k) total[k].merge(block[k]);
  return total;
}

SupplyRealization draw_active(const SupplyDistribution& dist, const Network& g, std::uint64_t draw) {
  SupplyRealization s;
  s.s.assign(dist.mu.begin(), dist.mu.end());
  for (std::size_t j = 0; j < dist.size(); ++j)
    if (g.is_active(j)) s.s[j] = dist.quantile(j, uniform01(dist.seed, j, draw));
  return s;
}

}  // namespace

std::string_view to_string(SupplyFamily f) {
  switch (f) {
    case SupplyFamily::scaled_beta: return "beta";
    case SupplyFamily::uniform: return "uniform";
    case SupplyFamily::two_point: return "two_point";
  }
  return "?";
}

SupplyFamily parse_family(std::string_view name) {
  if (name == "beta" || name == "scaled_beta" || name == "scaled-beta") return SupplyFamily::scaled_beta;
  if (name == "uniform") return SupplyFamily::uniform;
  if (name == "two_point" || name == "two-point") return SupplyFamily::two_point;
  throw Error(ErrorKind::invalid_argument, "unknown supply family '" + std::string(name) + "'");
}

SupplyDistribution SupplyDistribution::matched(const GameParams& p, SupplyFamily family, std::uint64_t seed) {
  p.check_shape();
  SupplyDistribution d;
  d.family = family;
  d.mu = p.mu;
  d.sigma2 = p.sigma2;
  d.s_max = p.s_max;
  d.seed = seed;
  for (std::size_t j = 0; j < p.m; ++j) {
    const double mu = p.mu[j];
    const double s2 = p.sigma2[j];
    if (!(mu > 0.0) || mu > p.s_max) infeasible(j, "mean must lie in (0, s_max]");
    if (s2 < 0.0) infeasible(j, "variance must be nonnegative");
    if (s2 == 0.0) continue;
    const double bound = mu * (p.s_max - mu);
    switch (family) {
      case SupplyFamily::scaled_beta:
        if (!(s2 < bound)) infeasible(j, "scaled beta needs sigma2 < mu (s_max - mu)");
        break;
      case SupplyFamily::uniform: {
        const double half = std::sqrt(3.0 * s2);
        if (mu - half < -kSnapTolerance * p.s_max || mu + half > p.s_max * (1.0 + kSnapTolerance))
          infeasible(j, "uniform needs mu -+ sqrt(3 sigma2) inside [0, s_max]");
        break;
      }
      case SupplyFamily::two_point:
        if (s2 > bound * (1.0 + kSnapTolerance)) infeasible(j, "two-point needs sigma2 <= mu (s_max - mu)");
        break;
    }
  }
  return d;
}

double SupplyDistribution::quantile(std::size_t j, double u) const {
  const double mean = mu[j];
  const double var = sigma2[j];
  if (var == 0.0) return mean;
  switch (family) {
    case SupplyFamily::scaled_beta: {
      const double m1 = mean / s_max;
      const double v1 = var / (s_max * s_max);
      const double common = m1 * (1.0 - m1) / v1 - 1.0;
      return s_max * boost::math::ibeta_inv(m1 * common, (1.0 - m1) * common, u, BetaPolicy());
    }
    case SupplyFamily::uniform: {
      const double half = std::sqrt(3.0 * var);
      return std::clamp(mean - half + 2.0 * half * u, 0.0, s_max);
    }
    case SupplyFamily::two_point: {
      const double sd = std::sqrt(var);
      double low = mean - sd;
      double high = mean + sd;
      double p_high = 0.5;
      if (low < 0.0) {
        low = 0.0;
        high = mean + var / mean;
        p_high = mean * mean / (mean * mean + var);
      } else if (high > s_max) {
        const double room = s_max - mean;
        low = mean - var / room;
        high = s_max;
        p_high = var / (var + room * room);
      }
      return u < 1.0 - p_high ? low : high;
    }
  }
  return mean;
}

double uniform01(std::uint64_t seed, std::size_t supplier, std::uint64_t draw) {
  const std::uint64_t key = mix64(mix64(seed) ^ mix64(0xA0761D6478BD642FULL + supplier)) ^ draw;
  const std::uint64_t bits = mix64(key) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

SupplyRealization sample_supply(const SupplyDistribution& dist, std::uint64_t draw) {
  SupplyRealization s;
  s.s.resize(dist.size());
  for (std::size_t j = 0; j < dist.size(); ++j) s.s[j] = dist.quantile(j, uniform01(dist.seed, j, draw));
  return s;
}

std::vector<SupplyRealization> sample_supply(const SupplyDistribution& dist, std::uint64_t first,
                                             std::size_t count) {
  std::vector<SupplyRealization> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sample_supply(dist, first + k));
  return out;
}

void RunningStats::push(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double d = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += d * nb / n;
  m2_ += other.m2_ + d * d * na * nb / n;
  n_ += other.n_;
}

double RunningStats::std_error() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

StatReport make_report(std::string target, double closed_form, const RunningStats& stats) {
  StatReport r;
  r.target = std::move(target);
  r.closed_form = closed_form;
  r.mean = stats.mean();
  r.std_error = stats.std_error();
  r.draws = stats.count();
  const double diff = r.mean - closed_form;
  const double floor_se = kSnapTolerance * magnitude({r.mean, closed_form});
  if (r.std_error > floor_se) {
    r.z = diff / r.std_error;
    r.pass = std::abs(r.z) <= 3.0;
  } else {
    r.z = 0.0;
    r.pass = approx_equal(r.mean, closed_form);
  }
  return r;
}

std::string_view to_string(Target t) {
  switch (t) {
    case Target::retailer_payoff: return "retailer_payoff";
    case Target::supplier_payoff: return "supplier_payoff";
    case Target::retailer_welfare: return "retailer_welfare";
    case Target::supplier_welfare: return "supplier_welfare";
    case Target::consumer_surplus: return "consumer_surplus";
    case Target::total_welfare: return "total_welfare";
  }
  return "?";
}

StatReport validate_closed_form(Target target, const Scenario& s, const MonteCarloOptions& opt, std::size_t index) {
  const auto dist = SupplyDistribution::matched(s.params, opt.family, opt.seed);
  const Network& g = s.network;
  if ((target == Target::retailer_payoff && index >= g.n()) || (target == Target::supplier_payoff && index >= g.m()))
    throw Error(ErrorKind::index_out_of_range, "target index out of range");

  const auto stats = run_blocks(opt.draws, opt.threads, 1, [&](std::uint64_t d, std::vector<double>& out) {
    const SupplyRealization r = draw_active(dist, g, d);
    switch (target) {
      case Target::retailer_payoff: out[0] = retailer_realized_payoff(g, s.prices, s.params, r, index); return;
      case Target::supplier_payoff: out[0] = g.is_active(index) ? r.s[index] * s.prices[index] : 0.0; return;
      default: break;
    }
    const WelfareBreakdown wb = realized_welfare(g, s.params, s.prices, r);
    if (target == Target::retailer_welfare) out[0] = wb.retailer_total;
    else if (target == Target::supplier_welfare) out[0] = wb.supplier_total;
    else if (target == Target::consumer_surplus) out[0] = wb.consumer_surplus;
    else out[0] = wb.total;
  });

  double closed = 0.0;
  const WelfareBreakdown expected = expected_welfare(g, s.params, s.prices);
  switch (target) {
    case Target::retailer_payoff: closed = retailer_expected_payoff(g, s.prices, s.params, index); break;
    case Target::supplier_payoff:
      closed = g.is_active(index) ? supplier_expected_payoff(s.params, s.prices, index, 1.0) : 0.0;
      break;
    case Target::retailer_welfare: closed = expected.retailer_total; break;
    case Target::supplier_welfare: closed = expected.supplier_total; break;
    case Target::consumer_surplus: closed = expected.consumer_surplus; break;
    case Target::total_welfare: closed = expected.total; break;
  }
  std::string name(to_string(target));
  if (target == Target::retailer_payoff || target == Target::supplier_payoff) name += "[" + std::to_string(index) + "]";
  return make_report(std::move(name), closed, stats[0]);
}

std::vector<StatReport> validate_all(const Scenario& s, const MonteCarloOptions& opt) {
  const auto dist = SupplyDistribution::matched(s.params, opt.family, opt.seed);
  const Network& g = s.network;
  std::vector<std::size_t> retailers;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (!g.suppliers_of(i).empty()) retailers.push_back(i);
  const std::vector<std::size_t> suppliers = g.active_suppliers();
  const std::size_t width = retailers.size() + suppliers.size() + 4;

  const auto stats = run_blocks(opt.draws, opt.threads, width, [&](std::uint64_t d, std::vector<double>& out) {
    const SupplyRealization r = draw_active(dist, g, d);
    std::size_t k = 0;
    for (std::size_t i : retailers) out[k++] = retailer_realized_payoff(g, s.prices, s.params, r, i);
    for (std::size_t j : suppliers) out[k++] = r.s[j] * s.prices[j];
    const WelfareBreakdown wb = realized_welfare(g, s.params, s.prices, r);
    out[k++] = wb.retailer_total;
    out[k++] = wb.supplier_total;
    out[k++] = wb.consumer_surplus;
    out[k++] = wb.total;
  });

  std::vector<StatReport> reports;
  std::size_t k = 0;
  for (std::size_t i : retailers)
    reports.push_back(make_report("retailer_payoff[" + std::to_string(i) + "]",
                                  retailer_expected_payoff(g, s.prices, s.params, i), stats[k++]));
  for (std::size_t j : suppliers)
    reports.push_back(make_report("supplier_payoff[" + std::to_string(j) + "]",
                                  supplier_expected_payoff(s.params, s.prices, j, 1.0), stats[k++]));
  const WelfareBreakdown expected = expected_welfare(g, s.params, s.prices);
  reports.push_back(make_report("retailer_welfare", expected.retailer_total, stats[k++]));
  reports.push_back(make_report("supplier_welfare", expected.supplier_total, stats[k++]));
  reports.push_back(make_report("consumer_surplus", expected.consumer_surplus, stats[k++]));
  reports.push_back(make_report("total_welfare", expected.total, stats[k++]));
  return reports;
}

std::vector<StatReport> validate_welfare_delta(const Scenario& base, const Scenario& alt,
                                               const WelfareBreakdown& expected, const MonteCarloOptions& opt) {
  const auto dist_base = SupplyDistribution::matched(base.params, opt.family, opt.seed);
  const auto dist_alt = SupplyDistribution::matched(alt.params, opt.family, opt.seed);
  const auto stats = run_blocks(opt.draws, opt.threads, 4, [&](std::uint64_t d, std::vector<double>& out) {
    const WelfareBreakdown b =
        realized_welfare(base.network, base.params, base.prices, draw_active(dist_base, base.network, d));
    const WelfareBreakdown a =
        realized_welfare(alt.network, alt.params, alt.prices, draw_active(dist_alt, alt.network, d));
    out[0] = a.retailer_total - b.retailer_total;
    out[1] = a.supplier_total - b.supplier_total;
    out[2] = a.consumer_surplus - b.consumer_surplus;
    out[3] = a.total - b.total;
  });
  return {make_report("delta_retailer", expected.retailer_total, stats[0]),
          make_report("delta_supplier", expected.supplier_total, stats[1]),
          make_report("delta_consumer", expected.consumer_surplus, stats[2]),
          make_report("delta_total", expected.total, stats[3])};
}

}  // namespace yieldnet
