#include "cli/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

#include "yieldnet/equilibrium.hpp"
#include "yieldnet/io.hpp"
#include "yieldnet/numeric.hpp"
#include "yieldnet/planner.hpp"
#include "yieldnet/pricing.hpp"

namespace yieldnet::cli {
namespace {

const std::vector<std::string> kMetrics = {"z",          "y",           "k_star", "k_opt",   "degree",
                                           "links",      "welfare_eq",  "welfare_opt", "pos", "verified"};

std::string skip(std::string_view reason) { return "skip:" + std::string(reason); }

GameParams point_params(const SweepSpec& spec, double value) {
  GameParams p = spec.base;
  switch (spec.param) {
    case SweepParam::mu: std::fill(p.mu.begin(), p.mu.end(), value); break;
    case SweepParam::sigma2: std::fill(p.sigma2.begin(), p.sigma2.end(), value); break;
    case SweepParam::c: p.c = value; break;
    case SweepParam::delta: p.delta = value; break;
    case SweepParam::m: {
      const auto m = static_cast<std::size_t>(std::llround(value));
      p.m = m;
      p.mu.assign(m, spec.base.mu.empty() ? 0.0 : spec.base.mu[0]);
      p.sigma2.assign(m, spec.base.sigma2.empty() ? 0.0 : spec.base.sigma2[0]);
      break;
    }
  }
  if (spec.couple_delta) p.delta = static_cast<double>(p.m) * p.s_max;
  return p;
}

}  // namespace

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "mu") return SweepParam::mu;
  if (name == "sigma2") return SweepParam::sigma2;
  if (name == "m") return SweepParam::m;
  if (name == "c") return SweepParam::c;
  if (name == "delta") return SweepParam::delta;
  throw Error(ErrorKind::invalid_argument, "sweep parameter must be one of mu, sigma2, m, c, delta");
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::mu: return "mu";
    case SweepParam::sigma2: return "sigma2";
    case SweepParam::m: return "m";
    case SweepParam::c: return "c";
    case SweepParam::delta: return "delta";
  }
  return "?";
}

const std::vector<std::string>& sweep_metric_columns() { return kMetrics; }

std::vector<double> sweep_grid(const SweepSpec& spec) {
  if (!(spec.step > 0.0)) throw Error(ErrorKind::invalid_argument, "sweep step must be positive");
  if (spec.to < spec.from) throw Error(ErrorKind::invalid_argument, "sweep range must satisfy from <= to");
  const long long count = floor_snap((spec.to - spec.from) / spec.step);
  if (count > 10'000'000) throw Error(ErrorKind::size_limit, "sweep grid exceeds 10^7 points");
  std::vector<double> grid;
  for (long long k = 0; k <= count; ++k) grid.push_back(spec.from + static_cast<double>(k) * spec.step);
  return grid;
}

SweepRow evaluate_point(const SweepSpec& spec, std::size_t index, double value) {
  SweepRow row;
  row.index = index;
  row.value = value;
  if (spec.param == SweepParam::m && (value < 1.0 || std::abs(value - std::round(value)) > kSnapTolerance)) {
    row.status = skip("non_integer_m");
    return row;
  }
  GameParams p = point_params(spec, value);
  const ValidationReport report = validate_params(p);
  if (!report.ok()) {
    row.status = skip(to_string(report.violations.front().kind));
    return row;
  }
  try {
    const HomogeneousOutcome eq = homogeneous_outcome(p);
    row.z = eq.z;
    row.k_star = eq.k_star;
    row.degree = eq.degree;
    row.links = eq.links;
    row.welfare_eq = eq.welfare;
    const PlannerSolution opt = planner_optimum(p);
    row.y = opt.y;
    row.k_opt = opt.k_opt;
    row.welfare_opt = opt.welfare_opt;
    if (opt.welfare_opt > 0.0) row.pos = eq.welfare / opt.welfare_opt;
    const PriceVector zero = PriceVector::uniform(p.m, 0.0);
    const EquilibriumSummary g = greedy_equilibrium(p, zero, LinkPacking::packed);
    row.verified = verify_retailer_nash(g.network, p, zero, Oracle::characterized).certified && g.k == eq.k_star;
    row.status = "ok";
  } catch (const Error& e) {
    row.status = skip(to_string(e.kind()));
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  const std::vector<double> grid = sweep_grid(spec);
  std::vector<SweepRow> rows(grid.size());
  auto work = [&](unsigned t, unsigned stride) {
    for (std::size_t k = t; k < grid.size(); k += stride) rows[k] = evaluate_point(spec, k, grid[k]);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1))));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::vector<std::string> cols = spec.metrics.empty() ? kMetrics : spec.metrics;
  for (const auto& c : cols)
    if (std::find(kMetrics.begin(), kMetrics.end(), c) == kMetrics.end())
      throw Error(ErrorKind::invalid_argument, "unknown sweep metric '" + c + "'");

  std::ostringstream os;
  os << "index,param,value,status";
  for (const auto& c : cols) os << ',' << c;
  os << '\n';
  for (const SweepRow& r : rows) {
    os << r.index << ',' << to_string(spec.param) << ',' << format_double(r.value) << ',' << r.status;
    const bool ok = r.status == "ok";
    for (const auto& c : cols) {
      os << ',';
      if (!ok) continue;
      if (c == "z") os << format_double(r.z);
      else if (c == "y") os << format_double(r.y);
      else if (c == "k_star") os << r.k_star;
      else if (c == "k_opt") os << r.k_opt;
      else if (c == "degree") os << r.degree;
      else if (c == "links") os << r.links;
      else if (c == "welfare_eq") os << format_double(r.welfare_eq);
      else if (c == "welfare_opt") os << format_double(r.welfare_opt);
      else if (c == "pos") os << (r.pos ? format_double(*r.pos) : "");
      else if (c == "verified") os << (r.verified ? "true" : "false");
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace yieldnet::cli
