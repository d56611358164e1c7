// Acceptance run: one PASS/FAIL line per criterion with its runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli/commands.hpp"
#include "oracles.hpp"
#include "yieldnet/equilibrium.hpp"
#include "yieldnet/montecarlo.hpp"
#include "yieldnet/payoff.hpp"
#include "yieldnet/planner.hpp"
#include "yieldnet/pricing.hpp"
#include "yieldnet/supplier_sets.hpp"

using namespace yieldnet;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

bool rel_close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

oracle::Pairs pairs_of(const Network& g) {
  oracle::Pairs out;
  for (const Link& l : g.links()) out.emplace_back(l.retailer, l.supplier);
  return out;
}

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

Outcome cheapest_vacant_network() {
  const auto p = GameParams::homogeneous(5, 3, 4.0, 2.0, 1.0, 0.5, 18.0);
  const PriceVector w({12.0, 13.0, 13.0});
  const std::vector<Link> links{{0, 1}, {1, 1}, {2, 2}, {3, 2}};
  const Network g = Network::from_links(5, 3, links);

  const auto d = equilibrium_degrees(p, w, std::vector<std::size_t>{1, 2});
  const long long d_oracle = oracle::floor_tol((p.value_homogeneous(2.0) - 2.0 * 13.0) / 0.5);
  const bool degree_ok = d[1] == 2 && d[2] == 2 && d_oracle == 2;

  const auto report = verify_retailer_nash(g, p, w, Oracle::exhaustive);
  double worst_gain = -1e300;
  const auto pairs = pairs_of(g);
  for (std::size_t i = 0; i < p.n; ++i) worst_gain = std::max(worst_gain, oracle::best_deviation_gain(pairs, p, w.w, i));
  const bool certified = report.certified && worst_gain <= 1e-9;

  // Vacant retailer 4 linking to the cheapest supplier alone, and a price-13 retailer swapping to it.
  const double add_vacant = deviation_payoff(g, p, w, 4, std::vector<std::size_t>{0});
  const double swap = deviation_payoff(g, p, w, 0, std::vector<std::size_t>{0});
  const bool signs = add_vacant < 0.0 && swap < 0.0;

  const bool excluded = !selection_filter(g, p, w);

  std::ostringstream os;
  os << "d=" << d[1] << "," << d[2] << " certified=" << certified << " link-cheapest=" << add_vacant
     << " swap=" << swap << " excluded=" << excluded;
  return {degree_ok && certified && signs && excluded, os.str()};
}

// ---------------------------------------------------------------------------

struct HomogeneousInstance {
  double mu, s2, delta, c;
};

std::vector<HomogeneousInstance> homogeneous_instances(std::size_t count) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<HomogeneousInstance> out;
  while (out.size() < count) {
    const std::size_t t = out.size();
    HomogeneousInstance h{};
    h.mu = 0.2 + 3.5 * u(rng);
    if (t % 10 == 0) {
      // Zero variance with an integral z: K* = z = y exactly.
      h.s2 = 0.0;
      const double k = static_cast<double>(1 + rng() % 30);
      h.c = h.mu * h.mu * (0.05 + 0.9 * u(rng));
      h.delta = (k * h.mu * h.mu + h.c) / h.mu;
    } else {
      h.s2 = t % 10 == 1 ? 0.0 : std::min(2.0, h.mu * (4.0 - h.mu)) * u(rng);
      h.delta = h.mu + 0.5 + 40.0 * u(rng);
      const double v1 = h.mu * (h.delta - h.mu) - h.s2;
      if (v1 <= 0.0) continue;
      h.c = v1 * (0.005 + 0.995 * u(rng));
    }
    const auto p = GameParams::homogeneous(1000, 1000, 4.0, h.mu, h.s2, h.c, h.delta);
    if (!validate_params(p).ok()) continue;
    out.push_back(h);
  }
  return out;
}

struct ClosedFormStats {
  std::size_t instances = 0;
  std::size_t eq_mismatch = 0;
  std::size_t opt_mismatch = 0;
  std::size_t floor_mismatch = 0;
  std::size_t order_violations = 0;
  std::size_t pos_above_one = 0;
  std::size_t pos_equality_mismatch = 0;
  std::size_t pos_equal_one = 0;
  std::size_t zero_variance_pos_one = 0;
};

ClosedFormStats closed_form_scan() {
  ClosedFormStats st;
  for (const auto& h : homogeneous_instances(1000)) {
    ++st.instances;
    const auto p = GameParams::homogeneous(1000, 1000, 4.0, h.mu, h.s2, h.c, h.delta);
    const double mu2 = h.mu * h.mu;
    const double z = h.delta / h.mu - h.s2 / mu2 - h.c / mu2;
    const double y = h.delta / h.mu - h.s2 / (2.0 * mu2) - h.c / mu2;
    const long long fz = oracle::floor_tol(z);
    const long long d = oracle::floor_tol(1.0 + mu2 * (z - static_cast<double>(fz)) / h.c);

    const auto eq = homogeneous_outcome(p);
    const auto opt = planner_optimum(p);
    if (static_cast<long long>(eq.k_star) != fz || static_cast<long long>(eq.degree) != d ||
        static_cast<long long>(opt.k_opt) != oracle::floor_tol(y))
      ++st.floor_mismatch;
    if (!rel_close(eq.welfare, oracle::homogeneous_welfare(h.mu, h.s2, h.delta, h.c, eq.k_star, eq.links)))
      ++st.eq_mismatch;
    if (!rel_close(opt.welfare_opt, oracle::homogeneous_welfare(h.mu, h.s2, h.delta, h.c, opt.k_opt, opt.k_opt)))
      ++st.opt_mismatch;

    if (eq.k_star > opt.k_opt) ++st.order_violations;
    const double pos = price_of_stability(p);
    if (pos > 1.0 + 1e-9) ++st.pos_above_one;
    const bool pos_one = rel_close(pos, 1.0);
    const bool coincide = eq.k_star == opt.k_opt && eq.links == opt.k_opt;
    if (pos_one != coincide) ++st.pos_equality_mismatch;
    st.pos_equal_one += pos_one;
    if (h.s2 == 0.0 && pos_one) ++st.zero_variance_pos_one;
  }
  return st;
}

ClosedFormStats& closed_form_results() {
  static ClosedFormStats st = closed_form_scan();
  return st;
}

Outcome closed_form_consistency() {
  const auto& st = closed_form_results();
  std::ostringstream os;
  os << st.instances << " instances; welfare mismatches eq=" << st.eq_mismatch << " opt=" << st.opt_mismatch
     << "; floor mismatches=" << st.floor_mismatch;
  return {st.instances == 1000 && st.eq_mismatch == 0 && st.opt_mismatch == 0 && st.floor_mismatch == 0, os.str()};
}

Outcome insufficient_diversification() {
  const auto& st = closed_form_results();
  std::ostringstream os;
  os << "K*>K_opt on " << st.order_violations << ", PoS>1 on " << st.pos_above_one
     << ", PoS=1 vs coinciding (K, |g|) disagreements " << st.pos_equality_mismatch << "; PoS=1 on "
     << st.pos_equal_one << " (" << st.zero_variance_pos_one << " with zero variance)";
  return {st.order_violations == 0 && st.pos_above_one == 0 && st.pos_equality_mismatch == 0 &&
              st.zero_variance_pos_one > 0,
          os.str()};
}

// ---------------------------------------------------------------------------

Outcome greedy_vs_oracle() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t accepted = 0, resampled = 0, boundary_instances = 0;
  std::map<std::string, std::size_t> violations;
  std::string first_failure;

  auto note = [&](const std::string& kind, const std::string& what) {
    ++violations[kind];
    if (first_failure.empty()) first_failure = what;
  };

  while (accepted < 200) {
    const std::size_t m = 2 + rng() % 9;
    const std::size_t n = 2 + rng() % 59;
    double mu, s2, delta, c;
    std::vector<double> w(m);
    const bool lattice = accepted % 5 == 0;
    if (lattice) {
      // Integer lattice: exact ties and zero margins occur.
      mu = 1.0;
      s2 = 0.5 * static_cast<double>(rng() % 2);
      delta = static_cast<double>(2 + rng() % 8);
      c = 0.5 * static_cast<double>(1 + rng() % 3);
    } else {
      mu = 0.5 + 2.5 * u(rng);
      s2 = std::min(1.5, mu * (4.0 - mu)) * u(rng);
      delta = mu * (1.5 + static_cast<double>(m) * u(rng));
      c = 0.0;
    }
    const double v1 = mu * (delta - mu) - s2;
    if (v1 <= 0.0) continue;
    if (!lattice) c = v1 * (0.05 + 0.95 * u(rng));
    if (c > v1) continue;
    const double bound = delta - mu - (s2 + c) / mu;
    const int style = static_cast<int>(rng() % 3);
    for (std::size_t j = 0; j < m; ++j) {
      if (lattice) w[j] = 0.5 * std::floor(2.0 * bound * u(rng));
      else if (style == 0) w[j] = bound * u(rng);
      else if (style == 1) w[j] = bound * 0.25 * std::floor(4.0 * u(rng));
      else w[j] = 0.0;
    }
    const auto p = GameParams::homogeneous(n, m, 4.0, mu, s2, c, delta);
    const PriceVector pw(w);
    if (!validate_params(p, &pw).ok()) continue;

    EquilibriumSummary s;
    try {
      s = greedy_equilibrium(p, pw);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::insufficient_retailers) throw;
      ++resampled;
      continue;
    }
    ++accepted;
    std::ostringstream tag;
    tag << "n=" << n << " m=" << m << " mu=" << mu << " s2=" << s2 << " delta=" << delta << " c=" << c << " w=";
    for (double x : w) tag << x << ";";

    // Exhaustive deviation search, library and independent oracle.
    const auto report = verify_retailer_nash(s.network, p, pw, Oracle::exhaustive);
    const auto pairs = pairs_of(s.network);
    double worst = 0.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gain = oracle::best_deviation_gain(pairs, p, w, i);
      const double scale = std::max(1.0, std::abs(oracle::expected_payoff(pairs, p, w, i)));
      if (gain / scale > worst) {
        worst = gain / scale;
        worst_i = i;
      }
    }
    // Active count against the price-order scan.
    const std::size_t k_star = oracle::k_star_scan(p, w);
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    const bool boundary =
        k_star > 0 && std::abs(p.value_homogeneous(static_cast<double>(k_star)) - mu * sorted[k_star - 1] - c) <=
                          1e-9 * std::max(1.0, mu * delta);
    boundary_instances += boundary;

    const bool oracle_ok = worst <= 1e-9;
    if (!report.certified || !oracle_ok) {
      std::ostringstream os;
      os << tag.str() << " retailer " << worst_i << " gains " << worst << " with links";
      for (std::size_t j : report.retailers[worst_i].best_links) os << " " << j;
      note(boundary ? "not_nash_zero_margin" : "not_nash_interior", os.str());
    }
    if (report.certified != oracle_ok) note("verifier_disagrees", tag.str());
    if (!(s.k == k_star || (boundary && s.k + 1 == k_star))) note("count", tag.str());

    // Degrees against the floor formula at the realized K.
    const double vk = p.value_homogeneous(static_cast<double>(s.k));
    for (std::size_t j = 0; j < m; ++j) {
      if (s.degrees[j] == 0) continue;
      if (static_cast<long long>(s.degrees[j]) != oracle::floor_tol((vk - mu * w[j]) / c)) {
        note("degree", tag.str());
        break;
      }
    }
    if (!s.selected) note("not_selected", tag.str());
  }

  std::ostringstream os;
  std::size_t total = 0;
  os << accepted << " instances (" << resampled << " redrawn for n, " << boundary_instances << " at a zero margin)";
  for (const auto& [kind, count] : violations) {
    os << "; " << kind << "=" << count;
    total += count;
  }
  if (total == 0) os << "; zero violations";
  else os << "; first: " << first_failure;
  return {total == 0, os.str()};
}

// ---------------------------------------------------------------------------

Outcome monte_carlo() {
  const auto p = GameParams::homogeneous(48, 12, 4.0, 2.0, 1.0, 0.5, 18.0);
  const auto w = PriceVector::uniform(12, 0.0);
  const auto eq = greedy_equilibrium(p, w);
  bool ok = eq.k == 8 && eq.network.link_count() == 48;
  std::ostringstream os;
  os << "K=" << eq.k << " |g|=" << eq.network.link_count();
  for (auto family : {SupplyFamily::scaled_beta, SupplyFamily::uniform, SupplyFamily::two_point}) {
    const MonteCarloOptions opt{100000, 2024, family, worker_threads()};
    const auto reports = validate_all(Scenario{eq.network, p, w}, opt);
    double worst = 0.0;
    std::size_t failed = 0;
    double welfare_mean = 0.0, welfare_se = 0.0;
    for (const auto& r : reports) {
      worst = std::max(worst, std::abs(r.z));
      failed += !r.pass;
      if (r.target == to_string(Target::total_welfare)) {
        welfare_mean = r.mean;
        welfare_se = r.std_error;
        ok = ok && rel_close(r.closed_form, 132.0, 1e-12);
      }
    }
    ok = ok && failed == 0 && !reports.empty();
    os << "; " << to_string(family) << ": " << reports.size() << " targets, welfare " << welfare_mean << "+-"
       << welfare_se << ", max|z|=" << worst << ", failed=" << failed;
  }
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------

Outcome variance_deltas() {
  const auto base = GameParams::homogeneous(48, 12, 4.0, 2.0, 1.0, 0.5, 18.0);
  auto alt = base;
  alt.sigma2[0] = 0.5;
  const auto eq = hetero_variance_prices(alt);
  const auto& d = eq.welfare_delta;
  bool ok = d.supplier_total == 0.5 && d.retailer_total == 0.0 && d.consumer_surplus == -0.25 && d.total == 0.25;
  ok = ok && rel_close(eq.w_star[0], 0.25, 1e-12) && eq.w_star.is_left_limit(0);

  const auto w0 = PriceVector::uniform(12, 0.0);
  const Scenario sb{greedy_equilibrium(base, w0).network, base, w0};
  const Scenario sa{greedy_equilibrium(alt, eq.w_star).network, alt, eq.w_star};
  const double direct = oracle::expected_welfare(pairs_of(sa.network), alt, eq.w_star.w) -
                        oracle::expected_welfare(pairs_of(sb.network), base, w0.w);
  ok = ok && rel_close(direct, 0.25);

  std::ostringstream os;
  os << "closed form (" << d.supplier_total << ", " << d.retailer_total << ", " << d.consumer_surplus << ", "
     << d.total << "), direct total " << direct;
  for (auto family : {SupplyFamily::scaled_beta, SupplyFamily::uniform, SupplyFamily::two_point}) {
    const MonteCarloOptions opt{100000, 99, family, worker_threads()};
    double worst = 0.0;
    std::size_t failed = 0;
    for (const auto& r : validate_welfare_delta(sb, sa, d, opt)) {
      worst = std::max(worst, std::abs(r.z));
      failed += !r.pass;
    }
    ok = ok && failed == 0;
    os << "; " << to_string(family) << " paired max|z|=" << worst << " failed=" << failed;
  }
  const auto grid = supplier_price_deviation_check(alt, eq.w_star, 1e-3);
  ok = ok && grid.certified;
  os << "; grid certified=" << grid.certified;
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------

Outcome mean_pipeline() {
  std::vector<double> means(20, 1.0);
  means[0] = 1.1;
  const auto p = GameParams::heterogeneous(1000, 20, 4.0, means, std::vector<double>(20, 0.5), 0.4, 20.3);
  const auto zero = PriceVector::uniform(20, 0.0);
  const std::size_t ex = k_max(p, zero, Enumeration::exhaustive);
  const std::size_t fast = k_max(p, zero, Enumeration::structured);
  const auto eq = hetero_mean_prices(p);
  const double price_oracle = 0.1 * ((20.3 - 1.0 * 19.0) / 1.1 - 1.0);
  const auto d = hetero_mean_welfare_delta(p, 19);
  bool ok = ex == 19 && fast == 19 && eq.k_ref == 19 && rel_close(eq.w_star[0], price_oracle, 1e-12) &&
            std::abs(eq.w_star[0] - 0.01818) < 1e-5 && rel_close(d.components.supplier_total, 0.02, 1e-12) &&
            rel_close(d.components.consumer_surplus, 1.905, 1e-12) && d.components.retailer_total == 0.0 &&
            rel_close(d.components.total, d.stated_total, 1e-12) && rel_close(d.stated_total, 1.925, 1e-12);

  std::mt19937_64 rng(1313);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t random_checked = 0, random_mismatch = 0;
  for (int t = 0; t < 400; ++t) {
    const std::size_t m = 2 + rng() % 11;
    const double mu = 0.5 + u(rng);
    std::vector<double> mm(m, mu), s2(m, 0.5 * u(rng)), w(m, 0.0);
    mm[rng() % m] = mu + 0.5 * u(rng);
    if (t % 2 == 1)
      for (std::size_t j = 0; j < m; ++j) w[j] = u(rng);
    const auto q = GameParams::heterogeneous(1000, m, 4.0, mm, s2, 0.05 + 0.5 * u(rng),
                                             mu * (1.0 + 2.5 * u(rng) * static_cast<double>(m)));
    const PriceVector pw(w);
    const auto a = k_max(q, pw, Enumeration::exhaustive);
    const auto b = k_max(q, pw, Enumeration::structured);
    ++random_checked;
    if (a != b || a != oracle::k_max(q, w)) ++random_mismatch;
  }
  ok = ok && random_mismatch == 0;

  std::ostringstream os;
  os.precision(10);
  os << "k_max exhaustive=" << ex << " structured=" << fast << "; price " << eq.w_star[0] << "; deltas supplier "
     << d.components.supplier_total << " consumer " << d.components.consumer_surplus << " sum "
     << d.components.total << " stated " << d.stated_total << "; random m<=12: " << random_checked << " checked, "
     << random_mismatch << " mismatches";
  return {ok, os.str()};
}

// ---------------------------------------------------------------------------

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    std::vector<std::string> out;
    if (it == header.end()) return out;
    const auto k = static_cast<std::size_t>(it - header.begin());
    for (const auto& r : rows) out.push_back(r.at(k));
    return out;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (csv.header.empty()) csv.header = split(line);
    else csv.rows.push_back(split(line));
  }
  return csv;
}

Outcome sweep_regression() {
  struct Sweep {
    std::string param, from, to, step;
    double mu, s2, delta, c;
  };
  const std::vector<Sweep> sweeps{
      {"mu", "0.5", "4", "0.05", 2.0, 1.0, 18.0, 0.5},
      {"sigma2", "0", "3", "0.05", 2.0, 1.0, 18.0, 0.5},
      {"m", "2", "40", "1", 2.0, 1.0, 18.0, 0.5},
  };
  bool ok = true;
  std::ostringstream os;
  for (const auto& sw : sweeps) {
    std::ostringstream mu, s2, delta, c;
    mu << sw.mu;
    s2 << sw.s2;
    delta << sw.delta;
    c << sw.c;
    std::vector<std::string> args{"sweep",   "--param", sw.param,  "--from",   sw.from,  "--to",
                                  sw.to,     "--step",  sw.step,   "--mu",     mu.str(), "--sigma2",
                                  s2.str(),  "--delta", delta.str(), "--c",    c.str(),  "--seed",
                                  "42",      "--format", "csv"};
    std::ostringstream out1, out2, out3, err;
    const int code1 = cli::run(args, out1, err);
    const int code2 = cli::run(args, out2, err);
    args.insert(args.end(), {"--threads", "4"});
    const int code3 = cli::run(args, out3, err);
    const bool stable = code1 == 0 && code2 == 0 && code3 == 0 && out1.str() == out2.str() && out1.str() == out3.str();

    const Csv csv = parse_csv(out1.str());
    const auto values = csv.column("value");
    const auto status = csv.column("status");
    const auto k_star = csv.column("k_star");
    const auto k_opt = csv.column("k_opt");
    std::size_t ok_rows = 0, mismatches = 0;
    for (std::size_t t = 0; t < values.size(); ++t) {
      if (status[t] != "ok") continue;
      ++ok_rows;
      const double v = std::stod(values[t]);
      const double m_mu = sw.param == "mu" ? v : sw.mu;
      const double m_s2 = sw.param == "sigma2" ? v : sw.s2;
      const double mu2 = m_mu * m_mu;
      const double z = sw.delta / m_mu - m_s2 / mu2 - sw.c / mu2;
      const double y = sw.delta / m_mu - m_s2 / (2.0 * mu2) - sw.c / mu2;
      if (std::stoll(k_star[t]) != oracle::floor_tol(z) || std::stoll(k_opt[t]) != oracle::floor_tol(y) ||
          k_star[t].find('.') != std::string::npos || k_opt[t].find('.') != std::string::npos)
        ++mismatches;
    }
    ok = ok && stable && mismatches == 0 && ok_rows > 0;
    os << (os.tellp() > 0 ? "; " : "") << sw.param << ": " << values.size() << " points, " << ok_rows << " ok, "
       << mismatches << " floor mismatches, byte-stable=" << stable;
  }
  return {ok, os.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "cheapest-vacant network", 1.0, cheapest_vacant_network},
      {2, "closed-form cross-consistency", 10.0, closed_form_consistency},
      {3, "greedy vs exhaustive oracle", 300.0, greedy_vs_oracle},
      {4, "insufficient diversification", 10.0, insufficient_diversification},
      {5, "Monte Carlo validation", 30.0, monte_carlo},
      {6, "heterogeneous-variance deltas", 60.0, variance_deltas},
      {7, "heterogeneous-mean pipeline", 60.0, mean_pipeline},
      {8, "sweep regression", 60.0, sweep_regression},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s [%d] %s (%.3f s, limit %.0f s): %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.time_limit_s, o.detail.c_str(), in_time ? "" : " [time limit exceeded]");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
