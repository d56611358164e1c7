#include "cli/commands.hpp"

#include <charconv>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "cli/sweep.hpp"
#include "yieldnet/numeric.hpp"

namespace yieldnet::cli {
namespace {

struct Flags {
  std::string config;
  std::string network;
  std::string format = "json";
  std::string oracle;
  std::string family = "beta";
  std::string packing = "fresh";
  std::string mu, sigma2, w;
  std::size_t n = 0, m = 0;
  double s_max = 0, delta = 0, c = 0;
  std::uint64_t seed = 0, draws = 0;
  unsigned threads = 1;
  double resolution = 1e-3;
  std::string sweep_param = "mu";
  double from = 0, to = 0, step = 0;
  std::string metrics;
};

struct ExitError {
  int code;
  json body;
};

int exit_code_for(ErrorKind k) { return k == ErrorKind::size_limit ? 2 : 1; }

json error_json(std::string_view kind, const std::string& message) {
  return json{{"error", {{"kind", kind}, {"message", message}}}};
}

json number_or_list(const std::string& text) {
  const auto values = parse_number_list(text);
  if (values.size() == 1) return values[0];
  return values;
}

std::size_t list_length(const json& v) { return v.is_array() ? v.size() : 1; }

/// Layers: network file "params" < --config file < explicit flags.
json resolve_config(const CLI::App& sub, const Flags& f, const json& network_doc) {
  const bool sweeping = sub.get_name() == "sweep";
  json cfg = json::object();
  if (network_doc.is_object() && network_doc.contains("params")) cfg.update(network_doc["params"]);
  if (!f.config.empty()) {
    json file = read_json_file(f.config);
    if (!file.is_object()) throw Error(ErrorKind::invalid_argument, "config must be a flat JSON object");
    cfg.update(file);
  }
  auto given = [&](const char* name) {
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--n")) cfg["n"] = f.n;
  if (given("--m")) cfg["m"] = f.m;
  if (given("--s_max")) cfg["s_max"] = f.s_max;
  if (given("--delta")) cfg["delta"] = f.delta;
  if (given("--c")) cfg["c"] = f.c;
  if (given("--mu")) cfg["mu"] = number_or_list(f.mu);
  if (given("--sigma2")) cfg["sigma2"] = number_or_list(f.sigma2);
  if (given("--w")) cfg["w"] = number_or_list(f.w);
  if (given("--seed")) cfg["seed"] = f.seed;
  if (given("--draws")) cfg["draws"] = f.draws;
  if (given("--family")) cfg["family"] = f.family;
  if (given("--oracle")) cfg["oracle"] = f.oracle;
  if (given("--packing")) cfg["packing"] = f.packing;
  if (given("--resolution")) cfg["resolution"] = f.resolution;
  if (sweeping && !cfg.contains(f.sweep_param)) {
    if (f.sweep_param == "m") cfg["m"] = static_cast<std::size_t>(std::max(1.0, f.from));
    else cfg[f.sweep_param] = f.from;
  }

  if (!cfg.contains("mu")) throw Error(ErrorKind::invalid_argument, "missing --mu");
  if (!cfg.contains("c")) throw Error(ErrorKind::invalid_argument, "missing --c");
  if (!cfg.contains("sigma2")) cfg["sigma2"] = 0.0;
  if (!cfg.contains("n")) cfg["n"] = network_doc.is_object() && network_doc.contains("n") ? network_doc["n"] : json(1000);
  if (!cfg.contains("m")) {
    std::size_t m = std::max({list_length(cfg["mu"]), list_length(cfg["sigma2"]),
                              cfg.contains("w") ? list_length(cfg["w"]) : std::size_t{1}});
    if (network_doc.is_object() && network_doc.contains("m")) cfg["m"] = network_doc["m"];
    else cfg["m"] = m > 1 ? m : std::size_t{50};
  }
  if (!cfg.contains("s_max")) cfg["s_max"] = 4.0;
  const bool delta_given = cfg.contains("delta") && !cfg["delta"].is_null();
  cfg["delta_coupled"] = !delta_given;
  if (!delta_given) cfg["delta"] = cfg["m"].get<double>() * cfg["s_max"].get<double>();
  if (!cfg.contains("w")) cfg["w"] = 0.0;
  return cfg;
}

GameParams params_of(const json& cfg) { return params_from_json(cfg); }

PriceVector prices_of(const json& cfg, std::size_t m) {
  const json& w = cfg["w"];
  if (w.is_number()) return PriceVector::uniform(m, w.get<double>());
  auto values = w.get<std::vector<double>>();
  if (values.size() != m) {
    std::ostringstream os;
    os << "--w has " << values.size() << " entries, expected m=" << m;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  return PriceVector(std::move(values));
}

void require_valid(const GameParams& p, const PriceVector* w, bool moments = false) {
  const ValidationReport report = validate_params(p, w, moments);
  if (report.ok()) return;
  json body = error_json("validation_failed", report.violations.front().message);
  body["violations"] = to_json(report)["violations"];
  throw ExitError{1, body};
}

Oracle oracle_of(const json& cfg, Oracle fallback) {
  if (!cfg.contains("oracle")) return fallback;
  const auto name = cfg["oracle"].get<std::string>();
  if (name == "exhaustive") return Oracle::exhaustive;
  if (name == "characterized") return Oracle::characterized;
  throw Error(ErrorKind::invalid_argument, "--oracle must be exhaustive or characterized");
}

LinkPacking packing_of(const json& cfg) {
  const auto name = cfg.value("packing", std::string("fresh"));
  if (name == "fresh") return LinkPacking::fresh;
  if (name == "packed") return LinkPacking::packed;
  throw Error(ErrorKind::invalid_argument, "--packing must be fresh or packed");
}

std::optional<std::size_t> common_degree(const EquilibriumSummary& s) {
  std::optional<std::size_t> d;
  for (std::size_t x : s.degrees) {
    if (x == 0) continue;
    if (d && *d != x) return std::nullopt;
    d = x;
  }
  return d;
}

json cmd_equilibrium(const json& cfg) {
  const GameParams p = params_of(cfg);
  const PriceVector w = prices_of(cfg, p.m);
  require_valid(p, &w);
  const EquilibriumSummary s = greedy_equilibrium(p, w, packing_of(cfg));
  const WelfareBreakdown wb = expected_welfare(s.network, p, w);
  json r = to_json(s);
  const auto d = common_degree(s);
  r["d"] = d ? json(*d) : json(nullptr);
  r["welfare"] = wb.total;
  r["welfare_breakdown"] = to_json(wb);
  r["verification"] = to_json(verify_retailer_nash(s.network, p, w, oracle_of(cfg, Oracle::characterized)));
  r["verification"].erase("retailers");
  if (p.is_homogeneous()) {
    const HomogeneousOutcome h = homogeneous_outcome(p);
    r["closed_form"] = to_json(h);
  }
  return r;
}

json cmd_planner(const json& cfg) {
  const GameParams p = params_of(cfg);
  require_valid(p, nullptr);
  const PlannerSolution sol = planner_optimum(p);
  json r = to_json(sol);
  const HomogeneousOutcome eq = homogeneous_outcome(p);
  r["welfare_eq"] = eq.welfare;
  r["K_star"] = eq.k_star;
  r["pos"] = sol.welfare_opt > 0.0 ? json(eq.welfare / sol.welfare_opt) : json(nullptr);
  return r;
}

json cmd_prices(const json& cfg) {
  const GameParams p = params_of(cfg);
  require_valid(p, nullptr);
  const PriceEquilibrium eq = price_equilibrium(p);
  json r = to_json(eq);
  const double resolution = cfg.value("resolution", 1e-3);
  r["deviation_check"] = to_json(supplier_price_deviation_check(p, eq.w_star, resolution));
  if (eq.kind == PriceCase::hetero_mean && eq.welfare_delta.total != 0.0) {
    const HeteroMeanWelfareDelta hd = hetero_mean_welfare_delta(p, eq.k_ref);
    r["welfare_delta_stated_total"] = hd.stated_total;
    r["retailer_residual"] = hd.retailer_residual;
  }
  return r;
}

json cmd_verify(const json& cfg, const json& network_doc) {
  const GameParams p = params_of(cfg);
  const PriceVector w = prices_of(cfg, p.m);
  require_valid(p, &w);
  const Network g = network_from_json(network_doc, p.n, p.m);
  if (g.n() != p.n || g.m() != p.m) throw Error(ErrorKind::invalid_argument, "network size differs from n, m");
  json r = to_json(verify_retailer_nash(g, p, w, oracle_of(cfg, Oracle::exhaustive)));
  r["selected"] = selection_filter(g, p, w);
  r["K"] = g.active_count();
  r["degrees"] = std::vector<std::size_t>(g.degrees().begin(), g.degrees().end());
  r["welfare"] = to_json(expected_welfare(g, p, w));
  return r;
}

json cmd_montecarlo(const json& cfg, const json& network_doc) {
  const GameParams p = params_of(cfg);
  const PriceVector w = prices_of(cfg, p.m);
  require_valid(p, &w);
  const Network g = network_doc.is_null() ? greedy_equilibrium(p, w, packing_of(cfg)).network
                                          : network_from_json(network_doc, p.n, p.m);
  MonteCarloOptions opt;
  opt.draws = cfg.value("draws", std::uint64_t{100000});
  opt.seed = cfg.value("seed", std::uint64_t{0});
  if (opt.draws < 2) throw Error(ErrorKind::invalid_argument, "--draws must be at least 2");
  const auto family_name = cfg.value("family", std::string("beta"));
  std::vector<SupplyFamily> families;
  if (family_name == "all") families = {SupplyFamily::scaled_beta, SupplyFamily::uniform, SupplyFamily::two_point};
  else families = {parse_family(family_name)};

  const Scenario scenario{g, p, w};
  json r{{"K", g.active_count()}, {"links", g.link_count()}, {"draws", opt.draws}, {"seed", opt.seed}};
  json per_family = json::object();
  bool all_pass = true;
  for (SupplyFamily fam : families) {
    opt.family = fam;
    json reports = json::array();
    bool pass = true;
    for (const StatReport& rep : validate_all(scenario, opt)) {
      reports.push_back(to_json(rep));
      pass = pass && rep.pass;
    }
    per_family[std::string(to_string(fam))] = {{"pass", pass}, {"reports", reports}};
    all_pass = all_pass && pass;
  }
  r["families"] = per_family;
  r["pass"] = all_pass;
  return r;
}

SweepSpec sweep_spec_of(const json& cfg, const Flags& f) {
  SweepSpec spec;
  spec.param = parse_sweep_param(f.sweep_param);
  spec.from = f.from;
  spec.to = f.to;
  spec.step = f.step;
  spec.base = params_of(cfg);
  spec.couple_delta = cfg["delta_coupled"].get<bool>();
  std::stringstream ss(f.metrics);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) spec.metrics.push_back(item);
  return spec;
}

json row_json(const SweepRow& row) {
  json j{{"index", row.index}, {"value", row.value}, {"status", row.status}};
  if (row.status != "ok") return j;
  j.update({{"z", row.z}, {"y", row.y}, {"k_star", row.k_star}, {"k_opt", row.k_opt}, {"degree", row.degree},
            {"links", row.links}, {"welfare_eq", row.welfare_eq}, {"welfare_opt", row.welfare_opt},
            {"verified", row.verified}});
  j["pos"] = row.pos ? json(*row.pos) : json(nullptr);
  return j;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "flat JSON config; flags override it");
  sub->add_option("--n", f.n, "retailers (default 1000)");
  sub->add_option("--m", f.m, "suppliers (default 50 or list length)");
  sub->add_option("--s_max", f.s_max, "capacity per supplier (default 4)");
  sub->add_option("--delta", f.delta, "demand intercept (default m * s_max)");
  sub->add_option("--c", f.c, "link cost");
  sub->add_option("--mu", f.mu, "mean supply, scalar or comma list");
  sub->add_option("--sigma2", f.sigma2, "supply variance, scalar or comma list");
  sub->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw Error(ErrorKind::invalid_argument, "empty entry in '" + text + "'");
    const std::string trimmed = item.substr(b, e - b + 1);
    double v = 0.0;
    const auto res = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
    if (res.ec != std::errc() || res.ptr != trimmed.data() + trimmed.size())
      throw Error(ErrorKind::invalid_argument, "not a number: '" + trimmed + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::invalid_argument, "empty number list");
  return out;
}

std::string git_blob_sha1(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr);
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[k]);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Supply-chain network formation under yield uncertainty"};
  app.require_subcommand(1);
  Flags f;

  auto* equilibrium = app.add_subcommand("equilibrium", "greedy network equilibrium for given prices");
  auto* planner = app.add_subcommand("planner", "planner optimum and price of stability");
  auto* prices = app.add_subcommand("prices", "first-stage price equilibrium and welfare deltas");
  auto* verify = app.add_subcommand("verify", "check a network for profitable retailer deviations");
  auto* montecarlo = app.add_subcommand("montecarlo", "simulate payoffs and welfare against closed forms");
  auto* sweep = app.add_subcommand("sweep", "metric curves over one parameter");
  for (auto* sub : {equilibrium, planner, prices, verify, montecarlo, sweep}) add_common(sub, f);
  for (auto* sub : {equilibrium, verify, montecarlo}) sub->add_option("--w", f.w, "prices, scalar or comma list");
  for (auto* sub : {equilibrium, verify})
    sub->add_option("--oracle", f.oracle, "exhaustive or characterized")
        ->check(CLI::IsMember({"exhaustive", "characterized"}));
  for (auto* sub : {equilibrium, montecarlo})
    sub->add_option("--packing", f.packing, "fresh or packed")->check(CLI::IsMember({"fresh", "packed"}));
  verify->add_option("--network", f.network, "network JSON file")->required();
  montecarlo->add_option("--network", f.network, "network JSON file (default: greedy equilibrium)");
  montecarlo->add_option("--seed", f.seed, "RNG seed");
  montecarlo->add_option("--draws", f.draws, "draws (default 100000)");
  montecarlo->add_option("--family", f.family, "beta, uniform, two_point or all")
      ->check(CLI::IsMember({"beta", "uniform", "two_point", "all"}));
  prices->add_option("--resolution", f.resolution, "deviation grid step relative to the price bound");
  sweep->add_option("--param", f.sweep_param, "mu, sigma2, m, c or delta")
      ->check(CLI::IsMember({"mu", "sigma2", "m", "c", "delta"}));
  sweep->add_option("--from", f.from)->required();
  sweep->add_option("--to", f.to)->required();
  sweep->add_option("--step", f.step)->required();
  sweep->add_option("--metrics", f.metrics, "comma list of columns (default all)");
  sweep->add_option("--seed", f.seed, "recorded in provenance");
  sweep->add_option("--threads", f.threads, "worker threads");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      err << app.help();
      return 0;
    }
    out << error_json("usage", e.what()).dump(2) << '\n';
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    json network_doc;
    if (!f.network.empty()) network_doc = read_json_file(f.network);
    const json cfg = resolve_config(*sub, f, network_doc);

    if (name == "sweep") {
      const SweepSpec spec = sweep_spec_of(cfg, f);
      const auto rows = run_sweep(spec, f.threads);
      const std::string hash = git_blob_sha1(cfg.dump());
      if (f.format == "csv") {
        out << "# config: " << cfg.dump() << '\n' << "# input_sha1: " << hash << '\n' << sweep_csv(spec, rows);
      } else {
        json list = json::array();
        for (const auto& row : rows) list.push_back(row_json(row));
        json doc{{"command", name}, {"config", cfg}, {"input_sha1", hash},
                 {"sweep", {{"param", to_string(spec.param)}, {"from", spec.from}, {"to", spec.to}, {"step", spec.step}}},
                 {"result", list}};
        out << doc.dump(2) << '\n';
      }
      return 0;
    }

    json result;
    if (name == "equilibrium") result = cmd_equilibrium(cfg);
    else if (name == "planner") result = cmd_planner(cfg);
    else if (name == "prices") result = cmd_prices(cfg);
    else if (name == "verify") result = cmd_verify(cfg, network_doc);
    else result = cmd_montecarlo(cfg, network_doc);

    json provenance = cfg;
    if (!network_doc.is_null()) provenance["network"] = network_doc;
    const std::string hash = git_blob_sha1(provenance.dump());
    if (f.format == "csv") {
      out << "# input_sha1: " << hash << '\n' << "key,value\n";
      for (const auto& [k, v] : result.items())
        if (v.is_primitive()) out << k << ',' << v.dump() << '\n';
      return 0;
    }
    json doc{{"command", name}, {"config", cfg}, {"input_sha1", hash}, {"result", result}};
    out << doc.dump(2) << '\n';
    return 0;
  } catch (const ExitError& e) {
    json body = e.body;
    body["command"] = name;
    out << body.dump(2) << '\n';
    return e.code;
  } catch (const Error& e) {
    json body = error_json(to_string(e.kind()), e.what());
    body["command"] = name;
    out << body.dump(2) << '\n';
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    json body = error_json("invalid_argument", e.what());
    body["command"] = name;
    out << body.dump(2) << '\n';
    return 1;
  }
}

}  // namespace yieldnet::cli
