#include "yieldnet/io.hpp"

#include <fstream>
#include <sstream>

namespace yieldnet {
namespace {

std::vector<double> broadcast(const json& v, std::size_t m, const char* key) {
  if (v.is_number()) return std::vector<double>(m, v.get<double>());
  if (!v.is_array()) throw Error(ErrorKind::invalid_argument, std::string(key) + " must be a number or an array");
  auto out = v.get<std::vector<double>>();
  if (out.size() == 1 && m > 1) out.assign(m, out[0]);
  if (out.size() != m) {
    std::ostringstream os;
    os << key << " has " << out.size() << " entries, expected m=" << m;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  return out;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::invalid_argument, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::invalid_argument, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

json to_json(const GameParams& p) {
  return json{{"n", p.n}, {"m", p.m}, {"s_max", p.s_max}, {"delta", p.delta},
              {"mu", p.mu}, {"sigma2", p.sigma2}, {"c", p.c}};
}

GameParams params_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, "parameters must be a JSON object");
  GameParams p;
  p.n = field<std::size_t>(j, "n");
  p.m = field<std::size_t>(j, "m");
  p.s_max = j.value("s_max", 1.0);
  p.c = field<double>(j, "c");
  if (!j.contains("mu")) throw Error(ErrorKind::invalid_argument, "missing field 'mu'");
  p.mu = broadcast(j["mu"], p.m, "mu");
  p.sigma2 = j.contains("sigma2") ? broadcast(j["sigma2"], p.m, "sigma2") : std::vector<double>(p.m, 0.0);
  p.delta = j.contains("delta") && !j["delta"].is_null() ? j["delta"].get<double>()
                                                          : static_cast<double>(p.m) * p.s_max;
  p.check_shape();
  return p;
}

json to_json(const Network& g) {
  json links = json::array();
  for (const Link& l : g.links()) links.push_back({l.retailer, l.supplier});
  return json{{"n", g.n()}, {"m", g.m()}, {"links", links}};
}

Network network_from_json(const json& j, std::size_t n, std::size_t m) {
  const json& list = j.is_array() ? j : j.at("links");
  if (j.is_object()) {
    n = j.value("n", n);
    m = j.value("m", m);
  }
  std::vector<Link> links;
  for (const json& e : list) {
    if (e.is_array() && e.size() == 2) links.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
    else if (e.is_object()) links.push_back({field<std::size_t>(e, "retailer"), field<std::size_t>(e, "supplier")});
    else throw Error(ErrorKind::invalid_argument, "links must be [retailer, supplier] pairs");
  }
  return Network::from_links(n, m, links);
}

json to_json(const PriceVector& w) {
  std::vector<bool> ll(w.size(), false);
  for (std::size_t j = 0; j < w.size(); ++j) ll[j] = w.is_left_limit(j);
  return json{{"w", w.w}, {"left_limit", ll}};
}

PriceVector prices_from_json(const json& j) {
  if (j.is_array()) return PriceVector(j.get<std::vector<double>>());
  PriceVector w(field<std::vector<double>>(j, "w"));
  if (j.contains("left_limit")) {
    auto ll = j["left_limit"].get<std::vector<bool>>();
    if (ll.size() != w.size()) throw Error(ErrorKind::invalid_argument, "left_limit length differs from w");
    w.left_limit = std::move(ll);
  }
  return w;
}

json to_json(const WelfareBreakdown& wb) {
  static const char* kinds[] = {"expected", "realized", "delta"};
  return json{{"retailer", wb.retailer_total}, {"supplier", wb.supplier_total},
              {"consumer", wb.consumer_surplus}, {"total", wb.total},
              {"kind", kinds[static_cast<int>(wb.kind)]}};
}

json to_json(const EquilibriumSummary& s) {
  return json{{"network", to_json(s.network)}, {"K", s.k}, {"degrees", s.degrees},
              {"links", s.network.link_count()}, {"activation", s.activation},
              {"selected", s.selected}, {"steps", s.steps}};
}

json to_json(const VerificationReport& r) {
  json retailers = json::array();
  for (const auto& c : r.retailers)
    retailers.push_back({{"retailer", c.retailer}, {"current", c.current}, {"best_deviation", c.best_deviation},
                         {"best_links", c.best_links}, {"profitable", c.profitable}});
  return json{{"oracle", to_string(r.mode)}, {"certified", r.certified}, {"failures", r.failures},
              {"evaluated", r.evaluated}, {"retailers", retailers}};
}

json to_json(const HomogeneousOutcome& h) {
  json j{{"z", h.z}, {"K", h.k_star}, {"may_drop_one", h.may_drop_one}, {"d", h.degree},
         {"links", h.links}, {"welfare", h.welfare}, {"welfare_direct", h.welfare_direct}};
  j["d_if_dropped"] = h.degree_if_dropped ? json(*h.degree_if_dropped) : json(nullptr);
  return j;
}

json to_json(const PlannerSolution& s) {
  return json{{"K_opt", s.k_opt}, {"y", s.y}, {"welfare_opt", s.welfare_opt},
              {"welfare_direct", s.welfare_direct}, {"network", to_json(s.network)},
              {"K_enumerated", s.k_enumerated}, {"welfare_enumerated", s.welfare_enumerated}};
}

json to_json(const PriceEquilibrium& e) {
  json j{{"case", to_string(e.kind)}, {"w_star", to_json(e.w_star)}, {"K_ref", e.k_ref},
         {"admissible_K", e.admissible_k}, {"raw_price", e.raw_price},
         {"clamped_negative", e.clamped_negative}, {"welfare_delta", to_json(e.welfare_delta)}};
  j["improved"] = e.improved ? json(*e.improved) : json(nullptr);
  j["others_interval"] =
      e.others_interval ? json::array({e.others_interval->first, e.others_interval->second}) : json(nullptr);
  j["homogeneous"] = e.homogeneous ? to_json(*e.homogeneous) : json(nullptr);
  return j;
}

json to_json(const PriceDeviationReport& r) {
  json suppliers = json::array();
  for (const auto& s : r.suppliers)
    suppliers.push_back({{"supplier", s.supplier}, {"activation", s.activation}, {"current", s.current},
                         {"best_price", s.best_price}, {"best_payoff", s.best_payoff},
                         {"profitable", s.profitable}});
  return json{{"certified", r.certified}, {"resolution", r.resolution}, {"suppliers", suppliers}};
}

json to_json(const StatReport& r) {
  return json{{"target", r.target}, {"closed_form", r.closed_form}, {"mean", r.mean},
              {"std_error", r.std_error}, {"z", r.z}, {"draws", r.draws}, {"pass", r.pass}};
}

json to_json(const ValidationReport& r) {
  json list = json::array();
  for (const auto& v : r.violations) {
    json e{{"kind", to_string(v.kind)}, {"message", v.message}};
    e["supplier"] = v.supplier ? json(*v.supplier) : json(nullptr);
    list.push_back(e);
  }
  return json{{"ok", r.ok()}, {"violations", list}};
}

std::string_view to_string(PriceCase c) {
  switch (c) {
    case PriceCase::homogeneous: return "homogeneous";
    case PriceCase::hetero_variance: return "hetero_variance";
    case PriceCase::hetero_mean: return "hetero_mean";
  }
  return "?";
}

std::string_view to_string(Oracle o) { return o == Oracle::exhaustive ? "exhaustive" : "characterized"; }

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::shape: return "shape";
    case ViolationKind::mean_range: return "mean_range";
    case ViolationKind::negative_variance: return "negative_variance";
    case ViolationKind::moment_feasibility: return "moment_feasibility";
    case ViolationKind::link_cost: return "link_cost";
    case ViolationKind::negative_price: return "negative_price";
    case ViolationKind::price_bound: return "price_bound";
  }
  return "?";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, "'" + path + "': " + e.what());
  }
}

}  // namespace yieldnet
