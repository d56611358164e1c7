#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include "cli/commands.hpp"
#include "yieldnet/equilibrium.hpp"
#include "yieldnet/io.hpp"
#include "yieldnet/montecarlo.hpp"
#include "yieldnet/payoff.hpp"
#include "yieldnet/planner.hpp"
#include "yieldnet/pricing.hpp"
#include "yieldnet/supplier_sets.hpp"

namespace py = pybind11;
using namespace yieldnet;

namespace {

Network network_from_pairs(std::size_t n, std::size_t m, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<Link> links;
  for (auto [i, j] : pairs) links.push_back({i, j});
  return Network::from_links(n, m, links);
}

std::vector<std::pair<std::size_t, std::size_t>> pairs_of(const Network& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const Link& l : g.links()) out.emplace_back(l.retailer, l.supplier);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Supply-chain network formation under yield uncertainty";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<GameParams>(m, "GameParams")
      .def_static("homogeneous", &GameParams::homogeneous, py::arg("n"), py::arg("m"), py::arg("s_max"),
                  py::arg("mu"), py::arg("sigma2"), py::arg("c"), py::arg("delta") = py::none())
      .def_static("heterogeneous", &GameParams::heterogeneous, py::arg("n"), py::arg("m"), py::arg("s_max"),
                  py::arg("mu"), py::arg("sigma2"), py::arg("c"), py::arg("delta") = py::none())
      .def_readwrite("n", &GameParams::n)
      .def_readwrite("m", &GameParams::m)
      .def_readwrite("s_max", &GameParams::s_max)
      .def_readwrite("delta", &GameParams::delta)
      .def_readwrite("mu", &GameParams::mu)
      .def_readwrite("sigma2", &GameParams::sigma2)
      .def_readwrite("c", &GameParams::c)
      .def("is_homogeneous", &GameParams::is_homogeneous)
      .def("value", &GameParams::value)
      .def("price_bound", &GameParams::price_bound)
      .def("__repr__", [](const GameParams& p) { return "GameParams(" + to_json(p).dump() + ")"; });

  py::class_<PriceVector>(m, "PriceVector")
      .def(py::init<std::vector<double>>())
      .def_static("uniform", &PriceVector::uniform)
      .def_readwrite("w", &PriceVector::w)
      .def_readwrite("left_limit", &PriceVector::left_limit)
      .def("with_price", &PriceVector::with_price)
      .def("__len__", &PriceVector::size);

  py::class_<Network>(m, "Network")
      .def(py::init<std::size_t, std::size_t>())
      .def(py::init(&network_from_pairs), py::arg("n"), py::arg("m"), py::arg("links"))
      .def_property_readonly("n", &Network::n)
      .def_property_readonly("m", &Network::m)
      .def_property_readonly("K", &Network::active_count)
      .def_property_readonly("link_count", &Network::link_count)
      .def_property_readonly("degrees", [](const Network& g) {
        return std::vector<std::size_t>(g.degrees().begin(), g.degrees().end());
      })
      .def("links", &pairs_of)
      .def("active_suppliers", &Network::active_suppliers)
      .def("vacant_suppliers", &Network::vacant_suppliers)
      .def("with_link", &Network::with_link)
      .def("without_link", &Network::without_link)
      .def(py::self == py::self);

  py::class_<WelfareBreakdown>(m, "WelfareBreakdown")
      .def_readonly("retailer", &WelfareBreakdown::retailer_total)
      .def_readonly("supplier", &WelfareBreakdown::supplier_total)
      .def_readonly("consumer", &WelfareBreakdown::consumer_surplus)
      .def_readonly("total", &WelfareBreakdown::total);

  py::class_<EquilibriumSummary>(m, "EquilibriumSummary")
      .def_readonly("network", &EquilibriumSummary::network)
      .def_readonly("K", &EquilibriumSummary::k)
      .def_readonly("degrees", &EquilibriumSummary::degrees)
      .def_readonly("activation", &EquilibriumSummary::activation)
      .def_readonly("selected", &EquilibriumSummary::selected);

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("certified", &VerificationReport::certified)
      .def_readonly("failures", &VerificationReport::failures)
      .def_readonly("evaluated", &VerificationReport::evaluated);

  py::class_<HomogeneousOutcome>(m, "HomogeneousOutcome")
      .def_readonly("z", &HomogeneousOutcome::z)
      .def_readonly("K", &HomogeneousOutcome::k_star)
      .def_readonly("may_drop_one", &HomogeneousOutcome::may_drop_one)
      .def_readonly("degree", &HomogeneousOutcome::degree)
      .def_readonly("links", &HomogeneousOutcome::links)
      .def_readonly("welfare", &HomogeneousOutcome::welfare)
      .def_readonly("welfare_direct", &HomogeneousOutcome::welfare_direct);

  py::class_<PlannerSolution>(m, "PlannerSolution")
      .def_readonly("K_opt", &PlannerSolution::k_opt)
      .def_readonly("y", &PlannerSolution::y)
      .def_readonly("welfare_opt", &PlannerSolution::welfare_opt)
      .def_readonly("network", &PlannerSolution::network)
      .def_readonly("K_enumerated", &PlannerSolution::k_enumerated)
      .def_readonly("welfare_enumerated", &PlannerSolution::welfare_enumerated);

  py::class_<PriceEquilibrium>(m, "PriceEquilibrium")
      .def_readonly("w_star", &PriceEquilibrium::w_star)
      .def_readonly("K_ref", &PriceEquilibrium::k_ref)
      .def_readonly("improved", &PriceEquilibrium::improved)
      .def_readonly("raw_price", &PriceEquilibrium::raw_price)
      .def_readonly("clamped_negative", &PriceEquilibrium::clamped_negative)
      .def_readonly("welfare_delta", &PriceEquilibrium::welfare_delta)
      .def_property_readonly("case", [](const PriceEquilibrium& e) { return std::string(to_string(e.kind)); });

  py::class_<StatReport>(m, "StatReport")
      .def_readonly("target", &StatReport::target)
      .def_readonly("closed_form", &StatReport::closed_form)
      .def_readonly("mean", &StatReport::mean)
      .def_readonly("std_error", &StatReport::std_error)
      .def_readonly("z", &StatReport::z)
      .def_readonly("passed", &StatReport::pass);

  m.def("validation_ok", [](const GameParams& p) { return validate_params(p).ok(); });
  m.def("expected_welfare", &expected_welfare);
  m.def("greedy_equilibrium", [](const GameParams& p, const PriceVector& w, bool packed) {
    return greedy_equilibrium(p, w, packed ? LinkPacking::packed : LinkPacking::fresh);
  }, py::arg("p"), py::arg("w"), py::arg("packed") = false);
  m.def("verify_retailer_nash", [](const Network& g, const GameParams& p, const PriceVector& w, const std::string& oracle) {
    return verify_retailer_nash(g, p, w, oracle == "characterized" ? Oracle::characterized : Oracle::exhaustive);
  }, py::arg("g"), py::arg("p"), py::arg("w"), py::arg("oracle") = "exhaustive");
  m.def("selection_filter", &selection_filter);
  m.def("activation_likelihoods", &activation_likelihoods);
  m.def("homogeneous_outcome", &homogeneous_outcome);
  m.def("planner_optimum", &planner_optimum);
  m.def("price_of_stability", &price_of_stability);
  m.def("price_equilibrium", &price_equilibrium);
  m.def("k_max", [](const GameParams& p, const PriceVector& w) { return k_max(p, w); });
  m.def("validate_all", [](const Network& g, const GameParams& p, const PriceVector& w, const std::string& family,
                           std::uint64_t draws, std::uint64_t seed) {
    MonteCarloOptions opt;
    opt.family = parse_family(family);
    opt.draws = draws;
    opt.seed = seed;
    return validate_all(Scenario{g, p, w}, opt);
  }, py::arg("g"), py::arg("p"), py::arg("w"), py::arg("family") = "beta", py::arg("draws") = 100000,
     py::arg("seed") = 0);
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str());
  });
}
