#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "yieldnet/equilibrium.hpp"
#include "yieldnet/payoff.hpp"

using namespace yieldnet;

namespace {

struct RandomCase {
  GameParams p;
  PriceVector w;
  Network g;
  oracle::Pairs pairs;
};

RandomCase random_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t m = 2 + rng() % 5, n = 2 + rng() % 6;
  std::vector<double> mu(m), s2(m), w(m);
  for (std::size_t j = 0; j < m; ++j) {
    mu[j] = 0.5 + 2.5 * u(rng);
    s2[j] = u(rng);
    w[j] = 3.0 * u(rng);
  }
  RandomCase rc{GameParams::heterogeneous(n, m, 4.0, mu, s2, 0.2 + u(rng), 10.0 + 20.0 * u(rng)), PriceVector(w), {}, {}};
  std::vector<Link> links;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (u(rng) < 0.35) {
        links.push_back({i, j});
        rc.pairs.emplace_back(i, j);
      }
  rc.g = Network::from_links(n, m, links);
  return rc;
}

}  // namespace

TEST_SUITE("payoff") {
  TEST_CASE("expected payoffs and welfare match first-principles oracle") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
      const auto rc = random_case(rng);
      for (std::size_t i = 0; i < rc.p.n; ++i)
        CHECK(retailer_expected_payoff(rc.g, rc.w, rc.p, i) ==
              doctest::Approx(oracle::expected_payoff(rc.pairs, rc.p, rc.w.w, i)).epsilon(1e-12));
      CHECK(expected_welfare(rc.g, rc.p, rc.w).total ==
            doctest::Approx(oracle::expected_welfare(rc.pairs, rc.p, rc.w.w)).epsilon(1e-12));
    }
  }

  TEST_CASE("realized payoffs match the direct oracle") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int t = 0; t < 200; ++t) {
      const auto rc = random_case(rng);
      SupplyRealization s;
      for (std::size_t j = 0; j < rc.p.m; ++j) s.s.push_back(u(rng));
      double sum = 0.0;
      for (std::size_t i = 0; i < rc.p.n; ++i) {
        const double got = retailer_realized_payoff(rc.g, rc.w, rc.p, s, i);
        CHECK(got == doctest::Approx(oracle::realized_payoff(rc.pairs, rc.p, rc.w.w, s.s, i)).epsilon(1e-12));
        sum += got;
      }
      const WelfareBreakdown wb = realized_welfare(rc.g, rc.p, rc.w, s);
      CHECK(wb.retailer_total == doctest::Approx(sum));
      CHECK(wb.total == doctest::Approx(wb.retailer_total + wb.supplier_total + wb.consumer_surplus));
    }
  }

  TEST_CASE("homogeneous closed form equals the general welfare") {
    const auto p = GameParams::homogeneous(60, 12, 4.0, 2.0, 1.0, 0.5, 18.0);
    const auto s = greedy_equilibrium(p, PriceVector::uniform(12, 0.0));
    const auto wb = expected_welfare(s.network, p, PriceVector::uniform(12, 0.0));
    CHECK(wb.total == doctest::Approx(132.0));
    CHECK(expected_welfare_homogeneous(p, 8, 48) == doctest::Approx(132.0));
    CHECK(wb.supplier_total == 0.0);
    CHECK(wb.consumer_surplus == doctest::Approx(0.5 * (16.0 * 16.0 + 8.0)));
  }

  TEST_CASE("cheapest-vacant network deviation values") {
    const auto p = GameParams::homogeneous(5, 3, 4.0, 2.0, 1.0, 0.5, 18.0);
    const PriceVector w({12.0, 13.0, 13.0});
    const std::vector<Link> links{{0, 1}, {1, 1}, {2, 2}, {3, 2}};
    const Network g = Network::from_links(5, 3, links);
    CHECK(retailer_expected_payoff(g, w, p, 0) == doctest::Approx(0.0));

    const std::size_t to_zero[] = {0};
    CHECK(deviation_payoff(g, p, w, 4, to_zero) == doctest::Approx(-1.5));
    CHECK(deviation_payoff(g, p, w, 0, to_zero) == doctest::Approx(-1.5));
    const std::size_t both[] = {0, 1};
    CHECK(deviation_payoff(g, p, w, 0, both) == doctest::Approx(-3.5));
  }
}
