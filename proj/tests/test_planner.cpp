#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "yieldnet/planner.hpp"
#include "yieldnet/pricing.hpp"

using namespace yieldnet;

TEST_SUITE("planner") {
  TEST_CASE("planner examples") {
    const auto sol = planner_optimum(GameParams::homogeneous(1000, 50, 4.0, 2.0, 1.0, 0.5, 18.0));
    CHECK(sol.y == doctest::Approx(8.75));
    CHECK(sol.k_opt == 8);
    CHECK(sol.welfare_opt == doctest::Approx(152.0));
    CHECK(sol.welfare_direct == doctest::Approx(152.0));
    CHECK(sol.network.active_count() == 8);
    for (std::size_t j = 0; j < 8; ++j) CHECK(sol.network.degree(j) == 1);
    CHECK(sol.network.has_link(3, 3));

    const auto flat = planner_optimum(GameParams::homogeneous(1000, 50, 4.0, 1.0, 0.0, 1.0, 10.0));
    CHECK(flat.k_opt == 9);
    CHECK(flat.welfare_opt == doctest::Approx(40.5));
  }

  TEST_CASE("empty market and boundary optimum") {
    const auto empty = planner_optimum(GameParams::homogeneous(10, 10, 4.0, 1.0, 3.0, 0.2, 2.0));
    CHECK(empty.y < 1.0);
    CHECK(empty.k_opt == 0);
    CHECK(empty.welfare_opt == 0.0);
    CHECK(empty.network.link_count() == 0);

    try {
      (void)planner_optimum(GameParams::homogeneous(1000, 5, 4.0, 2.0, 1.0, 0.5, 18.0));
      FAIL("expected boundary optimum");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::boundary_optimum);
    }
    CHECK_THROWS_AS(planner_optimum(GameParams::homogeneous(6, 50, 4.0, 2.0, 1.0, 0.5, 18.0)), Error);
  }

  TEST_CASE("price of stability") {
    CHECK(price_of_stability(GameParams::homogeneous(1000, 50, 4.0, 2.0, 1.0, 0.5, 18.0)) ==
          doctest::Approx(132.0 / 152.0));
    CHECK(price_of_stability(GameParams::homogeneous(1000, 50, 4.0, 1.0, 0.0, 1.0, 10.0)) == doctest::Approx(1.0));
  }

  TEST_CASE("closed form, enumeration, and ordering on random instances") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < 300) {
      const double mu = 0.2 + 3.0 * u(rng);
      const double s2 = 2.0 * u(rng);
      const double delta = mu + 1.0 + 40.0 * u(rng);
      const double v1 = mu * (delta - mu) - s2;
      if (v1 <= 0.0) continue;
      const double c = v1 * (0.01 + 0.99 * u(rng));
      const auto p = GameParams::homogeneous(100000, 10000, 4.0, mu, s2, c, delta);
      const auto sol = planner_optimum(p);
      if (sol.k_opt == 0) continue;
      CHECK(sol.welfare_opt == doctest::Approx(oracle::homogeneous_welfare(mu, s2, delta, c, sol.k_opt, sol.k_opt)).epsilon(1e-9));

      // The integer argmax of the concave welfare parabola is floor(y) or ceil(y).
      const auto [k_enum, w_enum] = oracle::planner_enumerate(mu, s2, delta, c, sol.k_opt + 2);
      CHECK(sol.k_enumerated == k_enum);
      CHECK((k_enum == sol.k_opt || k_enum == sol.k_opt + 1));
      CHECK(w_enum >= sol.welfare_opt - 1e-9 * std::max(1.0, w_enum));

      const auto eq = homogeneous_outcome(p);
      CHECK(eq.k_star <= sol.k_opt);
      CHECK(eq.welfare <= sol.welfare_opt * (1.0 + 1e-9) + 1e-9);
      ++done;
    }
  }
}
