#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "reachquant/reachability.hpp"
#include "reachquant/rng.hpp"
#include "test_support.hpp"

using namespace reachquant;

TEST_CASE("beta inflation formula and edge cases") {
  const Mat a = refsys::plant().A;  // |A| = 5
  const ReachParams p{a, 0.1, 2.0};
  CHECK(beta_inflation(p) == doctest::Approx(std::exp(0.5) / 5.0 * 2.0).epsilon(1e-15));

  CHECK(beta_inflation({a, 0.1, 0.0}) == 0.0);
  CHECK_THROWS_AS(beta_inflation({a, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(beta_inflation({a, 0.1, -1.0}), std::invalid_argument);

  const Mat zero(2, 2, 0.0);
  CHECK_THROWS_AS(beta_inflation({zero, 0.5, 1.0}), std::domain_error);
  CHECK(beta_inflation({zero, 0.5, 1.0}, true) == doctest::Approx(0.5));
}

TEST_CASE("terminal over-approximation is the mapped set plus an inflation cube") {
  const Mat a = refsys::plant().A;
  const ReachParams p{a, 0.1, 1.0};
  const Zonotope x0 = to_zonotope(Hyperrect::cube({10.0, -5.0}, 1.0));
  const Zonotope reach = terminal_reach_overapprox(p, x0);

  const Vec want_center = mat_exp(a, 0.1) * Vec{10.0, -5.0};
  CHECK(reach.center[0] == doctest::Approx(want_center[0]).epsilon(1e-14));
  CHECK(reach.center[1] == doctest::Approx(want_center[1]).epsilon(1e-14));
  // Two mapped box generators plus two inflation generators.
  CHECK(reach.generator_count() == 4);

  const Hyperrect hull = interval_hull(reach);
  const double beta = beta_inflation(p);
  const Mat lam_bar = entrywise_abs(mat_exp(a, 0.1));
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(hull.half_widths[i] ==
          doctest::Approx(lam_bar(i, 0) + lam_bar(i, 1) + beta).epsilon(1e-13));

  // mu = 0 keeps the mapped set untouched.
  const Zonotope tight = terminal_reach_overapprox({a, 0.1, 0.0}, x0);
  CHECK(tight.generator_count() == 2);

  CHECK_THROWS_AS(terminal_reach_overapprox(p, Zonotope::singleton({1.0, 2.0, 3.0})),
                  std::invalid_argument);
}

TEST_CASE("endpoint sampling stays inside the over-approximation") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Mat a(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) a(i, j) = rng.uniform(-2.0, 2.0);
    const double T = rng.uniform(0.05, 0.4);
    const double mu = rng.uniform(0.0, 1.0);
    const Hyperrect x0{{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)},
                       {rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)}};

    const Hyperrect hull = interval_hull(terminal_reach_overapprox({a, T, mu}, to_zonotope(x0)));

    for (int s = 0; s < 10; ++s) {
      Vec z{x0.center[0] + rng.uniform(-1.0, 1.0) * x0.half_widths[0],
            x0.center[1] + rng.uniform(-1.0, 1.0) * x0.half_widths[1]};
      const Vec w{rng.uniform(-mu, mu), rng.uniform(-mu, mu)};
      const VectorField f = [&](double, const Vec& v) {
        Vec dz = a * v;
        dz[0] += w[0];
        dz[1] += w[1];
        return dz;
      };
      const int steps = 64;
      for (int q = 0; q < steps; ++q) z = rk4_step(f, q * T / steps, z, T / steps);
      CHECK(contains(hull, z, 1e-9));
    }
  }
}

TEST_CASE("input error inflation") {
  // mu folds the plant input and the output-injection correction together.
  const double got = input_error_inflation(5.0, 0.1, 0.5, refsys::kKhNorm, refsys::kEstBound0);
  const double mu = 0.5 + refsys::kKhNorm * refsys::kEstBound0;
  CHECK(got == doctest::Approx(std::expm1(0.5) / 5.0 * mu).epsilon(1e-14));

  // The exponential variant keeps the +1 term and is strictly larger.
  const double loose = input_error_inflation(5.0, 0.1, 0.5, refsys::kKhNorm, refsys::kEstBound0,
                                             GrowthBound::Exponential);
  CHECK(loose > got);
  CHECK(loose == doctest::Approx(std::exp(0.5) / 5.0 * mu).epsilon(1e-14));

  CHECK(input_error_inflation(5.0, 0.1, 0.0, 0.0, 0.0) == 0.0);
  CHECK(input_error_inflation(0.0, 0.1, 0.5, 0.0, 0.0, GrowthBound::Integral, true) ==
        doctest::Approx(0.05));
  CHECK_THROWS_AS(input_error_inflation(0.0, 0.1, 0.5, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(input_error_inflation(5.0, -0.1, 0.5, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(input_error_inflation(5.0, 0.1, -0.5, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("input error inflation is monotone in every argument") {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const double an = rng.uniform(0.1, 6.0);
    const double T = rng.uniform(0.01, 0.5);
    const double ub = rng.uniform(0.0, 1.0);
    const double kh = rng.uniform(0.0, 6.0);
    const double eb = rng.uniform(0.0, 3.0);
    const double base = input_error_inflation(an, T, ub, kh, eb);
    CHECK(input_error_inflation(an + 0.5, T, ub, kh, eb) >= base);
    CHECK(input_error_inflation(an, T + 0.1, ub, kh, eb) >= base);
    CHECK(input_error_inflation(an, T, ub + 0.1, kh, eb) >= base);
    CHECK(input_error_inflation(an, T, ub, kh + 0.5, eb) >= base);
    CHECK(input_error_inflation(an, T, ub, kh, eb + 0.5) >= base);
  }
}
