#include "qemforge/extrapolation.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qemforge;

TEST_CASE("Richardson coefficients for standard node sets") {
  const auto b2 = richardson_coefficients({1.0, 2.0});
  CHECK(b2[0] == Catch::Approx(2.0));
  CHECK(b2[1] == Catch::Approx(-1.0));

  const auto b18 = richardson_coefficients({1.0, 1.8});
  CHECK(b18[0] == Catch::Approx(2.25));
  CHECK(b18[1] == Catch::Approx(-1.25));

  const auto b15 = richardson_coefficients({1.0, 1.5});
  CHECK(b15[0] == Catch::Approx(3.0));
  CHECK(b15[1] == Catch::Approx(-2.0));
}

TEST_CASE("coefficients satisfy the vanishing-moment conditions") {
  const std::vector<double> nodes = {1.0, 1.3, 2.0, 2.6};
  const auto beta = richardson_coefficients(nodes);
  for (std::size_t power = 0; power < nodes.size(); ++power) {
    double moment = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      moment += beta[j] * std::pow(nodes[j], static_cast<double>(power));
    CHECK(moment == Catch::Approx(power == 0 ? 1.0 : 0.0).margin(1e-9));
  }
}

TEST_CASE("invalid node sets are rejected") {
  CHECK_THROWS_AS(richardson_coefficients({}), std::invalid_argument);
  CHECK_THROWS_AS(richardson_coefficients({0.5, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(richardson_coefficients({1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(richardson_coefficients({1, 2, 3, 4, 5, 6}), std::invalid_argument);
}

TEST_CASE("extrapolation removes the linear noise term exactly") {
  // f(r) = a + b r: the two-node estimate recovers a.
  const double a = 0.42, b = -0.3;
  const auto res = extrapolate({1.0, 2.0}, {a + b, a + 2.0 * b});
  CHECK(res.mean == Catch::Approx(a).margin(1e-12));
  CHECK(res.gamma_amplification == Catch::Approx(3.0));
}

TEST_CASE("standard errors combine in quadrature with beta weights") {
  const auto res = extrapolate({1.0, 2.0}, {1.0, 1.0}, {0.1, 0.2});
  CHECK(res.stderr_ ==
        Catch::Approx(std::sqrt(4.0 * 0.01 + 1.0 * 0.04)).margin(1e-12));
}

TEST_CASE("boosted run plan applies r and r^2 scaling") {
  const auto runs = plan_boosted_runs({1.0, 1.5}, 2.0, /*linear_in_time_noise=*/false);
  CHECK(runs[1].duration == Catch::Approx(3.0));
  CHECK(runs[1].residual_boost == Catch::Approx(1.5));
  const auto linear = plan_boosted_runs({1.0, 1.5}, 2.0, /*linear_in_time_noise=*/true);
  CHECK(linear[1].residual_boost == Catch::Approx(2.25));
}

TEST_CASE("truncation bound evaluates the stated formula") {
  // Two nodes, r_max = 2: gamma = 3, order = 2, 2! = 2.
  const double c = 1.5, delta = 0.2, shots = 1.0e4, onorm = 1.0, strength = 0.05;
  const double expected =
      3.0 * (c * 4.0 * delta / std::sqrt(shots) + onorm * std::pow(2.0 * strength, 2) / 2.0);
  CHECK(truncation_bound({1.0, 2.0}, c, delta, shots, onorm, strength) ==
        Catch::Approx(expected).margin(1e-12));
}
