#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "upwind/flux.hpp"

using namespace upwind;

TEST_CASE("parameter validation") {
  REQUIRE_NOTHROW(FluxParams::make(0.55, 3, 5));
  REQUIRE_NOTHROW(FluxParams::make(0.6, 2, 3));
  REQUIRE_THROWS_AS(FluxParams::make(0.4, 3, 5), std::invalid_argument);   // mu too small
  REQUIRE_THROWS_AS(FluxParams::make(0.7, 3, 5), std::invalid_argument);   // lambda0 <= mu
  REQUIRE_THROWS_AS(FluxParams::make(0.55, 2, 4), std::invalid_argument);  // not lowest terms
  REQUIRE_THROWS_AS(FluxParams::make(0.55, 7, 5), std::invalid_argument);  // lambda0 >= 1
  const FluxParams p = default_params();
  REQUIRE(p.beta() == Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("flux values") {
  const FluxParams p6 = FluxParams::make(0.6, 2, 3);
  REQUIRE(f_eval(0.0, p6) == 0.0);
  REQUIRE(f_prime(0.0, p6) == Catch::Approx(0.6).margin(1e-15));
  // asymptote f(u) ~ u + ln mu for large u; mu = 0.75 needs its own params
  const FluxParams p75 = FluxParams::make(0.75, 4, 5);
  REQUIRE(f_eval(700.0, p75) == Catch::Approx(700.0 + std::log(0.75)).margin(1e-12));
  // direct high-precision evaluation
  REQUIRE(f_eval(1.0, p6) ==
          Catch::Approx(std::log(0.4 + 0.6 * std::exp(1.0))).margin(1e-15));
  REQUIRE(f_eval(1.0, p6) == Catch::Approx(0.708513).margin(1e-6));
  // derivative against a centered difference
  const double h = 1e-6;
  const double fd = (f_eval(1.0 + h, p6) - f_eval(1.0 - h, p6)) / (2 * h);
  REQUIRE(f_prime(1.0, p6) == Catch::Approx(fd).margin(1e-8));
  // limits of the logistic form
  REQUIRE(f_prime(-40.0, p6) < 1e-15);
  REQUIRE(f_prime(40.0, p6) == Catch::Approx(1.0).margin(1e-15));
  double prev = 0.0;
  for (double u = -10.0; u <= 10.0; u += 0.25) {
    const double d = f_prime(u, p6);
    REQUIRE(d > 0.0);
    REQUIRE(d < 1.0);
    REQUIRE(d > prev);  // monotone increasing
    prev = d;
  }
}

TEST_CASE("flux convexity and CFL window") {
  const FluxParams p = default_params();
  const double h = 1e-4;
  for (double u = -10.0; u <= 10.0; u += 0.5) {
    const double f2 = (f_eval(u + h, p) - 2 * f_eval(u, p) + f_eval(u - h, p)) / (h * h);
    REQUIRE(f2 > 0.0);
    REQUIRE(f2 == Catch::Approx(f_second(u, p)).margin(1e-6));
    REQUIRE(f_prime(u, p) > 0.0);
    REQUIRE(f_prime(u, p) < 1.0);
  }
}

TEST_CASE("shock speed map") {
  const FluxParams p6 = FluxParams::make(0.6, 2, 3);
  REQUIRE_THROWS_AS(sigma_of_b(0.0, p6), std::invalid_argument);
  REQUIRE_THROWS_AS(sigma_of_b(-1.0, p6), std::invalid_argument);
  // b -> 0 limit is f'(0) = mu
  REQUIRE(sigma_of_b(1e-8, p6) == Catch::Approx(0.6).margin(1e-7));
  REQUIRE(sigma_of_b(1.0, p6) == Catch::Approx(0.708513).margin(1e-6));
  // relation nu + mu e^b = e^{b sigma(b)}
  for (double b : {0.1, 1.0, 5.0}) {
    const double s = sigma_of_b(b, p6);
    REQUIRE(std::abs(p6.nu + p6.mu * std::exp(b) - std::exp(b * s)) <= 1e-12 * std::exp(b * s));
  }
  // monotone on a grid
  double prev = 0.6;
  for (double b = 0.05; b <= 20.0; b += 0.05) {
    const double s = sigma_of_b(b, p6);
    REQUIRE(s > prev);
    REQUIRE(s < 1.0);
    prev = s;
  }
}

TEST_CASE("inverse speed map") {
  const FluxParams p6 = FluxParams::make(0.6, 2, 3);
  REQUIRE_THROWS_AS(phi_of_sigma(0.59, p6), std::invalid_argument);
  REQUIRE_THROWS_AS(phi_of_sigma(1.0, p6), std::invalid_argument);
  // roundtrips
  for (double b : {0.5, 1.0, 3.0}) {
    REQUIRE(phi_of_sigma(sigma_of_b(b, p6), p6) == Catch::Approx(b).margin(1e-9));
  }
  for (double s : {0.62, 0.70, 0.85, 0.99}) {
    REQUIRE(sigma_of_b(phi_of_sigma(s, p6), p6) == Catch::Approx(s).margin(1e-10));
  }
  // residual of the defining equation at a bisection-found root
  const double root = phi_of_sigma(0.75, p6);
  REQUIRE(std::abs(f_eval(root, p6) - 0.75 * root) < 1e-12);
  // continuity at the degenerate end
  REQUIRE(phi_of_sigma(0.6 + 1e-9, p6) < 1e-6);
}

TEST_CASE("taylor coefficients of the inverse map") {
  const FluxParams p = default_params();
  const KappaExpansion k = kappa_coeffs(p);
  REQUIRE(k.kappa0 > 0.0);
  REQUIRE(k.kappa0 == Catch::Approx(phi_of_sigma(p.lambda0(), p)).margin(1e-14));
  // inverse-function rule kappa1 = 1 / sigma'(kappa0)
  REQUIRE(k.kappa1 == Catch::Approx(1.0 / sigma_prime_of_b(k.kappa0, p)).margin(1e-6 * k.kappa1));
  // kappa2 against the closed form -sigma'' / (2 sigma'^3)
  const double sp = sigma_prime_of_b(k.kappa0, p);
  const double spp = sigma_second_of_b(k.kappa0, p);
  REQUIRE(k.kappa2 == Catch::Approx(-spp / (2.0 * sp * sp * sp)).epsilon(1e-4));
  // cubic remainder: |phi(l0+d) - quadratic model| scales like d^3
  auto rem = [&](double d) {
    return std::abs(phi_of_sigma(p.lambda0() + d, p) -
                    (k.kappa0 + k.kappa1 * d + k.kappa2 * d * d));
  };
  const double r1 = rem(1e-2), r2 = rem(5e-3);
  REQUIRE(r1 / r2 > 4.0);   // ~8 for a cubic remainder
  REQUIRE(r1 / r2 < 16.0);
}
