#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlab/blocks.hpp"
#include "dlab/quadrature.hpp"

using namespace dlab;

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(RecoveryParams(0.05, 1.0 / 3.0));
  CHECK_NOTHROW(RecoveryParams(0.2, 0.25));
  CHECK_THROWS_AS(RecoveryParams(0.3, 0.25), HypothesisViolated);
  CHECK_THROWS_AS(RecoveryParams(0.05, 0.5), HypothesisViolated);
  CHECK_THROWS_AS(RecoveryParams(-0.1, 0.25), HypothesisViolated);
}

TEST_CASE("zenith profile f and its inverse") {
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    Blocks B(RecoveryParams(eps, 1.0 / 3.0));
    CHECK(B.f(0.0) == doctest::Approx(0.0));
    CHECK(B.f(eps) == doctest::Approx(0.5 * kPi).epsilon(1e-14));
    CHECK(B.g(0.0) == doctest::Approx(0.0));
    CHECK(B.g(0.5 * kPi) == doctest::Approx(eps).epsilon(1e-13));
    // inverse property on a grid
    for (int i = 1; i < 40; ++i) {
      const double r = eps * i / 40.0;
      CHECK(B.g(B.f(r)) == doctest::Approx(r).epsilon(1e-11));
    }
    // g(phi) <= eps^2 on the first half-quadrant
    for (int i = 0; i <= 40; ++i) {
      const double phi = 0.25 * kPi * i / 40.0;
      CHECK(B.g(phi) <= eps * eps * (1 + 1e-12));
    }
    // derivative identities by finite differences
    for (double r : {0.3 * eps, 0.7 * eps}) {
      const double h = 1e-7 * eps;
      CHECK(B.f_prime(r) ==
            doctest::Approx((B.f(r + h) - B.f(r - h)) / (2 * h)).epsilon(1e-6));
      CHECK(B.f_second(r) ==
            doctest::Approx((B.f_prime(r + h) - B.f_prime(r - h)) / (2 * h))
                .epsilon(1e-5));
    }
  }
}

TEST_CASE("W is the removable-singularity quotient") {
  Blocks B(RecoveryParams(0.05, 1.0 / 3.0));
  const double eps = 0.05;
  // W(r) = r / (sin f f') away from zero, continued smoothly through r = 0
  for (double r : {1e-3 * eps * eps, 0.1 * eps * eps, 0.5 * eps, eps}) {
    const double direct = r / (std::sin(B.f(r)) * B.f_prime(r));
    CHECK(B.W(r) == doctest::Approx(direct).epsilon(1e-9));
  }
  const double fp0 = B.f_prime(0.0);
  CHECK(B.W(0.0) == doctest::Approx(1.0 / (fp0 * fp0)));
  // derivative vs finite differences
  for (double r : {0.2 * eps, 0.6 * eps, 0.95 * eps}) {
    const double h = 1e-6 * eps;
    CHECK(B.W_prime(r) ==
          doctest::Approx((B.W(r + h) - B.W(r - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("cap kernel h and its closed-form antiderivative") {
  Blocks B(RecoveryParams(0.05, 0.25));
  QuadSpec spec;
  spec.rtol = 1e-12;
  SUBCASE("h vanishes at the equator and is positive before it") {
    CHECK(std::abs(B.h(0.3, 0.5 * kPi)) < 1e-15);
    for (double s : {0.0, 0.3, 0.9})
      for (double phi : {0.01, 0.7, 1.4}) CHECK(B.h(s, phi) > 0.0);
  }
  SUBCASE("H integrates h exactly") {
    for (double phi : {0.05, 0.6, 1.2, 1.5}) {
      for (double s : {0.25, 0.7, 1.0}) {
        const double quad =
            integrate_1d([&](double sig) { return B.h(sig, phi); }, 0.0, s, spec).value;
        CHECK(B.H(s, phi) == doctest::Approx(quad).epsilon(1e-11));
      }
    }
    CHECK(B.H(0.0, 0.8) == doctest::Approx(0.0));
  }
  SUBCASE("phi-partials match finite differences") {
    for (double phi : {0.2, 0.9, 1.3}) {
      const double h = 1e-7;
      CHECK(B.h_phi_partial(0.4, phi) ==
            doctest::Approx((B.h(0.4, phi + h) - B.h(0.4, phi - h)) / (2 * h))
                .epsilon(1e-4));
      CHECK(B.H_phi_partial(0.7, phi) ==
            doctest::Approx((B.H(0.7, phi + h) - B.H(0.7, phi - h)) / (2 * h))
                .epsilon(1e-4));
    }
  }
}

TEST_CASE("axis spine omega") {
  const double eps = 0.05, gamma = 1.0 / 3.0;
  Blocks B(RecoveryParams(eps, gamma));
  const double eg = std::pow(eps, gamma);
  CHECK(B.omega(0.0) == doctest::Approx(eg));
  CHECK(B.omega(1.0) == doctest::Approx(2.0 * eg));
  CHECK(B.omega(2.0) == doctest::Approx(B.eta()).epsilon(1e-14));
  CHECK(B.omega(3.0) == doctest::Approx(6.0 * eg));
  // continuity at the junctions
  for (double xi : {1.0, 2.0})
    CHECK(B.omega(xi - 1e-10) == doctest::Approx(B.omega(xi + 1e-10)).epsilon(1e-8));
  // derivative vs finite differences inside each branch
  for (double xi : {0.5, 1.5, 2.5}) {
    const double h = 1e-7;
    CHECK(B.omega_prime(xi) ==
          doctest::Approx((B.omega(xi + h) - B.omega(xi - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("radial reparametrization r_hat") {
  const double eps = 0.05, gamma = 0.25;
  Blocks B(RecoveryParams(eps, gamma));
  const double knee = std::pow(eps, 2 * gamma);
  CHECK(B.r_hat(eps) == doctest::Approx(0.0));
  CHECK(B.r_hat(knee) == doctest::Approx(knee));
  CHECK(B.r_hat(0.9) == doctest::Approx(0.9));
  CHECK(B.r_hat(0.5 * (eps + knee)) < 0.5 * (eps + knee));
  for (double r : {0.6 * knee, 0.99 * knee, 1.5 * knee}) {
    const double h = 1e-8;
    CHECK(B.r_hat_prime(r) ==
          doctest::Approx((B.r_hat(r + h) - B.r_hat(r - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("shell radial blocks and their derivatives") {
  Blocks B(RecoveryParams(0.08, 1.0 / 3.0));
  const double eg = std::pow(0.08, 1.0 / 3.0);
  // Q_lower(pi/2) = 2 eps^gamma exactly (the kernel vanishes at the equator)
  CHECK(B.Q_lower(0.5 * kPi) == doctest::Approx(2.0 * eg).epsilon(1e-12));
  for (double phi : {0.1, 0.8, 1.4}) {
    const double h = 1e-7;
    CHECK(B.Q_lower_prime(phi) ==
          doctest::Approx((B.Q_lower(phi + h) - B.Q_lower(phi - h)) / (2 * h))
              .epsilon(1e-5));
    CHECK(B.Q_upper_prime(phi) ==
          doctest::Approx((B.Q_upper(phi + h) - B.Q_upper(phi - h)) / (2 * h))
              .epsilon(1e-5));
    // the lower block dominates cos phi + eps^gamma
    CHECK(B.Q_lower(phi) >= std::cos(phi) + eg - 1e-12);
  }
}
