#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dlab/charts.hpp"
#include "dlab/geometry.hpp"
#include "dlab/quadrature.hpp"

using namespace dlab;

TEST_CASE("axis-aligned conversions") {
  const CylindricalPoint c = cart_to_cyl(Vec3(1, 0, 0));
  CHECK(c.r == doctest::Approx(1.0));
  CHECK(c.theta == doctest::Approx(0.0));
  CHECK(c.x3 == doctest::Approx(0.0));

  const SphericalPoint s = cart_to_sph(Vec3(0, 0, 1));
  CHECK(s.rho == doctest::Approx(1.0));
  CHECK(s.phi == doctest::Approx(0.0));
}

TEST_CASE("round trips reproduce the point away from the axis") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p(u(rng), u(rng), u(rng));
    CHECK((cyl_to_cart(cart_to_cyl(p)) - p).norm() < 1e-12);
    CHECK((sph_to_cart(cart_to_sph(p)) - p).norm() < 1e-12);
    CHECK((sph_to_cart(cart_to_sph(p, point_P())) - p).norm() < 1e-12);
  }
}

TEST_CASE("frames are orthonormal and right-handed") {
  for (double theta : {0.0, 0.7, 2.9}) {
    for (double phi : {0.1, 1.2, 3.0}) {
      const Vec3 er = e_rho(theta, phi), ep = e_phi(theta, phi), et = e_theta(theta);
      CHECK(std::abs(er.norm() - 1) < 1e-12);
      CHECK(std::abs(ep.norm() - 1) < 1e-12);
      CHECK(std::abs(er.dot(ep)) < 1e-12);
      CHECK((er.cross(ep) - et).norm() < 1e-12);
    }
  }
}

TEST_CASE("singular-map region classification") {
  CHECK(classify_limit(Vec3(0, 0, -0.5)) == RegionId::A);
  CHECK(classify_limit(Vec3(0, 0, 0.5)) == RegionId::D);
  CHECK(classify_limit(Vec3(0, 0, 1.5)) == RegionId::E);
  CHECK(classify_limit(Vec3(0, 0, -2)) == RegionId::B);
  CHECK(classify_limit(Vec3(2, 0, 1.5)) == RegionId::F);
  CHECK_THROWS_AS(classify_limit(Vec3(4, 0, 0)), OutOfDomain);
}

TEST_CASE("recovery region classification") {
  const double eps = 0.05;
  CHECK(classify_recovery(Vec3(eps / 2, 0, 0.5), eps) == RegionId::CEps);
  CHECK(classify_recovery(Vec3(0, 0, -eps / 2), eps) == RegionId::APrimeEps);
  CHECK(classify_recovery(Vec3(2 * eps, 0, 0.5), eps) == RegionId::DEps);
  CHECK(classify_recovery(Vec3(0.5, 0, -0.1), eps) == RegionId::AEps);
  CHECK(classify_recovery(Vec3(0, 0, -2), eps) == RegionId::BEps);
  CHECK(classify_recovery(Vec3(0, 0, 1 + eps / 2), eps) == RegionId::EPrimeEps);
  CHECK(classify_recovery(Vec3(0.5, 0, 1.2), eps) == RegionId::EEps);
  CHECK(classify_recovery(Vec3(2, 0, 1.5), eps) == RegionId::FEps);
}

TEST_CASE("the recovery atlas partitions the ball") {
  const double eps = 0.05;
  long counted = 0;
  for (long i = 0; i < 1000000; ++i) {
    const Vec3 h = halton3(i);
    const Vec3 p = 6.0 * h - Vec3(3, 3, 3);
    if (p.norm() > 3.0) continue;
    ++counted;
    // classification succeeds and is deterministic
    const RegionId a = classify_recovery(p, eps);
    CHECK(classify_recovery(p, eps) == a);
    // open-region membership is exclusive
    int open_hits = 0;
    const double r = std::hypot(p.x(), p.y());
    if (r < eps && p.z() > 0 && p.z() < 1) ++open_hits;
    if (p.norm() < eps && p.z() < 0) ++open_hits;
    if (p.norm() > eps && p.norm() < 1 && p.z() < 0) ++open_hits;
    if (p.norm() > 1 && p.z() < 0) ++open_hits;
    if (r > eps && p.z() > 0 && p.z() < 1) ++open_hits;
    if ((p - point_P()).norm() < eps && p.z() > 1) ++open_hits;
    if ((p - point_P()).norm() > eps && (p - point_P()).norm() < 1 && p.z() > 1)
      ++open_hits;
    if ((p - point_P()).norm() > 1 && p.z() > 1) ++open_hits;
    CHECK(open_hits <= 1);
  }
  CHECK(counted > 150000);
}

TEST_CASE("chart volumes") {
  LimitMap limit;
  QuadSpec spec;
  spec.rtol = 1e-10;
  SUBCASE("recovery tube has volume pi eps^2") {
    RecoveryMap rec(RecoveryParams(0.05, 1.0 / 3.0), &limit);
    const auto atlas = recovery_atlas(rec);
    const auto& tube = chart_for(atlas, RegionId::CEps);
    const double v =
        integrate_2d([&](double a, double b) { return tube.weight(a, b); }, tube.lo0,
                     tube.hi0, tube.lo1, tube.hi1, spec)
            .value;
    CHECK(v == doctest::Approx(kPi * 0.05 * 0.05).epsilon(1e-8));
  }
  SUBCASE("the singular-map atlas fills B(0,3)") {
    const auto atlas = limit_atlas(limit);
    double total = 0;
    for (const auto& chart : atlas)
      total += integrate_2d([&](double a, double b) { return chart.weight(a, b); },
                            chart.lo0, chart.hi0, chart.lo1, chart.hi1, spec)
                   .value;
    CHECK(total == doctest::Approx(36.0 * kPi).epsilon(1e-8));
    const auto& a = chart_for(atlas, RegionId::A);
    const double va =
        integrate_2d([&](double x, double y) { return a.weight(x, y); }, a.lo0, a.hi0,
                     a.lo1, a.hi1, spec)
            .value;
    CHECK(va == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-10));
  }
  SUBCASE("the recovery atlas fills B(0,3)") {
    RecoveryMap rec(RecoveryParams(0.1, 0.25), &limit);
    const auto atlas = recovery_atlas(rec);
    double total = 0;
    for (const auto& chart : atlas) {
      QuadSpec s = spec;
      s.grading = chart.grading;
      total += integrate_2d([&](double a, double b) { return chart.weight(a, b); },
                            chart.lo0, chart.hi0, chart.lo1, chart.hi1, s)
                   .value;
    }
    CHECK(total == doctest::Approx(36.0 * kPi).epsilon(1e-7));
  }
}

TEST_CASE("halton sequences are deterministic and fill the cube") {
  CHECK(halton(0, 2) == doctest::Approx(0.5));
  CHECK(halton(1, 2) == doctest::Approx(0.25));
  Vec3 mean = Vec3::Zero();
  for (long i = 0; i < 10000; ++i) mean += halton3(i) / 10000.0;
  CHECK((mean - Vec3(0.5, 0.5, 0.5)).norm() < 1e-2);
}
