#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dlab/limit_map.hpp"

using namespace dlab;

TEST_CASE("pinned point values") {
  LimitMap u;
  CHECK((u.value(Vec3(0, 0, -0.5)) - Vec3(0, 0, 0.5)).norm() < 1e-14);
  CHECK((u.value(Vec3(0, 0, -2.0)) - Vec3(0, 0, -1.0)).norm() < 1e-14);
  CHECK((u.value(Vec3(0, 0, 1.5)) - Vec3(0, 0, 1.5)).norm() < 1e-14);
}

TEST_CASE("closed-form determinants match the jets and finite differences") {
  LimitMap u;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  long tested = 0;
  while (tested < 400) {
    const Vec3 p(6 * unif(rng) - 3, 6 * unif(rng) - 3, 6 * unif(rng) - 3);
    if (p.norm() > 2.95 || std::hypot(p.x(), p.y()) < 1e-3) continue;
    // keep clearly inside one region
    const double z = p.z();
    if (std::abs(z) < 0.02 || std::abs(z - 1) < 0.02) continue;
    if (std::abs(p.norm() - 1.0) < 0.02 || std::abs((p - point_P()).norm() - 1.0) < 0.02)
      continue;
    ++tested;
    const double dc = u.det(p);
    const Jet j = u.eval(p);
    CHECK(dc == doctest::Approx(determinant(j.grad)).epsilon(1e-8));
    const Mat3 fd =
        fd_jacobian([&](const Vec3& q) { return u.value(q); }, p, {.step = 1e-6});
    CHECK(dc == doctest::Approx(determinant(fd)).epsilon(1e-5));
    CHECK(dc > 0.0);
  }
}

TEST_CASE("pinned determinant examples") {
  LimitMap u;
  // lower cap at rho = 1/2, phi = pi: det = 1
  CHECK(u.det(Vec3(0, 1e-9, -0.5)) == doctest::Approx(1.0).epsilon(1e-6));
  // lower outer region at rho = 2, phi = pi: det = 1/16
  CHECK(u.det(Vec3(0, 1e-9, -2.0)) == doctest::Approx(1.0 / 16.0).epsilon(1e-6));
  // upper cap at rho = 1/2, phi = 0: det = 9
  CHECK(u.det(Vec3(0, 1e-9, 1.5)) == doctest::Approx(9.0).epsilon(1e-6));
}

TEST_CASE("slab chart") {
  LimitMap u;
  SUBCASE("corners collapse onto the spine") {
    const SlabChartJet a = u.region_d_g(1, 0), b = u.region_d_g(0, 0),
                       c = u.region_d_g(0, 1), d = u.region_d_g(1, 1);
    CHECK(Vec2(a.s, a.z).norm() < 1e-12);
    CHECK((Vec2(b.s, b.z) - Vec2(0, 1)).norm() < 1e-12);
    CHECK((Vec2(c.s, c.z) - Vec2(0, 2)).norm() < 1e-12);
    CHECK((Vec2(d.s, d.z) - Vec2(0, 3)).norm() < 1e-10);
  }
  SUBCASE("strip values") {
    const SlabChartJet g0 = u.region_d_g(2, 0);
    CHECK(g0.s == doctest::Approx(1.0));
    CHECK(g0.z == doctest::Approx(0.0));
    const SlabChartJet gm = u.region_d_g(2, 0.5);
    CHECK(gm.s == doctest::Approx(1.5));
    CHECK(gm.z == doctest::Approx(1.5));
  }
  SUBCASE("spine edges are affine") {
    for (double t : {0.25, 0.5, 0.75}) {
      const SlabChartJet bot = u.region_d_g(t, 0);  // A'B'
      CHECK(bot.s == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(bot.z == doctest::Approx(1.0 - t).epsilon(1e-12));
      const SlabChartJet left = u.region_d_g(0, t);  // B'C'
      CHECK(left.s == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(left.z == doctest::Approx(1.0 + t).epsilon(1e-12));
      const SlabChartJet top = u.region_d_g(t, 1);  // C'D'
      CHECK(top.s == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(top.z == doctest::Approx(2.0 + t).epsilon(1e-12));
    }
  }
  SUBCASE("chart Jacobian bounded on the validation grid") {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < 200; ++j) {
        const double r = (i + 0.5) / 200.0, x3 = (j + 0.5) / 200.0;
        const double det = u.region_d_g(r, x3).jac.determinant();
        lo = std::min(lo, det);
        hi = std::max(hi, det);
      }
    CHECK(lo > 1.0 / 50.0);
    CHECK(hi < 50.0);
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < 200; ++j) {
        const double r = 1.0 + 1.8 * (i + 0.5) / 200.0, x3 = (j + 0.5) / 200.0;
        CHECK(u.region_d_g(r, x3).jac.determinant() > 0.0);
      }
  }
}

TEST_CASE("interface continuity") {
  // both adjacent region formulas evaluated exactly at the interface point
  LimitMap u;
  double worst = 0;
  auto gap = [&](RegionId lhs, RegionId rhs, double r, double x3) {
    const ProfileJet a = u.profile(lhs, r, x3);
    const ProfileJet b = u.profile(rhs, r, x3);
    worst = std::max(worst, std::hypot(a.v1 - b.v1, a.v2 - b.v2));
  };
  for (long i = 0; i < 1000; ++i) {
    const double h = halton(i, 2);
    {  // lower half-space / slab at x3 = 0
      const double r = 0.02 + 2.9 * h;
      gap(r <= 1.0 ? RegionId::A : RegionId::B, RegionId::D, r, 0.0);
    }
    {  // slab / upper half-space at x3 = 1
      const double r = 0.02 + 2.7 * h;
      gap(RegionId::D, r <= 1.0 ? RegionId::E : RegionId::F, r, 1.0);
    }
    {  // lower cap / outer region at rho = 1
      const double phi = 0.5 * kPi * (1.0 + 0.999 * h);
      gap(RegionId::A, RegionId::B, std::sin(phi), std::cos(phi));
    }
    {  // upper cap / outer cap at rho = 1 about P
      const double phi = 0.5 * kPi * 0.999 * h;
      gap(RegionId::E, RegionId::F, std::sin(phi), 1.0 + std::cos(phi));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("orientation, bubble identity and injectivity probes") {
  LimitMap u;
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SUBCASE("det > 0 at random interior points") {
    long n = 0;
    while (n < 100000) {
      const Vec3 p(6 * unif(rng) - 3, 6 * unif(rng) - 3, 6 * unif(rng) - 3);
      if (p.norm() > 2.999) continue;
      ++n;
      CHECK(u.det(p) > 0.0);
    }
  }
  SUBCASE("images approach the bubble along rays into the poles") {
    for (int k = 0; k < 50; ++k) {
      const double phi_a = 0.5 * kPi + 0.5 * kPi * (k + 0.5) / 50.0;  // into O
      const double phi_e = 0.5 * kPi * (k + 0.5) / 50.0;              // into P
      std::vector<double> dist_a, dist_e, rad;
      for (double rho : {0.2, 0.1, 0.05}) {
        rad.push_back(rho);
        const Vec3 ya = u.value(rho * e_rho(0.7, phi_a));
        const Vec3 ye = u.value(point_P() + rho * e_rho(0.7, phi_e));
        dist_a.push_back(std::abs((ya - bubble_center()).norm() - kBubbleRadius));
        dist_e.push_back(std::abs((ye - bubble_center()).norm() - kBubbleRadius));
      }
      for (size_t i = 0; i < rad.size(); ++i) {
        CHECK(dist_a[i] <= 1.2 * rad[i]);
        CHECK(dist_e[i] <= 2.2 * rad[i]);
      }
    }
  }
  SUBCASE("statistically one-to-one") {
    std::vector<std::pair<Vec3, Vec3>> pts;
    while (pts.size() < 400) {
      const Vec3 p(6 * unif(rng) - 3, 6 * unif(rng) - 3, 6 * unif(rng) - 3);
      if (p.norm() > 2.99) continue;
      const double z = p.z();
      if (std::abs(z) < 1e-3 || std::abs(z - 1) < 1e-3) continue;
      if (std::abs(p.norm() - 1) < 1e-3 || std::abs((p - point_P()).norm() - 1) < 1e-3)
        continue;
      pts.emplace_back(p, u.value(p));
    }
    long violations = 0;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j)
        if ((pts[i].first - pts[j].first).norm() > 1e-3 &&
            (pts[i].second - pts[j].second).norm() == 0.0)
          ++violations;
    CHECK(violations == 0);
  }
}
