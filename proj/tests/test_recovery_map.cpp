#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlab/recovery_map.hpp"

using namespace dlab;

namespace {
const LimitMap& shared_limit() {
  static LimitMap u;
  return u;
}
RecoveryMap make(double eps, double gamma) {
  return RecoveryMap(RecoveryParams(eps, gamma), &shared_limit());
}
}  // namespace

TEST_CASE("pinned values") {
  const double eps = 0.05, gamma = 1.0 / 3.0;
  RecoveryMap rec = make(eps, gamma);
  const double eg = std::pow(eps, gamma);
  // tube wall at height 0: radius 2 eps^gamma straight out
  CHECK((rec.eval_tube(eps, 0.0).value - 2.0 * eg * e_r(0.0)).norm() < 1e-12);
  // lower shell at rho = 1 maps onto the sphere of radius eps^gamma
  for (double psi : {0.1, 0.7, 1.4}) {
    const Jet j = rec.eval_shell_lower(1.0, psi);
    CHECK(j.value.norm() == doctest::Approx(eg).epsilon(1e-12));
  }
  // slab interface with the lower outer region at x3 = 0, r >= 1
  for (double r : {1.0, 1.5, 2.5}) {
    const Vec3 v = rec.eval_slab(r, 0.0).value;
    const Vec3 expected = (eg + (r - 1.0) / std::sqrt(2.0)) * e_r(0.0) -
                          (r - 1.0) / std::sqrt(2.0) * e_3();
    CHECK((v - expected).norm() < 1e-10);
  }
}

TEST_CASE("rewrapping map psi") {
  RecoveryMap rec = make(0.05, 1.0 / 3.0);
  const double r2 = std::sqrt(2.0);
  SUBCASE("fixes the interface ray pointwise") {
    CHECK((rec.psi(Vec2(1, 0)) - Vec2(1, 0)).norm() < 1e-10);
    for (double t : {0.2, 0.7, 0.99}) {
      const Vec2 q(1 + t, -t);  // on r = 1 + |x3|
      CHECK((rec.psi(q) - q).norm() < 1e-9);
    }
  }
  SUBCASE("doubles the zenith angle on the inner arc") {
    for (double fb : {0.75 * kPi, 7.0 * kPi / 8.0, 0.95 * kPi}) {
      const Vec2 q(r2 * std::sin(fb), 1 + r2 * std::cos(fb));
      const double eta = 2.0 * (kPi - fb);
      const Vec2 expected(std::sin(eta), std::cos(eta));
      CHECK((rec.psi(q) - expected).norm() < 1e-9);
    }
  }
  SUBCASE("identity far away") {
    for (double fb : {0.8 * kPi, 0.9 * kPi, 0.99 * kPi}) {
      const Vec2 q(3 * std::sin(fb), 1 + 3 * std::cos(fb));
      CHECK((rec.psi(q) - q).norm() < 1e-12);
    }
  }
  SUBCASE("positive Jacobian on the validation grid") {
    // 400-point grid over the wedge
    int bad = 0;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        const double R = r2 + (2 * r2 - r2) * (i + 0.5) / 20.0;
        const double fb = 0.75 * kPi + 0.25 * kPi * (j + 0.5) / 20.0;
        const Vec2 q(R * std::sin(fb), 1 + R * std::cos(fb));
        const Mat2 J = rec.psi_jacobian(q);
        if (J.determinant() <= 0) ++bad;
      }
    CHECK(bad == 0);
  }
  SUBCASE("image stays in the target region") {
    for (long i = 0; i < 4000; ++i) {
      const Vec2 h = halton2(i);
      const double R = r2 + r2 * h.x();
      const double fb = 0.75 * kPi + 0.25 * kPi * h.y();
      const Vec2 w = rec.psi(Vec2(R * std::sin(fb), 1 + R * std::cos(fb)));
      const bool in_wedge = w.y() <= 1e-9 && w.x() <= 1.0 - w.y() + 1e-7;
      const bool in_ball = w.squaredNorm() <= 1.0 + 1e-7;
      CHECK((in_wedge || in_ball));
    }
  }
}

TEST_CASE("incompressible regions have unit Jacobian") {
  for (double eps : {0.1, 0.05}) {
    for (double gamma : {0.25, 1.0 / 3.0}) {
      RecoveryMap rec = make(eps, gamma);
      double worst = 0;
      for (long i = 0; i < 2000; ++i) {
        const Vec2 h = halton2(i);
        const double a = 0.01 + 0.98 * h.x(), b = 0.01 + 0.98 * h.y();
        worst = std::max(worst,
                         std::abs(determinant(rec.eval_tube(eps * a, b).grad) - 1.0));
        worst = std::max(
            worst,
            std::abs(determinant(rec.eval_cap_lower(a, 0.5 * kPi * b).grad) - 1.0));
        worst = std::max(
            worst,
            std::abs(determinant(rec.eval_cap_upper(a, 0.5 * kPi * b).grad) - 1.0));
      }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("cap chart inversion") {
  RecoveryMap rec = make(0.05, 0.25);
  for (long i = 0; i < 500; ++i) {
    const Vec2 h = halton2(i);
    const double s = 0.01 + 0.98 * h.x();
    const double phi = 0.5 * kPi * (0.005 + 0.985 * h.y());
    const Vec2 lower = rec.cap_lower_invert(rec.cap_lower_point(s, phi));
    CHECK(std::hypot(lower.x() - s, lower.y() - phi) < 1e-9);
    const Vec2 upper = rec.cap_upper_invert(rec.cap_upper_point(s, phi));
    CHECK(std::hypot(upper.x() - s, upper.y() - phi) < 1e-9);
  }
}

TEST_CASE("interface continuity across the whole recovery atlas") {
  // adjacent parametric evaluators compared exactly at the interface points
  const double eps = 0.05;
  RecoveryMap rec = make(eps, 1.0 / 3.0);
  const Blocks& B = rec.blocks();
  auto gap = [&](const Jet& a, const Jet& b) { return (a.value - b.value).norm(); };
  double worst = 0;
  for (long i = 0; i < 500; ++i) {
    const double h = halton(i, 2);
    {  // tube | slab at r = eps
      const double x3 = 0.01 + 0.98 * h;
      worst = std::max(worst, gap(rec.eval_tube(eps, x3), rec.eval_slab(eps, x3)));
    }
    {  // tube | caps at x3 = 0 and x3 = 1 (cap edge s = 0 at phi = f(r))
      const double r = eps * (0.01 + 0.98 * h);
      const double phi = B.f(r);
      worst = std::max(worst, gap(rec.eval_tube(r, 0.0), rec.eval_cap_lower(0.0, phi)));
      worst = std::max(worst, gap(rec.eval_tube(r, 1.0), rec.eval_cap_upper(0.0, phi)));
    }
    {  // caps | shells at rho = eps (cap edge s = 1)
      const double phi = 0.99 * 0.5 * kPi * h;
      worst = std::max(worst,
                       gap(rec.eval_cap_lower(1.0, phi), rec.eval_shell_lower(eps, phi)));
      worst = std::max(worst,
                       gap(rec.eval_cap_upper(1.0, phi), rec.eval_shell_upper(eps, phi)));
    }
    {  // shells | outer pieces at rho = 1
      const double psi = 0.99 * 0.5 * kPi * h;
      worst = std::max(worst, gap(rec.eval_shell_lower(1.0, psi),
                                  rec.eval_outer_lower(1.0, kPi - psi)));
      worst = std::max(worst, gap(rec.eval_shell_upper(1.0, psi),
                                  rec.eval_outer_upper(1.0, psi)));
    }
    {  // lower half-space | slab at x3 = 0
      const double r = eps + (2.99 - eps) * h;
      const Jet below = r <= 1.0 ? rec.eval_shell_lower(r, 0.5 * kPi)
                                 : rec.eval_outer_lower(r, 0.5 * kPi);
      worst = std::max(worst, gap(below, rec.eval_slab(r, 0.0)));
    }
    {  // slab | upper half-space at x3 = 1
      const double r = eps + (std::sqrt(8.0) - eps - 0.02) * h;
      const Jet above = r <= 1.0 ? rec.eval_shell_upper(r, 0.5 * kPi)
                                 : rec.eval_outer_upper(r, 0.5 * kPi);
      worst = std::max(worst, gap(above, rec.eval_slab(r, 1.0)));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("shell bounds and monotone domination") {
  const LimitMap& u = shared_limit();
  for (double eps : {0.1, 0.05}) {
    RecoveryMap rec = make(eps, 1.0 / 3.0);
    const double eg = std::pow(eps, 1.0 / 3.0);
    SUBCASE("cap radial sandwich") {
      double worst = 1e300;
      for (long i = 0; i < 2000; ++i) {
        const Vec2 h = halton2(i);
        const double s = h.x(), phi = 0.5 * kPi * 0.999 * h.y();
        const double ur = rec.eval_cap_lower(s, phi).value.norm();
        const double a = std::cos(phi) + 2 * eg;
        worst = std::min(worst, ur - 0.25 * a);
        worst = std::min(worst, a - ur);
      }
      CHECK(worst > -1e-10);
    }
    SUBCASE("det Du_eps >= det Du in the lower shell") {
      long bad = 0;
      for (long i = 0; i < 10000; ++i) {
        const Vec2 h = halton2(i);
        const double rho = eps + (1 - eps) * (0.005 + 0.99 * h.x());
        const double psi = 0.5 * kPi * 0.995 * h.y();
        const Vec3 p = rho * e_rho(0.0, kPi - psi);
        if (rec.det_analytic(p) < u.det(p) - 1e-12) ++bad;
      }
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("analytic determinants agree with the jets everywhere") {
  RecoveryMap rec = make(0.05, 1.0 / 3.0);
  for (long i = 0; i < 3000; ++i) {
    const Vec3 h = halton3(i);
    const Vec3 p = 6.0 * h - Vec3(3, 3, 3);
    if (p.norm() > 2.99 || std::hypot(p.x(), p.y()) < 1e-6) continue;
    if (std::abs(p.z()) < 1e-3 || std::abs(p.z() - 1) < 1e-3) continue;
    const double da = rec.det_analytic(p);
    const double dj = determinant(rec.eval(p).grad);
    CHECK(da == doctest::Approx(dj).epsilon(1e-6));
    CHECK(da > 0.0);
  }
}

TEST_CASE("pointwise convergence to the singular map at fixed probes") {
  const LimitMap& u = shared_limit();
  const std::vector<double> epses = {0.1, 0.05, 0.02, 0.01};
  std::vector<Vec3> probes;
  for (long i = 0; probes.size() < 100; ++i) {
    const Vec3 p = 6.0 * halton3(i) - Vec3(3, 3, 3);
    if (p.norm() > 2.9) continue;
    // stay away from the segment joining the poles
    if (std::hypot(p.x(), p.y()) < 0.25 && p.z() > -0.25 && p.z() < 1.25) continue;
    probes.push_back(p);
  }
  double prev_worst = 1e300;
  for (double eps : epses) {
    RecoveryMap rec = make(eps, 1.0 / 3.0);
    double worst = 0;
    for (const auto& p : probes)
      worst = std::max(worst, (rec.value(p) - u.value(p)).norm());
    const double c_fit = worst / std::pow(eps, 1.0 / 3.0);
    CHECK(c_fit < 10.0);
    CHECK(worst < prev_worst);
    prev_worst = worst;
  }
}
