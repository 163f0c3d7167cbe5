#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dlab/quadrature.hpp"

using namespace dlab;

// Calibration set: closed forms the adaptive rule must reproduce at its
// stated tolerances.
TEST_CASE("1d calibration") {
  QuadSpec spec;
  spec.atol = 1e-13;
  spec.rtol = 1e-12;

  CHECK(integrate_1d([](double x) { return x * x; }, 0, 1, spec).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate_1d([](double x) { return std::sin(x); }, 0, kPi, spec).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_1d([](double x) { return std::exp(-x); }, 0, 30, spec).value ==
        doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-12));
  // mild endpoint singularity with grading
  QuadSpec graded = spec;
  graded.grading = {{0, false, 1e-12}};
  CHECK(integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0, 1, graded).value ==
        doctest::Approx(2.0).epsilon(1e-9));
  // sharp peak
  CHECK(integrate_1d([](double x) { return 1.0 / (1e-6 + (x - 0.5) * (x - 0.5)); }, 0, 1,
                     spec)
            .value == doctest::Approx(2.0 * std::atan(0.5 / 1e-3) / 1e-3).epsilon(1e-9));

  SUBCASE("logarithmic tube integral at eps = 1e-2") {
    const double eps = 1e-2;
    QuadSpec g2 = spec;
    g2.grading = {{0, false, 1e-10}};
    const double val =
        integrate_1d(
            [&](double r) { return 2.0 * r / (eps * eps * eps * eps + r * r); }, 0, eps,
            g2)
            .value;
    CHECK(val == doctest::Approx(std::log(1.0 + 1.0 / (eps * eps))).epsilon(1e-10));
  }
  SUBCASE("radial profile energy against its antiderivative at eps = 1e-1") {
    const double eps = 1e-1, al = std::atan(eps);
    auto fp = [&](double r) {
      return eps * eps / (eps * eps * eps * eps + r * r) + al / eps;
    };
    QuadSpec g2 = spec;
    g2.grading = {{0, false, 1e-9}};
    const double val =
        integrate_1d([&](double r) { return r * fp(r) * fp(r); }, 0, eps, g2).value;
    const double e2 = 1.0 / (eps * eps);
    const double closed =
        0.5 * ((1.0 - 1.0 / (1.0 + e2)) + 2.0 * eps * al * std::log(1.0 + e2) + al * al);
    CHECK(val == doctest::Approx(closed).epsilon(1e-11));
  }
}

TEST_CASE("2d calibration") {
  QuadSpec spec;
  spec.atol = 1e-12;
  spec.rtol = 1e-11;
  spec.order = 9;
  CHECK(integrate_2d([](double x, double y) { return x * y; }, 0, 1, 0, 2, spec).value ==
        doctest::Approx(1.0).epsilon(1e-11));
  const double exact = 2.0 * std::sin(1.0) - std::sin(2.0);
  CHECK(integrate_2d([](double x, double y) { return std::sin(x + y); }, 0, 1, 0, 1, spec)
            .value == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("halving tolerances stays within the reported error") {
  QuadSpec loose;
  loose.atol = 1e-6;
  loose.rtol = 1e-6;
  QuadSpec tight;
  tight.atol = 5e-7;
  tight.rtol = 5e-7;
  auto f = [](double x) { return std::sin(3 * x) / (0.1 + x * x); };
  const QuadResult a = integrate_1d(f, 0, 2, loose);
  const QuadResult b = integrate_1d(f, 0, 2, tight);
  CHECK(std::abs(a.value - b.value) <= a.error_estimate + b.error_estimate + 1e-12);
}

TEST_CASE("budget exhaustion carries a partial result") {
  QuadSpec spec;
  spec.atol = 1e-16;
  spec.rtol = 1e-16;
  spec.max_cells = 8;
  try {
    integrate_1d([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0, 1, spec);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.cells_used >= 8);
    CHECK(std::isfinite(e.partial_value));
    CHECK(e.error_estimate > 0);
  }
}

TEST_CASE("sphere quadrature") {
  QuadSpec spec;
  spec.rtol = 1e-11;
  spec.atol = 1e-12;
  SUBCASE("areas") {
    const double area =
        integrate_sphere(Vec3(0, 0, 0.5), 0.5, [](const Vec3&, const Vec3&) { return 1.0; },
                         spec)
            .value;
    CHECK(area == doctest::Approx(kPi).epsilon(1e-10));
  }
  SUBCASE("divergence theorem for the identity map") {
    // flux of g(y) = y through the unit sphere = 3 |B| = 4 pi
    const double flux = integrate_sphere(Vec3::Zero(), 1.0,
                                         [](const Vec3& x, const Vec3& nu) {
                                           return x.dot(nu);
                                         },
                                         spec)
                            .value;
    CHECK(flux == doctest::Approx(4.0 * kPi).epsilon(1e-10));
  }
  SUBCASE("non-axisymmetric density") {
    // int over unit sphere of x^2 = 4 pi / 3
    const double v = integrate_sphere(Vec3::Zero(), 1.0,
                                      [](const Vec3& x, const Vec3&) {
                                        return x.x() * x.x();
                                      },
                                      spec)
                         .value;
    CHECK(v == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("surface of revolution area") {
  SUBCASE("cylinder side") {
    std::vector<Vec2> seg = {{1.0, 0.0}, {1.0, 2.0}};
    CHECK(revolve_arc_area(seg) == doctest::Approx(2 * kPi * 2.0));
  }
  SUBCASE("half circle profile revolves to the sphere") {
    std::vector<Vec2> arc;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
      const double t = kPi * i / n;
      arc.emplace_back(0.5 * std::sin(t), 0.5 + 0.5 * std::cos(t));
    }
    CHECK(revolve_arc_area(arc) == doctest::Approx(kPi).epsilon(1e-6));
  }
}
