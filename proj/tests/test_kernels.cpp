#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dlab/kernels.hpp"

using namespace dlab;

namespace {
Mat3 random_matrix(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = u(rng);
  return m;
}

// cofactor through explicit 2x2 minors, as an independent oracle
Mat3 cofactor_minors(const Mat3& m) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
      const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      c(i, j) = m(i1, j1) * m(i2, j2) - m(i1, j2) * m(i2, j1);
    }
  return c;
}
}  // namespace

TEST_CASE("cofactor and determinant") {
  CHECK((cofactor(Mat3::Identity()) - Mat3::Identity()).norm() < 1e-15);
  Mat3 d = Vec3(2.0, 3.0, 5.0).asDiagonal();
  const Mat3 cd = cofactor(d);
  CHECK(cd(0, 0) == doctest::Approx(15.0));
  CHECK(cd(1, 1) == doctest::Approx(10.0));
  CHECK(cd(2, 2) == doctest::Approx(6.0));

  std::mt19937 rng(11);
  for (int k = 0; k < 200; ++k) {
    const Mat3 m = random_matrix(rng);
    CHECK((cofactor(m) - cofactor_minors(m)).norm() < 1e-12);
    // M adj(M) = det(M) I with adj = cof^T
    const Mat3 prod = m * cofactor(m).transpose();
    CHECK((prod - determinant(m) * Mat3::Identity()).norm() < 1e-12 * (1 + prod.norm()));
  }
}

TEST_CASE("cylindrical-cylindrical kernel") {
  SUBCASE("identity profile") {
    ProfileJet pj{1.3, -0.2, 1, 0, 0, 1};  // v = (r, x3) at (r, x3) = (1.3, -0.2)
    CHECK((grad_cyl_cyl(pj, 1.3, 0.7) - Mat3::Identity()).norm() < 1e-14);
  }
  SUBCASE("radial doubling: det = 4 via (v1/r) det Dv") {
    const double r = 0.8;
    ProfileJet pj{2 * r, 0.1, 2, 0, 0, 1};
    CHECK(det_cyl_cyl(pj, r) == doctest::Approx(4.0));
    CHECK(determinant(grad_cyl_cyl(pj, r, 1.1)) == doctest::Approx(4.0));
  }
  SUBCASE("random smooth profile matches finite differences") {
    auto v1 = [](double r, double z) { return r * (1.0 + 0.3 * std::sin(z) + 0.1 * r); };
    auto v2 = [](double r, double z) { return z + 0.2 * std::cos(r) * z; };
    auto map = [&](const Vec3& p) {
      const CylindricalPoint c = cart_to_cyl(p);
      return Vec3(v1(c.r, c.x3) * e_r(c.theta) + v2(c.r, c.x3) * e_3());
    };
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.3, 1.5);
    for (int k = 0; k < 50; ++k) {
      const double r = u(rng), z = u(rng) - 0.9, theta = u(rng);
      const double h = 1e-6;
      ProfileJet pj;
      pj.v1 = v1(r, z);
      pj.v2 = v2(r, z);
      pj.d1_c1 = (v1(r + h, z) - v1(r - h, z)) / (2 * h);
      pj.d1_c2 = (v1(r, z + h) - v1(r, z - h)) / (2 * h);
      pj.d2_c1 = (v2(r + h, z) - v2(r - h, z)) / (2 * h);
      pj.d2_c2 = (v2(r, z + h) - v2(r, z - h)) / (2 * h);
      const Vec3 p = r * e_r(theta) + z * e_3();
      const Mat3 fd = fd_jacobian(map, p, {.step = 1e-6});
      CHECK((grad_cyl_cyl(pj, r, theta) - fd).norm() < 1e-6 * (1 + fd.norm()));
    }
  }
  CHECK_THROWS_AS(grad_cyl_cyl(ProfileJet{}, 0.0, 0.0), AxisSingular);
}

TEST_CASE("spherical-spherical kernel") {
  SUBCASE("identity profile") {
    const double rho = 0.9, phi = 1.1;
    ProfileJet pj{rho, phi, 1, 0, 0, 1};
    CHECK((grad_sph_sph(pj, rho, 0.4, phi) - Mat3::Identity()).norm() < 1e-13);
    CHECK(det_sph_sph(pj, rho, phi) == doctest::Approx(1.0));
  }
  SUBCASE("everted-cap profile determinant") {
    // u_rho = (1 - rho) cos(u_phi), u_phi = pi - phi
    const double rho = 0.5, phi = 2.5;
    const double up = kPi - phi;
    ProfileJet pj{(1 - rho) * std::cos(up), up, -std::cos(up), (1 - rho) * std::sin(up),
                  0.0, -1.0};
    const double expected =
        std::pow((1 - rho) / rho, 2) * std::pow(std::cos(up), 3);
    CHECK(det_sph_sph(pj, rho, phi) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(determinant(grad_sph_sph(pj, rho, 0.0, phi)) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  SUBCASE("random profile matches finite differences") {
    auto urho = [](double rho, double phi) { return rho * (1.1 + 0.2 * std::cos(phi)); };
    auto uphi = [](double rho, double phi) { return phi + 0.1 * rho * std::sin(phi); };
    auto map = [&](const Vec3& p) {
      const SphericalPoint s = cart_to_sph(p);
      SphericalPoint img;
      img.rho = urho(s.rho, s.phi);
      img.theta = s.theta;
      img.phi = uphi(s.rho, s.phi);
      return sph_to_cart(img);
    };
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.4, 1.4);
    for (int k = 0; k < 50; ++k) {
      const double rho = u(rng), phi = 0.4 + u(rng), theta = u(rng);
      const double h = 1e-6;
      ProfileJet pj;
      pj.v1 = urho(rho, phi);
      pj.v2 = uphi(rho, phi);
      pj.d1_c1 = (urho(rho + h, phi) - urho(rho - h, phi)) / (2 * h);
      pj.d1_c2 = (urho(rho, phi + h) - urho(rho, phi - h)) / (2 * h);
      pj.d2_c1 = (uphi(rho + h, phi) - uphi(rho - h, phi)) / (2 * h);
      pj.d2_c2 = (uphi(rho, phi + h) - uphi(rho, phi - h)) / (2 * h);
      const Vec3 p = rho * e_rho(theta, phi);
      const Mat3 fd = fd_jacobian(map, p, {.step = 1e-6});
      CHECK((grad_sph_sph(pj, rho, theta, phi) - fd).norm() < 1e-5 * (1 + fd.norm()));
      CHECK(det_sph_sph(pj, rho, phi) ==
            doctest::Approx(determinant(grad_sph_sph(pj, rho, theta, phi)))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("cylindrical-spherical kernel") {
  SUBCASE("identity in disguise") {
    // u_rho = hypot(r, x3), u_phi = atan2(r, x3) is the identity
    const double r = 0.7, z = 0.4;
    const double rho = std::hypot(r, z);
    ProfileJet pj;
    pj.v1 = rho;
    pj.v2 = std::atan2(r, z);
    pj.d1_c1 = r / rho;
    pj.d1_c2 = z / rho;
    pj.d2_c1 = z / (rho * rho);
    pj.d2_c2 = -r / (rho * rho);
    CHECK(det_cyl_sph(pj, r) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((grad_cyl_sph(pj, r, 0.9) - Mat3::Identity()).norm() < 1e-10);
  }
  SUBCASE("random profile vs finite differences") {
    auto urho = [](double r, double z) { return 0.8 + 0.1 * r * r + 0.05 * z; };
    auto uphi = [](double r, double z) { return 0.9 + 0.4 * r - 0.2 * z; };
    auto map = [&](const Vec3& p) {
      const CylindricalPoint c = cart_to_cyl(p);
      return Vec3(urho(c.r, c.x3) * e_rho(c.theta, uphi(c.r, c.x3)));
    };
    const double r = 0.6, z = 0.2, theta = 0.3;
    ProfileJet pj{urho(r, z), uphi(r, z), 0.2 * r, 0.05, 0.4, -0.2};
    const Vec3 p = r * e_r(theta) + z * e_3();
    const Mat3 fd = fd_jacobian(map, p, {.step = 1e-6, .richardson = true});
    CHECK((grad_cyl_sph(pj, r, theta) - fd).norm() < 1e-7 * (1 + fd.norm()));
    CHECK(det_cyl_sph(pj, r) ==
          doctest::Approx(determinant(grad_cyl_sph(pj, r, theta))).epsilon(1e-12));
  }
}

TEST_CASE("finite differences") {
  SUBCASE("identity and linear maps") {
    auto id = [](const Vec3& p) { return p; };
    CHECK((fd_jacobian(id, Vec3(0.3, -1, 2), {.step = 1e-5}) - Mat3::Identity()).norm() <
          1e-10);
    Mat3 a;
    a << 1, 2, 0, -1, 0.5, 3, 0, 0, 2;
    auto lin = [&](const Vec3& p) { return Vec3(a * p); };
    CHECK((fd_jacobian(lin, Vec3(1, 1, 1), {.step = 1e-4}) - a).norm() < 1e-9);
  }
  SUBCASE("piece guard shrinks the step, then gives up") {
    auto id = [](const Vec3& p) { return p; };
    FdOptions opts;
    opts.step = 0.5;
    opts.same_piece = [](const Vec3& p) { return p.norm() < 1.001; };
    CHECK_NOTHROW(fd_jacobian(id, Vec3(0.999, 0, 0), opts));
    opts.same_piece = [](const Vec3&) { return false; };
    CHECK_THROWS_AS(fd_jacobian(id, Vec3(0, 0, 0), opts), StepTooLarge);
  }
}

TEST_CASE("area-energy residual") {
  CHECK(area_energy_residual(Mat3::Identity()) == doctest::Approx(0.5));
  SUBCASE("conformal-in-plane matrices sit at equality") {
    // columns: orthogonal equal-length in-plane images, zero x3 column
    for (double ang : {0.0, 0.4, 1.3}) {
      for (double s : {0.5, 1.0, 2.0}) {
        Mat3 m = Mat3::Zero();
        m.col(0) = s * Vec3(std::cos(ang), std::sin(ang), 0.0);
        m.col(1) = s * Vec3(-std::sin(ang), std::cos(ang), 0.0);
        CHECK(area_energy_residual(m) == doctest::Approx(0.0).epsilon(1e-14));
      }
    }
  }
  SUBCASE("nonnegative for random matrices") {
    std::mt19937 rng(17);
    for (int k = 0; k < 100000; ++k) {
      const Mat3 m = random_matrix(rng);
      CHECK(area_energy_residual(m) >= -1e-9 * (1 + m.squaredNorm()));
    }
  }
}
