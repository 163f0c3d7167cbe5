#include "dlab/kernels.hpp"

namespace dlab {

Mat3 axisym_gradient(double theta, const Mat2& profile, double v1_over_r) {
  // Du = sum profile(i,j) f_i ⊗ f_j + (v1/r) e_theta ⊗ e_theta,
  // f = (e_r(theta), e_3).
  const Vec3 er = e_r(theta), et = e_theta(theta), e3 = e_3();
  Mat3 g = Mat3::Zero();
  g += profile(0, 0) * er * er.transpose();
  g += profile(0, 1) * er * e3.transpose();
  g += profile(1, 0) * e3 * er.transpose();
  g += profile(1, 1) * e3 * e3.transpose();
  g += v1_over_r * et * et.transpose();
  return g;
}

Mat3 grad_cyl_cyl(const ProfileJet& pj, double r, double theta) {
  if (!(r > 0)) throw AxisSingular("grad_cyl_cyl: r = 0");
  Mat2 prof;
  prof << pj.d1_c1, pj.d1_c2, pj.d2_c1, pj.d2_c2;
  return axisym_gradient(theta, prof, pj.v1 / r);
}

double det_cyl_cyl(const ProfileJet& pj, double r) {
  if (!(r > 0)) throw AxisSingular("det_cyl_cyl: r = 0");
  return pj.v1 / r * (pj.d1_c1 * pj.d2_c2 - pj.d1_c2 * pj.d2_c1);
}

namespace {
// d(rho,phi)/d(r,x3) for rho = hypot(r, x3-z0), phi = atan2(r, x3-z0).
Mat2 sph_chart_inverse_jacobian(double rho, double phi) {
  Mat2 j;
  const double s = std::sin(phi), c = std::cos(phi);
  j << s, c, c / rho, -s / rho;
  return j;
}
}  // namespace

Mat3 grad_sph_sph(const ProfileJet& pj, double rho, double theta, double phi) {
  const double s = std::sin(phi);
  if (!(rho > 0) || std::abs(s) < 1e-300)
    throw AxisSingular("grad_sph_sph: on the axis");
  const double su = std::sin(pj.v2), cu = std::cos(pj.v2);
  // cylindrical image components of u = u_rho * e_rho(u_phi)
  Mat2 dv_sph;  // d(v1,v2)/d(rho,phi)
  dv_sph << pj.d1_c1 * su + pj.v1 * cu * pj.d2_c1,
            pj.d1_c2 * su + pj.v1 * cu * pj.d2_c2,
            pj.d1_c1 * cu - pj.v1 * su * pj.d2_c1,
            pj.d1_c2 * cu - pj.v1 * su * pj.d2_c2;
  const Mat2 prof = dv_sph * sph_chart_inverse_jacobian(rho, phi);
  return axisym_gradient(theta, prof, pj.v1 * su / (rho * s));
}

double det_sph_sph(const ProfileJet& pj, double rho, double phi) {
  const double s = std::sin(phi);
  if (!(rho > 0) || std::abs(s) < 1e-300)
    throw AxisSingular("det_sph_sph: on the axis");
  return pj.v1 * pj.v1 * std::sin(pj.v2) / (rho * rho * s) *
         (pj.d1_c1 * pj.d2_c2 - pj.d2_c1 * pj.d1_c2);
}

Mat3 grad_cyl_sph(const ProfileJet& pj, double r, double theta) {
  if (!(r > 0)) throw AxisSingular("grad_cyl_sph: r = 0");
  const double su = std::sin(pj.v2), cu = std::cos(pj.v2);
  Mat2 prof;  // d(v1,v2)/d(r,x3), v1 = u_rho sin u_phi, v2 = u_rho cos u_phi
  prof << pj.d1_c1 * su + pj.v1 * cu * pj.d2_c1,
          pj.d1_c2 * su + pj.v1 * cu * pj.d2_c2,
          pj.d1_c1 * cu - pj.v1 * su * pj.d2_c1,
          pj.d1_c2 * cu - pj.v1 * su * pj.d2_c2;
  return axisym_gradient(theta, prof, pj.v1 * su / r);
}

double det_cyl_sph(const ProfileJet& pj, double r) {
  if (!(r > 0)) throw AxisSingular("det_cyl_sph: r = 0");
  return pj.v1 * pj.v1 * std::sin(pj.v2) / r *
         (pj.d2_c1 * pj.d1_c2 - pj.d1_c1 * pj.d2_c2);
}

Mat3 cofactor(const Mat3& m) {
  // cof(M) e_i = M e_j ^ M e_k for (i,j,k) cyclic.
  Mat3 c;
  c.col(0) = m.col(1).cross(m.col(2));
  c.col(1) = m.col(2).cross(m.col(0));
  c.col(2) = m.col(0).cross(m.col(1));
  return c;
}

double determinant(const Mat3& m) { return m.determinant(); }

double dirichlet_density(const Mat3& m) { return m.squaredNorm(); }

double area_energy_residual(const Mat3& m) {
  return 0.5 * m.squaredNorm() - (cofactor(m) * e_3()).norm();
}

Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& map, const Vec3& p,
                 const FdOptions& opts) {
  double h = opts.step;
  if (opts.same_piece) {
    bool ok = false;
    for (int k = 0; k <= opts.max_shrink; ++k) {
      ok = true;
      for (int ax = 0; ax < 3 && ok; ++ax) {
        Vec3 dp = Vec3::Zero();
        dp[ax] = h;
        if (!opts.same_piece(p + dp) || !opts.same_piece(p - dp)) ok = false;
      }
      if (ok) break;
      h *= 0.5;
    }
    if (!ok) throw StepTooLarge("fd_jacobian: stencil crosses a piece boundary");
  }
  auto central = [&](double step) {
    Mat3 j;
    for (int ax = 0; ax < 3; ++ax) {
      Vec3 dp = Vec3::Zero();
      dp[ax] = step;
      j.col(ax) = (map(p + dp) - map(p - dp)) / (2.0 * step);
    }
    return j;
  };
  if (!opts.richardson) return central(h);
  const Mat3 coarse = central(h), fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace dlab
