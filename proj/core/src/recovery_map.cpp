#include "dlab/recovery_map.hpp"

#include <algorithm>

namespace dlab {

namespace {
constexpr double kAxisTol = 1e-11;
const double kR2 = std::sqrt(2.0);
const double kR8 = 2.0 * std::sqrt(2.0);
const double kEtaSlant = std::atan2(2.0, -1.0);  // origin angle of (2,-1)
const double kPFar = 2.0 * std::sqrt(2.0) - 1.0;  // outer boundary radius on the axis
const double kRC = std::sqrt(2.0) + 0.5;          // wedge coordinate of the origin

// Outer boundary radius of the rewrapping target, seen from the origin.
double target_boundary(double eta) {
  if (eta <= 0.5 * kPi) return 1.0;
  if (eta <= kEtaSlant) return 1.0 / (std::sin(eta) + std::cos(eta));
  const double c = std::cos(eta);
  return c + std::sqrt(c * c + 7.0);
}

// Pinned boundary correspondence on the outer rim of the target, as wedge
// polar coordinates (R about (0,1), angle from +e3).
Vec2 boundary_data(double eta) {
  if (eta <= 0.5 * kPi) return Vec2(kR2, kPi - 0.5 * eta);  // angle-doubling arc
  if (eta <= kEtaSlant) {
    const double p = target_boundary(eta);
    const double r = p * std::sin(eta), z = p * std::cos(eta);
    return Vec2(std::hypot(r, z - 1.0), 0.75 * kPi);  // interface ray, identity
  }
  const double p = target_boundary(eta);
  return Vec2(kR8, std::atan2(p * std::sin(eta), p * std::cos(eta) - 1.0));
}

// Transfinite chart of the target onto the wedge rectangle
// [sqrt2, 2 sqrt2] x [3pi/4, pi]; mu in [0,1] is radial progress from the
// origin, eta the origin zenith angle.
Vec2 wedge_coords(double eta, double mu) {
  const double et = eta / kPi;
  const Vec2 bd = boundary_data(eta);
  const double r_e0 = kR2 + 0.5 * (1.0 - mu);
  const double r_e1 = kR2 + 0.5 * (1.0 + mu * kPFar);
  double R = (1 - et) * r_e0 + et * r_e1 + (1 - mu) * kRC + mu * bd.x() -
             ((1 - et) * (1 - mu) * kRC + (1 - et) * mu * kR2 + et * (1 - mu) * kRC +
              et * mu * kR8);
  const double fb = kPi - mu * (kPi - bd.y());
  return Vec2(R, fb);
}
}  // namespace

RecoveryMap::RecoveryMap(const RecoveryParams& params, const LimitMap* limit)
    : blocks_(params), limit_(limit) {
  if (!limit_) throw OutOfDomain("RecoveryMap: null singular map");
}

// ---------------------------------------------------------------------------
// Rewrapping map psi
// ---------------------------------------------------------------------------

RecoveryMap::PsiSolve RecoveryMap::psi_solve(const Vec2& q, bool with_jac) const {
  PsiSolve out;
  auto eval_one = [&](const Vec2& qq) -> Vec2 {
    const double r = qq.x(), x3 = qq.y();
    const double R = std::max(std::hypot(r, x3 - 1.0), kR2);
    if (R >= kR8) return qq;
    if (r < kAxisTol) return Vec2(0.0, 1.0 - 2.0 * (R - kR2));  // axis stretch
    const double fb = std::atan2(r, x3 - 1.0);
    if (R <= kR2 * (1.0 + 1e-13)) {  // inner arc: angle doubling, exactly
      const double eta = 2.0 * (kPi - fb);
      return Vec2(std::sin(eta), std::cos(eta));
    }
    // Solve wedge_coords(eta, mu) = (R, fb). The angle equation gives
    // mu(eta) = (pi - fb) / (pi - fb_bd(eta)); bisect the radial residual on
    // the eta-interval where mu <= 1 (its endpoints land on the two rims).
    const double eta_lo = 2.0 * (kPi - fb);
    const double eta_hi = std::atan2(kR8 * std::sin(fb), 1.0 + kR8 * std::cos(fb));
    auto mu_of = [&](double eta) {
      const double den = kPi - boundary_data(eta).y();
      return (den <= 0) ? 1.0 : std::min((kPi - fb) / den, 1.0);
    };
    double a = eta_lo, b = eta_hi;
    double fa = wedge_coords(a, mu_of(a)).x() - R;
    for (int it = 0; it < 100; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = wedge_coords(m, mu_of(m)).x() - R;
      if ((fa <= 0) == (fm <= 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
      if (b - a < 1e-14) break;
    }
    const double eta = 0.5 * (a + b), mu = mu_of(eta);
    const double rho = mu * target_boundary(eta);
    return Vec2(rho * std::sin(eta), rho * std::cos(eta));
  };
  out.value = eval_one(q);
  if (with_jac) {
    const double R = std::hypot(q.x(), q.y() - 1.0);
    if (R >= kR8) {
      out.jac = Mat2::Identity();
    } else {
      const double h = 1e-7;
      out.jac.col(0) = (eval_one(q + Vec2(h, 0)) - eval_one(q - Vec2(h, 0))) / (2 * h);
      out.jac.col(1) = (eval_one(q + Vec2(0, h)) - eval_one(q - Vec2(0, h))) / (2 * h);
    }
  }
  return out;
}

Vec2 RecoveryMap::psi(const Vec2& q) const { return psi_solve(q, false).value; }

Mat2 RecoveryMap::psi_jacobian(const Vec2& q) const { return psi_solve(q, true).jac; }

Vec2 RecoveryMap::phi_eps_b(double rho, double phi) const {
  const double eg = params().eps_gamma();
  const double ft = 0.5 * (phi + kPi);
  const double q = rho - 1.0 + kR2 * eg;
  return Vec2(q * std::sin(ft), eg + q * std::cos(ft));
}

// ---------------------------------------------------------------------------
// Region evaluators
// ---------------------------------------------------------------------------

Jet RecoveryMap::eval_tube(double r, double x3, double theta) const {
  const Blocks& B = blocks_;
  const double m = 2.0 * params().eps_gamma();
  Jet jet;
  jet.region = RegionId::CEps;
  jet.point = r * e_r(theta) + x3 * e_3();
  const double fr = B.f(r), fp = B.f_prime(r);
  const double a = std::cos(fr) + m;
  const double W = B.W(r), Wp = B.W_prime(r);
  const double u = std::cbrt(a * a * a + 3.0 * x3 * W);
  ProfileJet pj;
  pj.v1 = u;
  pj.v2 = fr;
  pj.d1_c1 = (-a * a * std::sin(fr) * fp + x3 * Wp) / (u * u);
  pj.d1_c2 = W / (u * u);
  pj.d2_c1 = fp;
  pj.d2_c2 = 0.0;
  jet.value = u * e_rho(theta, fr);
  if (r < kAxisTol) {
    jet.grad = fd_jacobian([this](const Vec3& p) { return value(p); }, jet.point,
                           {.step = 1e-4 * params().eps * params().eps});
  } else {
    jet.grad = grad_cyl_sph(pj, r, theta);
  }
  return jet;
}

Vec3 RecoveryMap::cap_lower_point(double s, double phi, double theta) const {
  const double eps = params().eps;
  const double r = (1.0 - s) * blocks_.g(phi) + s * eps * std::sin(phi);
  return r * e_r(theta) - s * eps * std::cos(phi) * e_3();
}

Vec3 RecoveryMap::cap_upper_point(double s, double phi, double theta) const {
  const double eps = params().eps;
  const double r = (1.0 - s) * blocks_.g(phi) + s * eps * std::sin(phi);
  return r * e_r(theta) + (1.0 + s * eps * std::cos(phi)) * e_3();
}

double RecoveryMap::cap_weight(double s, double phi) const {
  return kTwoPi * blocks_.h(s, phi) * std::sin(phi);
}

namespace {
// Assembles Du = sum_k du_k (x) grad(q_k) for a two-parameter axisymmetric
// chart; invs maps chart velocities to half-plane gradients.
Mat3 assemble_param_gradient(double theta, const Mat2& dx_dq, const Vec2& du_s,
                             const Vec2& du_phi, double transverse) {
  const Mat2 grads = dx_dq.inverse();  // rows: grad s, grad phi in (e_r, e_3)
  Mat2 prof = Mat2::Zero();
  prof += du_s * grads.row(0);
  prof += du_phi * grads.row(1);
  return axisym_gradient(theta, prof, transverse);
}
}  // namespace

Jet RecoveryMap::eval_cap_lower(double s, double phi, double theta) const {
  const Blocks& B = blocks_;
  const double eps = params().eps, m = 2.0 * params().eps_gamma();
  Jet jet;
  jet.region = RegionId::APrimeEps;
  jet.point = cap_lower_point(s, phi, theta);
  const double a = std::cos(phi) + m;
  const double u = std::cbrt(a * a * a - 3.0 * B.H(s, phi));
  jet.value = u * e_rho(theta, phi);
  const double du_s = -B.h(s, phi) / (u * u);
  const double du_phi = (-a * a * std::sin(phi) - B.H_phi_partial(s, phi)) / (u * u);
  const double g = B.g(phi), gp = B.g_prime(phi);
  Mat2 dx_dq;  // columns d(point)/ds, d(point)/dphi in (e_r, e_3)
  dx_dq << eps * std::sin(phi) - g, (1.0 - s) * gp + s * eps * std::cos(phi),
      -eps * std::cos(phi), s * eps * std::sin(phi);
  const Vec2 erho(std::sin(phi), std::cos(phi)), ephi(std::cos(phi), -std::sin(phi));
  const double x_r = (1.0 - s) * g + s * eps * std::sin(phi);
  if (x_r < kAxisTol || s < 1e-12) {
    jet.grad = fd_jacobian([this](const Vec3& p) { return value(p); }, jet.point,
                           {.step = 1e-6 * eps});
    return jet;
  }
  jet.grad = assemble_param_gradient(theta, dx_dq, du_s * erho,
                                     du_phi * erho + u * ephi, u * std::sin(phi) / x_r);
  return jet;
}

Jet RecoveryMap::eval_cap_upper(double s, double phi, double theta) const {
  const Blocks& B = blocks_;
  const double eps = params().eps, m = 2.0 * params().eps_gamma();
  Jet jet;
  jet.region = RegionId::EPrimeEps;
  jet.point = cap_upper_point(s, phi, theta);
  const double a = std::cos(phi) + m;
  const double u = std::cbrt(a * a * a + 3.0 * B.W(B.g(phi)) + 3.0 * B.H(s, phi));
  jet.value = u * e_rho(theta, phi);
  const double du_s = B.h(s, phi) / (u * u);
  const double g = B.g(phi), gp = B.g_prime(phi);
  const double du_phi =
      (-a * a * std::sin(phi) + B.W_prime(g) * gp + B.H_phi_partial(s, phi)) / (u * u);
  Mat2 dx_dq;
  dx_dq << eps * std::sin(phi) - g, (1.0 - s) * gp + s * eps * std::cos(phi),
      eps * std::cos(phi), -s * eps * std::sin(phi);
  const Vec2 erho(std::sin(phi), std::cos(phi)), ephi(std::cos(phi), -std::sin(phi));
  const double x_r = (1.0 - s) * g + s * eps * std::sin(phi);
  if (x_r < kAxisTol || s < 1e-12) {
    jet.grad = fd_jacobian([this](const Vec3& p) { return value(p); }, jet.point,
                           {.step = 1e-6 * eps});
    return jet;
  }
  jet.grad = assemble_param_gradient(theta, dx_dq, du_s * erho,
                                     du_phi * erho + u * ephi, u * std::sin(phi) / x_r);
  return jet;
}

double RecoveryMap::shell_lambda_lower(double psi) const {
  const double eg = params().eps_gamma();
  return 1.0 - std::cos(psi) / (blocks_.Q_lower(psi) - eg);
}

double RecoveryMap::shell_lambda_upper(double phi) const {
  const double eg = params().eps_gamma();
  return 1.0 - std::cos(phi) / (2.0 * std::cos(phi) + 6.0 * eg - blocks_.Q_upper(phi));
}

Jet RecoveryMap::eval_shell_lower(double rho, double psi, double theta) const {
  const Blocks& B = blocks_;
  const double eps = params().eps, eg = params().eps_gamma();
  Jet jet;
  jet.region = RegionId::AEps;
  const double phi_std = kPi - psi;
  jet.point = rho * e_rho(theta, phi_std);
  const double Q = B.Q_lower(psi), Qp = B.Q_lower_prime(psi);
  const double t_aff = (rho - eps) / (1.0 - eps);
  const double rh = B.r_hat(rho), rhp = B.r_hat_prime(rho);
  const double lam = shell_lambda_lower(psi);
  const double den = Q - eg;
  const double lamp = (std::sin(psi) * den + std::cos(psi) * Qp) / (den * den);
  const double t = (1.0 - lam) * t_aff + lam * rh;
  const double u = (1.0 - t) * Q + t * eg;
  const double dt_rho = (1.0 - lam) / (1.0 - eps) + lam * rhp;
  const double dt_psi = lamp * (rh - t_aff);
  const double du_rho = (eg - Q) * dt_rho;
  const double du_psi = (1.0 - t) * Qp + dt_psi * (eg - Q);
  jet.value = u * e_rho(theta, psi);
  ProfileJet pj;  // (u_rho, u_phi) vs (rho, phi_std)
  pj.v1 = u;
  pj.v2 = psi;  // = pi - phi_std
  pj.d1_c1 = du_rho;
  pj.d1_c2 = -du_psi;
  pj.d2_c1 = 0.0;
  pj.d2_c2 = -1.0;
  if (std::sin(phi_std) < 1e-12) {
    jet.grad = fd_jacobian([this](const Vec3& p) { return value(p); }, jet.point,
                           {.step = 1e-7});
    return jet;
  }
  jet.grad = grad_sph_sph(pj, rho, theta, phi_std);
  return jet;
}

Jet RecoveryMap::eval_shell_upper(double rho, double phi, double theta) const {
  const Blocks& B = blocks_;
  const double eps = params().eps, eg = params().eps_gamma();
  Jet jet;
  jet.region = RegionId::EEps;
  jet.point = point_P() + rho * e_rho(theta, phi);
  const double Q = B.Q_upper(phi), Qp = B.Q_upper_prime(phi);
  const double top = 2.0 * std::cos(phi) + 6.0 * eg;
  const double t_aff = (rho - eps) / (1.0 - eps);
  const double rh = B.r_hat(rho), rhp = B.r_hat_prime(rho);
  const double lam = shell_lambda_upper(phi);
  const double den = top - Q;
  const double lamp = (std::sin(phi) * den + std::cos(phi) * (-2.0 * std::sin(phi) - Qp)) /
                      (den * den);
  const double t = (1.0 - lam) * t_aff + lam * rh;
  const double u = (1.0 - t) * Q + t * top;
  const double dt_rho = (1.0 - lam) / (1.0 - eps) + lam * rhp;
  const double dt_phi = lamp * (rh - t_aff);
  const double du_rho = den * dt_rho;
  const double du_phi = (1.0 - t) * Qp + t * (-2.0 * std::sin(phi)) + dt_phi * den;
  jet.value = u * e_rho(theta, phi);
  ProfileJet pj;
  pj.v1 = u;
  pj.v2 = phi;
  pj.d1_c1 = du_rho;
  pj.d1_c2 = du_phi;
  pj.d2_c1 = 0.0;
  pj.d2_c2 = 1.0;
  if (std::sin(phi) < 1e-12) {
    jet.grad = fd_jacobian([this](const Vec3& p) { return value(p); }, jet.point,
                           {.step = 1e-7});
    return jet;
  }
  // shifted spherical chart about P
  const double su = std::sin(pj.v2), cu = std::cos(pj.v2);
  Mat2 dv_sph;
  dv_sph << pj.d1_c1 * su + pj.v1 * cu * pj.d2_c1, pj.d1_c2 * su + pj.v1 * cu * pj.d2_c2,
      pj.d1_c1 * cu - pj.v1 * su * pj.d2_c1, pj.d1_c2 * cu - pj.v1 * su * pj.d2_c2;
  Mat2 chart;
  chart << std::sin(phi), std::cos(phi), std::cos(phi) / rho, -std::sin(phi) / rho;
  const Mat2 prof = dv_sph * chart;
  jet.grad = axisym_gradient(theta, prof, u * su / (rho * std::sin(phi)));
  return jet;
}

Jet RecoveryMap::eval_outer_lower(double rho, double phi, double theta) const {
  const double eg = params().eps_gamma();
  Jet jet;
  jet.region = RegionId::BEps;
  jet.point = rho * e_rho(theta, phi);
  const double ft = 0.5 * (phi + kPi);
  const double qr = rho - 1.0 + kR2 * eg;
  const Vec2 scaled = phi_eps_b(rho, phi) / eg;
  const PsiSolve ps = psi_solve(scaled, true);
  jet.value = eg * (ps.value.x() * e_r(theta) + ps.value.y() * e_3());
  Mat2 dphi;  // d(phi_r, phi_3)/d(rho, phi)
  dphi << std::sin(ft), 0.5 * qr * std::cos(ft), std::cos(ft), -0.5 * qr * std::sin(ft);
  Mat2 chart;
  chart << std::sin(phi), std::cos(phi), std::cos(phi) / rho, -std::sin(phi) / rho;
  const Mat2 prof = ps.jac * dphi * chart;
  const double r = rho * std::sin(phi);
  if (r < kAxisTol) {
    jet.grad = fd_jacobian([this](const Vec3& p) { return value(p); }, jet.point,
                           {.step = 1e-7});
    return jet;
  }
  jet.grad = axisym_gradient(theta, prof, eg * ps.value.x() / r);
  return jet;
}

Jet RecoveryMap::eval_slab(double r, double x3, double theta) const {
  const Blocks& B = blocks_;
  Jet jet;
  jet.region = RegionId::DEps;
  jet.point = r * e_r(theta) + x3 * e_3();
  const double rh = B.r_hat(r), rhp = B.r_hat_prime(r);
  const SlabChartJet gc = limit_->region_d_g(rh, x3);
  const double Phi = 0.25 * kPi * (1.0 + gc.z / 3.0);
  const double sp = std::sin(Phi), cp = std::cos(Phi);
  const double v1 = B.omega(gc.z) + gc.s * sp;
  const double v2 = -gc.s * cp;
  jet.value = v1 * e_r(theta) + v2 * e_3();
  Mat2 dw;
  dw << sp, B.omega_prime(gc.z) + gc.s * cp * (kPi / 12.0), -cp, gc.s * sp * (kPi / 12.0);
  Mat2 scale = Mat2::Identity();
  scale(0, 0) = rhp;
  const Mat2 prof = dw * gc.jac * scale;
  ProfileJet pj;
  pj.v1 = v1;
  pj.v2 = v2;
  pj.d1_c1 = prof(0, 0);
  pj.d1_c2 = prof(0, 1);
  pj.d2_c1 = prof(1, 0);
  pj.d2_c2 = prof(1, 1);
  jet.grad = grad_cyl_cyl(pj, r, theta);
  return jet;
}

Jet RecoveryMap::eval_outer_upper(double rho, double phi, double theta) const {
  const double eg = params().eps_gamma(), beta = limit_->config().beta;
  Jet jet;
  jet.region = RegionId::FEps;
  jet.point = point_P() + rho * e_rho(theta, phi);
  const double u = 2.0 * std::cos(phi) + beta * (rho - 1.0) + 6.0 * eg;
  jet.value = u * e_rho(theta, phi);
  ProfileJet pj;
  pj.v1 = u;
  pj.v2 = phi;
  pj.d1_c1 = beta;
  pj.d1_c2 = -2.0 * std::sin(phi);
  pj.d2_c1 = 0.0;
  pj.d2_c2 = 1.0;
  if (std::sin(phi) < 1e-12) {
    jet.grad = fd_jacobian([this](const Vec3& p) { return value(p); }, jet.point,
                           {.step = 1e-7});
    return jet;
  }
  const double su = std::sin(phi), cu = std::cos(phi);
  Mat2 chart;
  chart << su, cu, cu / rho, -su / rho;
  Mat2 dv;
  dv << pj.d1_c1 * su + u * cu * pj.d2_c1, pj.d1_c2 * su + u * cu * pj.d2_c2,
      pj.d1_c1 * cu - u * su * pj.d2_c1, pj.d1_c2 * cu - u * su * pj.d2_c2;
  jet.grad = axisym_gradient(theta, dv * chart, u / rho);
  return jet;
}

// ---------------------------------------------------------------------------
// Chart inversions and dispatch
// ---------------------------------------------------------------------------

Vec2 RecoveryMap::cap_lower_invert(const Vec3& p) const {
  const Blocks& B = blocks_;
  const double eps = params().eps;
  const CylindricalPoint cp = cart_to_cyl(p);
  const double rt = cp.r, zt = cp.x3;
  double phi = std::clamp(std::atan2(rt, -zt), 0.0, 0.5 * kPi * (1 - 1e-12));
  double s = std::clamp(p.norm() / eps, 1e-9, 1.0);
  for (int it = 0; it < 120; ++it) {
    const double g = B.g(phi), gp = B.g_prime(phi);
    const double r1 = (1.0 - s) * g + s * eps * std::sin(phi) - rt;
    const double r2 = -s * eps * std::cos(phi) - zt;
    if (std::hypot(r1, r2) < 1e-13 * eps) break;
    Mat2 J;
    J << eps * std::sin(phi) - g, (1.0 - s) * gp + s * eps * std::cos(phi),
        -eps * std::cos(phi), s * eps * std::sin(phi);
    Vec2 step = J.fullPivLu().solve(Vec2(r1, r2));
    double damp = 1.0;
    for (int k = 0; k < 30; ++k) {
      const double s2 = std::clamp(s - damp * step.x(), 0.0, 1.0);
      const double p2 = std::clamp(phi - damp * step.y(), 0.0, 0.5 * kPi * (1 - 1e-12));
      const double n1 = (1.0 - s2) * B.g(p2) + s2 * eps * std::sin(p2) - rt;
      const double n2 = -s2 * eps * std::cos(p2) - zt;
      if (std::hypot(n1, n2) <= std::hypot(r1, r2) || damp < 1e-4) {
        s = s2;
        phi = p2;
        break;
      }
      damp *= 0.5;
    }
    if (it == 119) throw NoConvergence("cap_lower_invert");
  }
  return Vec2(s, phi);
}

Vec2 RecoveryMap::cap_upper_invert(const Vec3& p) const {
  // mirroring about x3 = 1 reduces to the lower-cap geometry
  const Vec3 q(p.x(), p.y(), -(p.z() - 1.0));
  return cap_lower_invert(q);
}

Vec3 RecoveryMap::value(const Vec3& p) const {
  const double eps = params().eps;
  const RegionId region = classify_recovery(p, eps);
  const CylindricalPoint cp = cart_to_cyl(p);
  switch (region) {
    case RegionId::CEps: {
      const double m = 2.0 * params().eps_gamma();
      const double fr = blocks_.f(std::min(cp.r, eps));
      const double a = std::cos(fr) + m;
      const double u = std::cbrt(a * a * a + 3.0 * cp.x3 * blocks_.W(std::min(cp.r, eps)));
      return u * e_rho(cp.theta, fr);
    }
    case RegionId::APrimeEps: {
      const Vec2 sp = cap_lower_invert(p);
      const double m = 2.0 * params().eps_gamma();
      const double a = std::cos(sp.y()) + m;
      const double u = std::cbrt(a * a * a - 3.0 * blocks_.H(sp.x(), sp.y()));
      return u * e_rho(cp.theta, sp.y());
    }
    case RegionId::EPrimeEps: {
      const Vec2 sp = cap_upper_invert(p);
      const double m = 2.0 * params().eps_gamma();
      const double a = std::cos(sp.y()) + m;
      const double u = std::cbrt(a * a * a + 3.0 * blocks_.W(blocks_.g(sp.y())) +
                                 3.0 * blocks_.H(sp.x(), sp.y()));
      return u * e_rho(cp.theta, sp.y());
    }
    case RegionId::AEps: {
      const SphericalPoint s = cart_to_sph(p);
      return eval_shell_lower(s.rho, kPi - s.phi, s.theta).value;
    }
    case RegionId::EEps: {
      const SphericalPoint s = cart_to_sph(p, point_P());
      return eval_shell_upper(s.rho, s.phi, s.theta).value;
    }
    case RegionId::BEps: {
      const SphericalPoint s = cart_to_sph(p);
      const Vec2 scaled = phi_eps_b(s.rho, s.phi) / params().eps_gamma();
      const Vec2 w = psi(scaled) * params().eps_gamma();
      return w.x() * e_r(s.theta) + w.y() * e_3();
    }
    case RegionId::DEps:
      return eval_slab(cp.r, cp.x3, cp.theta).value;
    case RegionId::FEps: {
      const SphericalPoint s = cart_to_sph(p, point_P());
      const double u = 2.0 * std::cos(s.phi) + limit_->config().beta * (s.rho - 1.0) +
                       6.0 * params().eps_gamma();
      return u * e_rho(s.theta, s.phi);
    }
    default:
      throw OutOfDomain("RecoveryMap::value: unexpected region");
  }
}

Jet RecoveryMap::eval(const Vec3& p) const {
  const double eps = params().eps;
  const RegionId region = classify_recovery(p, eps);
  const CylindricalPoint cp = cart_to_cyl(p);
  switch (region) {
    case RegionId::CEps:
      return eval_tube(std::min(cp.r, eps), cp.x3, cp.theta);
    case RegionId::APrimeEps: {
      const Vec2 sp = cap_lower_invert(p);
      return eval_cap_lower(sp.x(), sp.y(), cp.theta);
    }
    case RegionId::EPrimeEps: {
      const Vec2 sp = cap_upper_invert(p);
      return eval_cap_upper(sp.x(), sp.y(), cp.theta);
    }
    case RegionId::AEps: {
      const SphericalPoint s = cart_to_sph(p);
      return eval_shell_lower(s.rho, kPi - s.phi, s.theta);
    }
    case RegionId::EEps: {
      const SphericalPoint s = cart_to_sph(p, point_P());
      return eval_shell_upper(s.rho, s.phi, s.theta);
    }
    case RegionId::BEps: {
      const SphericalPoint s = cart_to_sph(p);
      return eval_outer_lower(s.rho, s.phi, s.theta);
    }
    case RegionId::DEps:
      return eval_slab(cp.r, cp.x3, cp.theta);
    case RegionId::FEps: {
      const SphericalPoint s = cart_to_sph(p, point_P());
      return eval_outer_upper(s.rho, s.phi, s.theta);
    }
    default:
      throw OutOfDomain("RecoveryMap::eval: unexpected region");
  }
}

double RecoveryMap::det_analytic(const Vec3& p) const {
  const double eps = params().eps, eg = params().eps_gamma();
  const RegionId region = classify_recovery(p, eps);
  switch (region) {
    case RegionId::CEps:
    case RegionId::APrimeEps:
    case RegionId::EPrimeEps:
      return 1.0;
    case RegionId::AEps: {
      const SphericalPoint s = cart_to_sph(p);
      const double psi_ang = kPi - s.phi;
      const Jet jet = eval_shell_lower(s.rho, psi_ang, s.theta);
      const double Q = blocks_.Q_lower(psi_ang);
      const double lam = shell_lambda_lower(psi_ang);
      const double dt_rho = (1.0 - lam) / (1.0 - eps) + lam * blocks_.r_hat_prime(s.rho);
      const double u = jet.value.norm();
      return u * u / (s.rho * s.rho) * (Q - eg) * dt_rho;
    }
    case RegionId::EEps: {
      const SphericalPoint s = cart_to_sph(p, point_P());
      const Jet jet = eval_shell_upper(s.rho, s.phi, s.theta);
      const double top = 2.0 * std::cos(s.phi) + 6.0 * eg;
      const double lam = shell_lambda_upper(s.phi);
      const double dt_rho = (1.0 - lam) / (1.0 - eps) + lam * blocks_.r_hat_prime(s.rho);
      const double u = jet.value.norm();
      return u * u / (s.rho * s.rho) * (top - blocks_.Q_upper(s.phi)) * dt_rho;
    }
    case RegionId::FEps: {
      const SphericalPoint s = cart_to_sph(p, point_P());
      const double beta = limit_->config().beta;
      const double u = 2.0 * std::cos(s.phi) + beta * (s.rho - 1.0) + 6.0 * eg;
      return beta * u * u / (s.rho * s.rho);
    }
    default:
      return determinant(eval(p).grad);
  }
}

}  // namespace dlab
