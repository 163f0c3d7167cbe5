#include "dlab/limit_map.hpp"

#include <algorithm>

namespace dlab {

namespace {
constexpr double kAxisTol = 1e-11;

// Spherical profile (u_rho, u_phi) and partials w.r.t. (rho, phi_std) for the
// closed-form regions. phi_std is the zenith angle about the region's center.
struct SphProfile {
  double u_rho, u_phi, dr_rho, dr_phi, dp_rho, dp_phi;
};

SphProfile profile_a(double rho, double phi) {
  // u_phi = pi - phi, u_rho = (1 - rho) cos u_phi
  const double up = kPi - phi;
  const double cu = std::cos(up);
  return {(1.0 - rho) * cu, up, -cu, (1.0 - rho) * std::sin(up), 0.0, -1.0};
}

SphProfile profile_b(double rho, double phi) {
  const double up = 0.5 * (phi + kPi);
  return {rho - 1.0, up, 1.0, 0.0, 0.0, 0.5};
}

SphProfile profile_e(double rho, double phi) {
  // about P: u_rho = (1 + rho) cos phi, u_phi = phi
  return {(1.0 + rho) * std::cos(phi), phi, std::cos(phi), -(1.0 + rho) * std::sin(phi),
          0.0, 1.0};
}

SphProfile profile_f(double rho, double phi, double beta) {
  return {2.0 * std::cos(phi) + beta * (rho - 1.0), phi, beta, -2.0 * std::sin(phi), 0.0, 1.0};
}
}  // namespace

LimitMap::LimitMap(const LimitMapConfig& config) : cfg_(config) {
  if (!(cfg_.beta > 0) || !(cfg_.kappa > 0) || !(cfg_.fan_center.x() > 1.0))
    throw OutOfDomain("LimitMap: invalid configuration");
}

SlabChartJet LimitMap::region_d_g(double r, double x3) const {
  if (r < 0 || x3 < -1e-12 || x3 > 1.0 + 1e-12)
    throw OutOfDomain("region_d_g: outside the slab");
  x3 = std::clamp(x3, 0.0, 1.0);
  const double beta = cfg_.beta, kappa = cfg_.kappa;
  SlabChartJet out;
  if (r >= 1.0) {
    // strip: s interpolates slope 1 at x3=0 to slope beta at x3=1, plus bulge
    out.s = (r - 1.0) * (1.0 + (beta - 1.0) * x3) + kappa * std::sin(kPi * x3);
    out.z = 3.0 * x3;
    out.jac << 1.0 + (beta - 1.0) * x3,
        (beta - 1.0) * (r - 1.0) + kappa * kPi * std::cos(kPi * x3), 0.0, 3.0;
    return out;
  }
  // Fan over the unit square: the ray from the fan center through (r, x3)
  // meets the edge r=1 at height x3R and the bottom/left/top boundary at
  // polyline parameter t in [0,3]; blend between those two anchors.
  const Vec2 F = cfg_.fan_center;
  auto fan_value = [&](double x, double y) -> Vec2 {
    const double dx = x - F.x(), dy = y - F.y();
    const double tR = (1.0 - F.x()) / dx;
    const double x3R = F.y() + tR * dy;
    double tP = 0, tpar = 0;
    bool found = false;
    if (dy < 0.0) {
      const double t = -F.y() / dy;
      const double xB = F.x() + t * dx;
      if (xB >= -1e-12 && xB <= 1.0 + 1e-12 && t > 1.0 - 1e-9) {
        tP = t;
        tpar = 1.0 - xB;
        found = true;
      }
    } else if (dy > 0.0) {
      const double t = (1.0 - F.y()) / dy;
      const double xT = F.x() + t * dx;
      if (xT >= -1e-12 && xT <= 1.0 + 1e-12 && t > 1.0 - 1e-9) {
        tP = t;
        tpar = 2.0 + xT;
        found = true;
      }
    }
    {
      const double t = -F.x() / dx;
      const double yL = F.y() + t * dy;
      if (yL >= -1e-12 && yL <= 1.0 + 1e-12 && t > 1.0 - 1e-9 && (!found || t < tP)) {
        tP = t;
        tpar = 1.0 + yL;
      }
    }
    const double mu = (tP - 1.0) / (tP - tR);
    return Vec2(mu * kappa * std::sin(kPi * x3R), (1.0 - mu) * tpar + 3.0 * mu * x3R);
  };
  const Vec2 v = fan_value(r, x3);
  out.s = v.x();
  out.z = v.y();
  const double h = 1e-7;
  const double rl = std::max(r - h, 0.0), rr = std::min(r + h, 1.0);
  const double xl = std::max(x3 - h, 0.0), xr = std::min(x3 + h, 1.0);
  out.jac.col(0) = (fan_value(rr, x3) - fan_value(rl, x3)) / (rr - rl);
  out.jac.col(1) = (fan_value(r, xr) - fan_value(r, xl)) / (xr - xl);
  return out;
}

ProfileJet LimitMap::profile(RegionId region, double r, double x3) const {
  ProfileJet pj;
  auto from_sph = [&](const SphProfile& sp, double rho, double phi) {
    // v = (u_rho sin u_phi, u_rho cos u_phi), chain through (rho, phi).
    const double su = std::sin(sp.u_phi), cu = std::cos(sp.u_phi);
    const double s = std::sin(phi), c = std::cos(phi);
    Mat2 dv_sph;
    dv_sph << sp.dr_rho * su + sp.u_rho * cu * sp.dp_rho,
        sp.dr_phi * su + sp.u_rho * cu * sp.dp_phi,
        sp.dr_rho * cu - sp.u_rho * su * sp.dp_rho,
        sp.dr_phi * cu - sp.u_rho * su * sp.dp_phi;
    Mat2 chart;
    chart << s, c, c / rho, -s / rho;
    const Mat2 dv = dv_sph * chart;
    pj.v1 = sp.u_rho * su;
    pj.v2 = sp.u_rho * cu;
    pj.d1_c1 = dv(0, 0);
    pj.d1_c2 = dv(0, 1);
    pj.d2_c1 = dv(1, 0);
    pj.d2_c2 = dv(1, 1);
  };
  switch (region) {
    case RegionId::A: {
      const double rho = std::hypot(r, x3), phi = std::atan2(r, x3);
      from_sph(profile_a(rho, phi), rho, phi);
      break;
    }
    case RegionId::B: {
      const double rho = std::hypot(r, x3), phi = std::atan2(r, x3);
      from_sph(profile_b(rho, phi), rho, phi);
      break;
    }
    case RegionId::E: {
      const double rho = std::hypot(r, x3 - 1.0), phi = std::atan2(r, x3 - 1.0);
      from_sph(profile_e(rho, phi), rho, phi);
      break;
    }
    case RegionId::F: {
      const double rho = std::hypot(r, x3 - 1.0), phi = std::atan2(r, x3 - 1.0);
      from_sph(profile_f(rho, phi, cfg_.beta), rho, phi);
      break;
    }
    case RegionId::D: {
      const SlabChartJet gc = region_d_g(r, x3);
      const double Phi = 0.25 * kPi * (1.0 + gc.z / 3.0);
      const double sp = std::sin(Phi), cp = std::cos(Phi);
      Mat2 dw;  // d(v1,v2)/d(s,z)
      dw << sp, gc.s * cp * (kPi / 12.0), -cp, gc.s * sp * (kPi / 12.0);
      const Mat2 dv = dw * gc.jac;
      pj.v1 = gc.s * sp;
      pj.v2 = -gc.s * cp;
      pj.d1_c1 = dv(0, 0);
      pj.d1_c2 = dv(0, 1);
      pj.d2_c1 = dv(1, 0);
      pj.d2_c2 = dv(1, 1);
      break;
    }
    default:
      throw OutOfDomain("LimitMap::profile: recovery region id");
  }
  return pj;
}

Vec3 LimitMap::value(const Vec3& p) const {
  const RegionId region = classify_limit(p);
  const CylindricalPoint cp = cart_to_cyl(p);
  const ProfileJet pj = profile(region, cp.r, cp.x3);
  return pj.v1 * e_r(cp.theta) + pj.v2 * e_3();
}

Jet LimitMap::eval_at(const Vec3& p, RegionId region) const {
  const CylindricalPoint cp = cart_to_cyl(p);
  Jet jet;
  jet.point = p;
  jet.region = region;
  if (cp.r < kAxisTol) {
    // Axis: the transverse entry v1/r degenerates; use a symmetric finite
    // difference of the value through the axis.
    jet.value = value(p);
    jet.grad = fd_jacobian([this](const Vec3& q) { return value(q); }, p, {.step = 1e-6});
    return jet;
  }
  const ProfileJet pj = profile(region, cp.r, cp.x3);
  jet.value = pj.v1 * e_r(cp.theta) + pj.v2 * e_3();
  jet.grad = grad_cyl_cyl(pj, cp.r, cp.theta);
  return jet;
}

Jet LimitMap::eval(const Vec3& p) const { return eval_at(p, classify_limit(p)); }

double LimitMap::det(const Vec3& p) const {
  const RegionId region = classify_limit(p);
  const CylindricalPoint cp = cart_to_cyl(p);
  switch (region) {
    case RegionId::A: {
      const double rho = std::hypot(cp.r, cp.x3);
      const double phi = std::atan2(cp.r, cp.x3);
      const double cu = std::cos(kPi - phi);  // cos(u_phi) >= 0 here
      if (rho <= 0) throw OutOfDomain("det: singular point");
      const double t = (1.0 - rho) / rho;
      return t * t * cu * cu * cu;
    }
    case RegionId::B: {
      const double rho = std::hypot(cp.r, cp.x3);
      const double phi = std::atan2(cp.r, cp.x3);
      const double t = (rho - 1.0) / rho;
      return t * t / (4.0 * std::sin(0.5 * phi));
    }
    case RegionId::E: {
      const double rho = std::hypot(cp.r, cp.x3 - 1.0);
      const double phi = std::atan2(cp.r, cp.x3 - 1.0);
      if (rho <= 0) throw OutOfDomain("det: singular point");
      const double t = (1.0 + rho) / rho;
      const double c = std::cos(phi);
      return t * t * c * c * c;
    }
    case RegionId::F: {
      const double rho = std::hypot(cp.r, cp.x3 - 1.0);
      const double phi = std::atan2(cp.r, cp.x3 - 1.0);
      const double u = 2.0 * std::cos(phi) + cfg_.beta * (rho - 1.0);
      return cfg_.beta * u * u / (rho * rho);
    }
    case RegionId::D: {
      const SlabChartJet gc = region_d_g(cp.r, cp.x3);
      const double Phi = 0.25 * kPi * (1.0 + gc.z / 3.0);
      if (cp.r < kAxisTol) throw AxisSingular("det: slab axis");
      return (kPi / 12.0) * gc.s * gc.s * std::sin(Phi) / cp.r * gc.jac.determinant();
    }
    default:
      throw OutOfDomain("LimitMap::det: unexpected region");
  }
}

}  // namespace dlab
