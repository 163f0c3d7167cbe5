#pragma once

#include <functional>

#include "dlab/geometry.hpp"
#include "dlab/types.hpp"

namespace dlab {

/// Map value plus full Cartesian gradient at a point. The unit every
/// quadrature density and degree computation consumes.
struct Jet {
  Vec3 point = Vec3::Zero();
  Vec3 value = Vec3::Zero();
  Mat3 grad = Mat3::Zero();
  RegionId region = RegionId::A;
};

/// Two profile components and their partials with respect to the two chart
/// coordinates. Which pair (u_r,u_3) or (u_rho,u_phi) and which coordinates
/// depends on the kernel consuming it.
struct ProfileJet {
  double v1 = 0, v2 = 0;
  double d1_c1 = 0, d1_c2 = 0;  // partials of v1
  double d2_c1 = 0, d2_c2 = 0;  // partials of v2
};

/// Assembles the Cartesian gradient of an axisymmetric map from the 2x2
/// profile derivative d(v1,v2)/d(r,x3) and the transverse stretch v1/r.
Mat3 axisym_gradient(double theta, const Mat2& profile, double v1_over_r);

/// Cylindrical domain / cylindrical image: pj holds (u_r, u_3) and partials
/// w.r.t. (r, x3). Throws AxisSingular at r = 0.
Mat3 grad_cyl_cyl(const ProfileJet& pj, double r, double theta);
/// det Du = (v1/r) det Dv, the closed form matching grad_cyl_cyl.
double det_cyl_cyl(const ProfileJet& pj, double r);

/// Spherical domain / spherical image about a common axis point: pj holds
/// (u_rho, u_phi) and partials w.r.t. (rho, phi). Throws AxisSingular at
/// sin(phi) = 0.
Mat3 grad_sph_sph(const ProfileJet& pj, double rho, double theta, double phi);
double det_sph_sph(const ProfileJet& pj, double rho, double phi);

/// Cylindrical domain / spherical image: pj holds (u_rho, u_phi) and partials
/// w.r.t. (r, x3). Throws AxisSingular at r = 0.
Mat3 grad_cyl_sph(const ProfileJet& pj, double r, double theta);
double det_cyl_sph(const ProfileJet& pj, double r);

Mat3 cofactor(const Mat3& m);
double determinant(const Mat3& m);
/// Squared Frobenius norm |M|^2.
double dirichlet_density(const Mat3& m);

/// 0.5*|M|^2 - |cof(M) e3|; nonnegative for every matrix, zero exactly when
/// the map is conformal on planes orthogonal to e3 with no e3 variation.
double area_energy_residual(const Mat3& m);

struct FdOptions {
  double step = 1e-5;                         // absolute step
  bool richardson = false;                    // one halving extrapolation
  std::function<bool(const Vec3&)> same_piece;  // stencil admissibility
  int max_shrink = 8;
};

/// Central-difference Jacobian of `map` at p. When `same_piece` is given the
/// step is halved until the whole stencil satisfies it; StepTooLarge if that
/// fails max_shrink times.
Mat3 fd_jacobian(const std::function<Vec3(const Vec3&)>& map, const Vec3& p,
                 const FdOptions& opts = {});

}  // namespace dlab
