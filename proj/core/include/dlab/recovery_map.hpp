#pragma once

#include "dlab/blocks.hpp"
#include "dlab/kernels.hpp"
#include "dlab/limit_map.hpp"

namespace dlab {

/// The bi-Lipschitz regularizations u_eps of the singular map. Values and
/// gradients are analytic in the tube, the two polar caps, the lower shell,
/// the upper shell and the outer cap; the lower outer region and the slab use
/// the chart rule through numerically differentiated auxiliary pieces.
class RecoveryMap {
 public:
  RecoveryMap(const RecoveryParams& params, const LimitMap* limit);

  const RecoveryParams& params() const { return blocks_.params(); }
  const Blocks& blocks() const { return blocks_; }
  const LimitMap& limit() const { return *limit_; }

  Jet eval(const Vec3& p) const;
  Vec3 value(const Vec3& p) const;

  /// Jacobian determinant by the closed forms: exactly 1 in the
  /// incompressible regions, product formulas in the shells and outer cap,
  /// jet determinant in the remaining two regions.
  double det_analytic(const Vec3& p) const;

  // --- parametric evaluators (used by region charts and tests) ---

  /// Tube: (r, x3) in [0, eps] x [0, 1].
  Jet eval_tube(double r, double x3, double theta = 0.0) const;
  /// Lower polar cap about O: (s, phi) in [0,1] x [0, pi/2).
  Jet eval_cap_lower(double s, double phi, double theta = 0.0) const;
  /// Upper polar cap about P: (s, phi) in [0,1] x [0, pi/2).
  Jet eval_cap_upper(double s, double phi, double theta = 0.0) const;
  /// Lower shell about O: (rho, psi) with rho in [eps,1], psi zenith from -e3.
  Jet eval_shell_lower(double rho, double psi, double theta = 0.0) const;
  /// Upper shell about P: (rho, phi) with rho in [eps,1], phi zenith from e3.
  Jet eval_shell_upper(double rho, double phi, double theta = 0.0) const;
  /// Lower outer region: (rho, phi_std) in [1,3] x [pi/2, pi].
  Jet eval_outer_lower(double rho, double phi, double theta = 0.0) const;
  /// Slab: (r, x3), r >= eps.
  Jet eval_slab(double r, double x3, double theta = 0.0) const;
  /// Outer cap: same chart as the singular map's outer cap.
  Jet eval_outer_upper(double rho, double phi, double theta = 0.0) const;

  /// Cap parametrizations: chart point of the lower/upper cap.
  Vec3 cap_lower_point(double s, double phi, double theta = 0.0) const;
  Vec3 cap_upper_point(double s, double phi, double theta = 0.0) const;
  /// Volume weight of the cap charts (per unit s, phi, full azimuth).
  double cap_weight(double s, double phi) const;

  /// Inverts the cap parametrization at a Cartesian point (Newton).
  Vec2 cap_lower_invert(const Vec3& p) const;
  Vec2 cap_upper_invert(const Vec3& p) const;

  // --- auxiliary pieces of the lower outer region ---

  /// Intermediate profile (phi_r, phi_3) of the lower outer region as a
  /// function of (rho, phi_std).
  Vec2 phi_eps_b(double rho, double phi) const;
  /// Axisymmetric rewrapping of the scaled wedge; fixes the interface ray
  /// pointwise, doubles the zenith angle on the inner arc, identity beyond
  /// distance 2*sqrt(2) from (0,1). Input/output in half-plane (r, x3).
  Vec2 psi(const Vec2& q) const;
  /// 2x2 Jacobian of psi (finite differences on the smooth pieces).
  Mat2 psi_jacobian(const Vec2& q) const;

  /// Blended interpolation parameter of the shells: matches the affine rate
  /// away from the equator and the slab clock at the equator exactly.
  double shell_lambda_lower(double psi) const;
  double shell_lambda_upper(double phi) const;

 private:
  Blocks blocks_;
  const LimitMap* limit_;

  struct PsiSolve {
    Vec2 value;
    Mat2 jac;
  };
  PsiSolve psi_solve(const Vec2& q, bool with_jac) const;
};

}  // namespace dlab
