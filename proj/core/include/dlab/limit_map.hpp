#pragma once

#include "dlab/kernels.hpp"

namespace dlab {

/// Free choices in the slab and outer-cap pieces of the singular map.
struct LimitMapConfig {
  double beta = 1.0;             // radial slope of the outer cap
  Vec2 fan_center = Vec2(2.0, 0.5);  // ray origin of the slab fan, in (r, x3)
  double kappa = 0.5;            // bulge amplitude of the slab strip
};

/// Result of the slab chart g: (r, x3) -> (s, z) with its 2x2 Jacobian.
struct SlabChartJet {
  double s = 0, z = 0;
  Mat2 jac = Mat2::Zero();
};

/// The singular harmonic-dipole map on B(0,3): two cavitation points O and P
/// joined by the bubble sphere of radius 1/2 about (0,0,1/2).
class LimitMap {
 public:
  explicit LimitMap(const LimitMapConfig& config = {});

  const LimitMapConfig& config() const { return cfg_; }

  /// Value and Cartesian gradient. Gradients are analytic except across the
  /// slab fan (chart-rule with a finite-differenced fan Jacobian) and exactly
  /// on the axis, where a symmetric finite difference of the value is used.
  Jet eval(const Vec3& p) const;
  Vec3 value(const Vec3& p) const;

  /// Closed-form Jacobian determinant where available (regions a, b, e, f),
  /// chart-rule elsewhere.
  double det(const Vec3& p) const;

  /// Slab chart: the strip r >= 1 is closed form, the unit square uses the
  /// ray fan from config().fan_center.
  SlabChartJet region_d_g(double r, double x3) const;

  /// Profile value/partials in the half-plane; v = (u_r, u_3) as functions of
  /// (r, x3). Used by charts and tests.
  ProfileJet profile(RegionId region, double r, double x3) const;

 private:
  LimitMapConfig cfg_;
  Jet eval_at(const Vec3& p, RegionId region) const;
};

}  // namespace dlab
