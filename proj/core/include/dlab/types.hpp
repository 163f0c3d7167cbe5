#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dlab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Point outside the domain of the operation (e.g. |x| > 3).
struct OutOfDomain : std::domain_error {
  using std::domain_error::domain_error;
};

/// Chart formula evaluated on the symmetry axis where it degenerates.
struct AxisSingular : std::domain_error {
  using std::domain_error::domain_error;
};

/// Finite-difference stencil could not be kept inside one smooth piece.
struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Root finder failed to converge.
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadrature cell budget exhausted before the tolerance was met.
struct BudgetExceeded : std::runtime_error {
  double partial_value;
  double error_estimate;
  long cells_used;
  BudgetExceeded(const std::string& what, double value, double err, long cells)
      : std::runtime_error(what), partial_value(value), error_estimate(err), cells_used(cells) {}
};

/// Parameter outside the validity range of an estimate being checked.
struct HypothesisViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Degree probe too close to the image of the sphere.
struct ProbeTooClose : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Image-membership probe within the resolution band of the image boundary.
struct MembershipAmbiguous : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dlab
