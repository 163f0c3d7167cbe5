#pragma once

#include "dlab/types.hpp"

namespace dlab {

/// Parameters of the recovery family. alpha = arctan(eps); eta is the radial
/// value taken on the axis of the tube at height 1.
struct RecoveryParams {
  double eps = 0.05;
  double gamma = 1.0 / 3.0;

  RecoveryParams() = default;
  RecoveryParams(double eps_, double gamma_);

  double alpha() const { return std::atan(eps); }
  double eps_gamma() const { return std::pow(eps, gamma); }
};

/// Scalar building blocks of the recovery construction. All functions are
/// deterministic and reentrant.
class Blocks {
 public:
  explicit Blocks(const RecoveryParams& params);

  const RecoveryParams& params() const { return p_; }

  /// Zenith-angle profile on [0, eps]: f(0) = 0, f(eps) = pi/2, f' > 0.
  double f(double r) const;
  double f_prime(double r) const;
  double f_second(double r) const;

  /// Inverse of f on [0, pi/2]; bracketed Newton to 1e-13.
  double g(double phi) const;
  double g_prime(double phi) const;
  double g_second(double phi) const;

  /// W(r) = r / d_r(-cos f(r)) = r / (sin f(r) f'(r)); smooth through r = 0
  /// with W(0) = 1/f'(0)^2.
  double W(double r) const;
  double W_prime(double r) const;

  /// Volume kernel of the polar-cap parametrization.
  double h(double s, double phi) const;
  /// H(s, phi) = integral of h(sigma, phi) over sigma in [0, s]; h is
  /// quadratic in sigma so this is exact.
  double H(double s, double phi) const;
  double h_phi_partial(double s, double phi) const;
  double H_phi_partial(double s, double phi) const;

  /// g(phi)/sin(phi) continued through phi = 0 by g'(0).
  double g_over_sin(double phi) const;

  /// eta = ((2 eps^gamma)^3 + 3 eps / f'(eps))^(1/3).
  double eta() const;

  /// Axis-collapse profile: ((2e^g)^3 + 3 xi eps/f'(eps))^(1/3) style spine
  /// values at integer anchors, affine/cbrt branches between.
  double omega(double xi) const;
  double omega_prime(double xi) const;

  /// Radial reparametrization: quadratic on [eps, eps^(2 gamma)], identity
  /// beyond; r_hat(eps) = 0.
  double r_hat(double r) const;
  double r_hat_prime(double r) const;

  /// Lower radial block of the everted cap:
  /// Q(psi) = ((cos psi + 2 eps^gamma)^3 - 3 H(1, psi))^(1/3).
  double Q_lower(double psi) const;
  double Q_lower_prime(double psi) const;
  /// Upper radial block: ((cos phi + 2 eps^gamma)^3 + 3 W(g(phi)) + 3 H(1, phi))^(1/3).
  double Q_upper(double phi) const;
  double Q_upper_prime(double phi) const;

 private:
  RecoveryParams p_;
  double m_;       // 2 eps^gamma
  double fp0_;     // f'(0)
  double eta_;
};

}  // namespace dlab
