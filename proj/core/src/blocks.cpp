#include "dlab/blocks.hpp"

#include <algorithm>

namespace dlab {

namespace {
// Hypothesis needed by the cap estimates used throughout.
constexpr double kShellBound = 7.0 / (9.0 * kPi * 1.4142135623730951);
}  // namespace

RecoveryParams::RecoveryParams(double eps_, double gamma_) : eps(eps_), gamma(gamma_) {
  if (!(eps > 0.0) || eps > 0.2)
    throw HypothesisViolated("RecoveryParams: eps must lie in (0, 0.2]");
  if (!(gamma > 0.0) || gamma > 1.0 / 3.0 + 1e-15)
    throw HypothesisViolated("RecoveryParams: gamma must lie in (0, 1/3]");
  if (std::pow(eps, 2.0 - 2.0 * gamma) >= kShellBound)
    throw HypothesisViolated("RecoveryParams: eps^(2-2 gamma) too large");
}

Blocks::Blocks(const RecoveryParams& params) : p_(params) {
  m_ = 2.0 * p_.eps_gamma();
  fp0_ = 1.0 / (p_.eps * p_.eps) + p_.alpha() / p_.eps;
  eta_ = std::cbrt(m_ * m_ * m_ + 3.0 * p_.eps / f_prime(p_.eps));
}

double Blocks::f(double r) const {
  if (r < -1e-15 || r > p_.eps * (1.0 + 1e-12))
    throw OutOfDomain("Blocks::f: r outside [0, eps]");
  return std::atan(r / (p_.eps * p_.eps)) + p_.alpha() * r / p_.eps;
}

double Blocks::f_prime(double r) const {
  const double e2 = p_.eps * p_.eps;
  return e2 / (e2 * e2 + r * r) + p_.alpha() / p_.eps;
}

double Blocks::f_second(double r) const {
  const double e2 = p_.eps * p_.eps;
  const double d = e2 * e2 + r * r;
  return -2.0 * e2 * r / (d * d);
}

double Blocks::g(double phi) const {
  if (phi < -1e-15 || phi > 0.5 * kPi * (1.0 + 1e-12))
    throw OutOfDomain("Blocks::g: phi outside [0, pi/2]");
  phi = std::clamp(phi, 0.0, 0.5 * kPi);
  if (phi == 0.0) return 0.0;
  if (phi == 0.5 * kPi) return p_.eps;
  double lo = 0.0, hi = p_.eps;
  double r = std::min(p_.eps * phi / (0.5 * kPi), p_.eps);  // coarse start
  for (int it = 0; it < 60; ++it) {
    const double val = f(r) - phi;
    if (std::abs(val) <= 1e-13) return r;
    (val > 0 ? hi : lo) = r;
    const double step = val / f_prime(r);
    double next = r - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    r = next;
  }
  if (std::abs(f(r) - phi) > 1e-10)
    throw NoConvergence("Blocks::g: root finder stalled");
  return r;
}

double Blocks::g_prime(double phi) const { return 1.0 / f_prime(g(phi)); }

double Blocks::g_second(double phi) const {
  const double r = g(phi);
  const double fp = f_prime(r);
  return -f_second(r) / (fp * fp * fp);
}

double Blocks::W(double r) const {
  const double e2 = p_.eps * p_.eps;
  if (r < 1e-6 * e2) return 1.0 / (fp0_ * fp0_);
  return r / (std::sin(f(r)) * f_prime(r));
}

double Blocks::W_prime(double r) const {
  const double e2 = p_.eps * p_.eps;
  if (r < 1e-6 * e2) return 0.0;  // W is even in r to leading order
  const double fr = f(r), fp = f_prime(r);
  const double S = std::sin(fr) * fp;
  const double Sp = std::cos(fr) * fp * fp + std::sin(fr) * f_second(r);
  return (S - r * Sp) / (S * S);
}

double Blocks::g_over_sin(double phi) const {
  if (phi < 1e-9) return g_prime(0.0);
  return g(phi) / std::sin(phi);
}

double Blocks::h(double s, double phi) const {
  const double A = g_over_sin(phi), B = p_.eps;
  const double C = g_prime(phi) * std::cos(phi);
  const double D = p_.eps - g(phi) * std::sin(phi);
  return p_.eps * ((1.0 - s) * A + s * B) * ((1.0 - s) * C + s * D);
}

double Blocks::H(double s, double phi) const {
  // h(sigma) = eps (A + sigma(B-A)) (C + sigma(D-C)); exact antiderivative.
  const double A = g_over_sin(phi), B = p_.eps;
  const double C = g_prime(phi) * std::cos(phi);
  const double D = p_.eps - g(phi) * std::sin(phi);
  const double c1 = A * (D - C) + C * (B - A);
  const double c2 = (B - A) * (D - C);
  return p_.eps * (A * C * s + 0.5 * c1 * s * s + c2 * s * s * s / 3.0);
}

double Blocks::h_phi_partial(double s, double phi) const {
  const double A = g_over_sin(phi), B = p_.eps;
  const double C = g_prime(phi) * std::cos(phi);
  const double D = p_.eps - g(phi) * std::sin(phi);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double gp = g_prime(phi), gpp = g_second(phi);
  const double dA = (phi < 1e-9) ? 0.0 : (gp * sp - g(phi) * cp) / (sp * sp);
  const double dC = gpp * cp - gp * sp;
  const double dD = -(gp * sp + g(phi) * cp);
  const double F1 = (1.0 - s) * A + s * B;
  const double F2 = (1.0 - s) * C + s * D;
  return p_.eps * ((1.0 - s) * dA * F2 + F1 * ((1.0 - s) * dC + s * dD));
}

double Blocks::H_phi_partial(double s, double phi) const {
  const double A = g_over_sin(phi), B = p_.eps;
  const double C = g_prime(phi) * std::cos(phi);
  const double D = p_.eps - g(phi) * std::sin(phi);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double gp = g_prime(phi), gpp = g_second(phi);
  const double dA = (phi < 1e-9) ? 0.0 : (gp * sp - g(phi) * cp) / (sp * sp);
  const double dC = gpp * cp - gp * sp;
  const double dD = -(gp * sp + g(phi) * cp);
  const double dc1 = dA * (D - C) + A * (dD - dC) + dC * (B - A) - C * dA;
  const double dc2 = -dA * (D - C) + (B - A) * (dD - dC);
  return p_.eps * ((dA * C + A * dC) * s + 0.5 * dc1 * s * s + dc2 * s * s * s / 3.0);
}

double Blocks::eta() const { return eta_; }

double Blocks::omega(double xi) const {
  const double eg = p_.eps_gamma();
  if (xi < 0.0 || xi > 3.0 + 1e-12) throw OutOfDomain("Blocks::omega: xi outside [0,3]");
  xi = std::clamp(xi, 0.0, 3.0);
  if (xi <= 1.0) return xi * (2.0 * eg) + (1.0 - xi) * eg;
  if (xi <= 2.0)
    return std::cbrt(8.0 * eg * eg * eg + (xi - 1.0) * 3.0 * p_.eps / f_prime(p_.eps));
  // The printed middle term of the last branch contradicts the endpoint
  // values omega(2) = eta, omega(3) = 6 eps^gamma; use the affine
  // interpolation that those endpoints force.
  return (3.0 - xi) * eta_ + (xi - 2.0) * 6.0 * eg;
}

double Blocks::omega_prime(double xi) const {
  const double eg = p_.eps_gamma();
  if (xi <= 1.0) return eg;
  if (xi <= 2.0) {
    const double w = omega(xi);
    return p_.eps / f_prime(p_.eps) / (w * w);
  }
  return 6.0 * eg - eta_;
}

double Blocks::r_hat(double r) const {
  const double knee = std::pow(p_.eps, 2.0 * p_.gamma);
  if (r >= knee) return r;
  return (r - p_.eps) * r / (knee - p_.eps);
}

double Blocks::r_hat_prime(double r) const {
  const double knee = std::pow(p_.eps, 2.0 * p_.gamma);
  if (r >= knee) return 1.0;
  return (2.0 * r - p_.eps) / (knee - p_.eps);
}

double Blocks::Q_lower(double psi) const {
  const double a = std::cos(psi) + m_;
  return std::cbrt(a * a * a - 3.0 * H(1.0, psi));
}

double Blocks::Q_lower_prime(double psi) const {
  const double a = std::cos(psi) + m_;
  const double q = Q_lower(psi);
  return (-a * a * std::sin(psi) - H_phi_partial(1.0, psi)) / (q * q);
}

double Blocks::Q_upper(double phi) const {
  const double a = std::cos(phi) + m_;
  return std::cbrt(a * a * a + 3.0 * W(g(phi)) + 3.0 * H(1.0, phi));
}

double Blocks::Q_upper_prime(double phi) const {
  const double a = std::cos(phi) + m_;
  const double q = Q_upper(phi);
  return (-a * a * std::sin(phi) + W_prime(g(phi)) * g_prime(phi) + H_phi_partial(1.0, phi)) /
         (q * q);
}

}  // namespace dlab
