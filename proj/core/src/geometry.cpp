#include "dlab/geometry.hpp"

#include <algorithm>
#include <map>

namespace dlab {

namespace {
double wrap_theta(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}
}  // namespace

CylindricalPoint cart_to_cyl(const Vec3& p) {
  CylindricalPoint c;
  c.r = std::hypot(p.x(), p.y());
  c.theta = (c.r > 0) ? wrap_theta(std::atan2(p.y(), p.x())) : 0.0;
  c.x3 = p.z();
  return c;
}

Vec3 cyl_to_cart(const CylindricalPoint& c) {
  return Vec3(c.r * std::cos(c.theta), c.r * std::sin(c.theta), c.x3);
}

SphericalPoint cart_to_sph(const Vec3& p, const Vec3& center) {
  const Vec3 q = p - center;
  SphericalPoint s;
  s.center = center;
  s.rho = q.norm();
  const double r = std::hypot(q.x(), q.y());
  s.theta = (r > 0) ? wrap_theta(std::atan2(q.y(), q.x())) : 0.0;
  s.phi = (s.rho > 0) ? std::atan2(r, q.z()) : 0.0;
  return s;
}

Vec3 sph_to_cart(const SphericalPoint& s) {
  return s.center + s.rho * e_rho(s.theta, s.phi);
}

std::string region_name(RegionId id) {
  switch (id) {
    case RegionId::A: return "a";
    case RegionId::B: return "b";
    case RegionId::D: return "d";
    case RegionId::E: return "e";
    case RegionId::F: return "f";
    case RegionId::CEps: return "c_eps";
    case RegionId::APrimeEps: return "a_prime_eps";
    case RegionId::AEps: return "a_eps";
    case RegionId::BEps: return "b_eps";
    case RegionId::DEps: return "d_eps";
    case RegionId::EPrimeEps: return "e_prime_eps";
    case RegionId::EEps: return "e_eps";
    case RegionId::FEps: return "f_eps";
  }
  return "?";
}

RegionId region_from_name(const std::string& name) {
  static const std::map<std::string, RegionId> table = {
      {"a", RegionId::A},         {"b", RegionId::B},
      {"d", RegionId::D},         {"e", RegionId::E},
      {"f", RegionId::F},         {"c_eps", RegionId::CEps},
      {"c", RegionId::CEps},      {"a_prime_eps", RegionId::APrimeEps},
      {"a_prime", RegionId::APrimeEps},
      {"a_eps", RegionId::AEps},  {"b_eps", RegionId::BEps},
      {"d_eps", RegionId::DEps},  {"e_prime_eps", RegionId::EPrimeEps},
      {"e_prime", RegionId::EPrimeEps},
      {"e_eps", RegionId::EEps},  {"f_eps", RegionId::FEps},
  };
  auto it = table.find(name);
  if (it == table.end()) throw OutOfDomain("unknown region name: " + name);
  return it->second;
}

RegionId classify_limit(const Vec3& p) {
  const double rho = p.norm();
  if (rho > kDomainRadius * (1.0 + 1e-12))
    throw OutOfDomain("classify_limit: point outside B(0,3)");
  const double x3 = p.z();
  if (x3 <= 0.0) return (rho <= 1.0) ? RegionId::A : RegionId::B;
  if (x3 <= 1.0) return RegionId::D;
  const double rho_p = (p - point_P()).norm();
  return (rho_p <= 1.0) ? RegionId::E : RegionId::F;
}

RegionId classify_recovery(const Vec3& p, double eps) {
  const double rho = p.norm();
  if (rho > kDomainRadius * (1.0 + 1e-12))
    throw OutOfDomain("classify_recovery: point outside B(0,3)");
  const double x3 = p.z();
  const double r = std::hypot(p.x(), p.y());
  if (r <= eps && x3 >= 0.0 && x3 <= 1.0) return RegionId::CEps;
  if (x3 <= 0.0) {
    if (rho <= eps) return RegionId::APrimeEps;
    if (rho <= 1.0) return RegionId::AEps;
    return RegionId::BEps;
  }
  if (x3 <= 1.0) return RegionId::DEps;
  const double rho_p = (p - point_P()).norm();
  if (rho_p <= eps) return RegionId::EPrimeEps;
  if (rho_p <= 1.0) return RegionId::EEps;
  return RegionId::FEps;
}

double halton(long index, int base) {
  double f = 1.0, result = 0.0;
  long i = index + 1;  // skip the origin
  while (i > 0) {
    f /= base;
    result += f * static_cast<double>(i % base);
    i /= base;
  }
  return result;
}

Vec2 halton2(long index) { return Vec2(halton(index, 2), halton(index, 3)); }

Vec3 halton3(long index) {
  return Vec3(halton(index, 2), halton(index, 3), halton(index, 5));
}

}  // namespace dlab
