#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "dlab/types.hpp"

namespace dlab {

// ---------------------------------------------------------------------------
// Coordinate systems. All maps here are axisymmetric about the x3-axis;
// points on the axis get theta = 0 by convention.
// ---------------------------------------------------------------------------

struct CylindricalPoint {
  double r = 0;      // >= 0
  double theta = 0;  // in [0, 2pi)
  double x3 = 0;
};

struct SphericalPoint {
  double rho = 0;    // >= 0
  double theta = 0;  // in [0, 2pi)
  double phi = 0;    // zenith angle in [0, pi]
  Vec3 center = Vec3::Zero();
};

CylindricalPoint cart_to_cyl(const Vec3& p);
Vec3 cyl_to_cart(const CylindricalPoint& c);
SphericalPoint cart_to_sph(const Vec3& p, const Vec3& center = Vec3::Zero());
Vec3 sph_to_cart(const SphericalPoint& s);

/// Unit vectors of the cylindrical frame at azimuth theta.
inline Vec3 e_r(double theta) { return Vec3(std::cos(theta), std::sin(theta), 0.0); }
inline Vec3 e_theta(double theta) { return Vec3(-std::sin(theta), std::cos(theta), 0.0); }
inline Vec3 e_3() { return Vec3(0.0, 0.0, 1.0); }

/// Spherical frame at (theta, phi); e_rho ^ e_phi = e_theta.
inline Vec3 e_rho(double theta, double phi) {
  return std::sin(phi) * e_r(theta) + std::cos(phi) * e_3();
}
inline Vec3 e_phi(double theta, double phi) {
  return std::cos(phi) * e_r(theta) - std::sin(phi) * e_3();
}

/// Reference ball radius and the two cavitation points.
inline constexpr double kDomainRadius = 3.0;
inline Vec3 point_O() { return Vec3(0, 0, 0); }
inline Vec3 point_P() { return Vec3(0, 0, 1); }
/// Created bubble: sphere of radius 1/2 about (0,0,1/2) in the deformed state.
inline Vec3 bubble_center() { return Vec3(0, 0, 0.5); }
inline constexpr double kBubbleRadius = 0.5;

// ---------------------------------------------------------------------------
// Region atlas
// ---------------------------------------------------------------------------

enum class RegionId {
  A, B, D, E, F,                       // singular-map atlas
  CEps, APrimeEps, AEps, BEps, DEps,   // recovery atlas
  EPrimeEps, EEps, FEps,
};

std::string region_name(RegionId id);
/// Parses canonical names ("a", "c_eps", "a_prime_eps") plus the short
/// aliases "a_prime", "e_prime", "c".
RegionId region_from_name(const std::string& name);

/// Region of the singular map containing p; ties broken by precedence
/// a < b < d < e < f. Throws OutOfDomain outside the closed ball B(0,3).
RegionId classify_limit(const Vec3& p);

/// Recovery-atlas region for parameter eps; precedence
/// c < a' < a < b < d < e' < e < f. Throws OutOfDomain outside B(0,3).
RegionId classify_recovery(const Vec3& p, double eps);

/// Dyadic-grading request for one edge of a chart parameter box.
struct GradedEdge {
  int axis = 0;        // 0 or 1
  bool at_upper = false;
  double min_cell = 1e-6;
};

struct Jet;  // kernels.hpp

/// A parametric description of one region: a 2-parameter box, the embedding
/// into the theta=0 half-plane, and the volume weight d(vol)/d(c0 dc1)
/// including the 2*pi azimuthal factor. `jet`, when set, evaluates the map
/// attached to the chart directly in chart parameters.
struct RegionChart {
  RegionId region;
  std::string name;
  double lo0 = 0, hi0 = 1, lo1 = 0, hi1 = 1;
  std::function<Vec3(double, double)> point;
  std::function<double(double, double)> weight;
  std::function<Jet(double, double)> jet;
  std::vector<GradedEdge> grading;
};

// ---------------------------------------------------------------------------
// Deterministic low-discrepancy sampling
// ---------------------------------------------------------------------------

/// Halton radical-inverse in the given base, index >= 0.
double halton(long index, int base);
/// Quasi-random point of [0,1)^2 (bases 2, 3).
Vec2 halton2(long index);
/// Quasi-random point of [0,1)^3 (bases 2, 3, 5).
Vec3 halton3(long index);

}  // namespace dlab
