#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlab/charts.hpp"
#include "dlab/quadrature.hpp"

namespace dlab {

using MapValueFn = std::function<Vec3(const Vec3&)>;
using MapJetFn = std::function<Jet(const Vec3&)>;

/// Closed image curve of a sphere about an axis point in the deformed
/// (s, z) half-plane, completed by reflection through the axis. Supports
/// exact integer winding numbers and distance queries.
class ProfileCurve {
 public:
  /// Adaptive construction: parameter intervals are split until consecutive
  /// image points are closer than refine_tol.
  ProfileCurve(const MapValueFn& map, const Vec3& center, double radius,
               double refine_tol = 4e-3, int max_points = 500000);

  int winding(const Vec2& q) const;
  /// Distance to the polyline, exact up to `cap` (defaults to the resolution
  /// bound); larger distances are reported as 2*cap.
  double distance(const Vec2& q, double cap = 0.0) const;
  double resolution_bound() const { return bound_; }
  const std::vector<Vec2>& points() const { return pts_; }

 private:
  std::vector<Vec2> pts_;  // closed: front() is implicit successor of back()
  double bound_ = 0;
  // uniform hash grid over segments for distance queries
  double cell_ = 0, x0_ = 0, y0_ = 0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> buckets_;
  void build_index();
};

/// Degree of the axisymmetric map at probe y with respect to B(center, r),
/// computed as the plane winding number of the reflected profile curve.
/// Throws ProbeTooClose when the probe is within the curve resolution bound.
int winding_degree(const ProfileCurve& curve, const Vec3& probe);
int winding_degree(const MapValueFn& map, const Vec3& center, double radius,
                   const Vec3& probe);

/// Compactly supported vector field with analytic divergence.
struct VectorField {
  std::function<Vec3(const Vec3&)> value;
  std::function<double(const Vec3&)> divergence;
  std::string name;
};

/// Boundary flux of g through the image of the sphere:
/// integral of (g o u) . (cof Du nu) over the sphere.
QuadResult degree_flux(const MapJetFn& map, const Vec3& center, double radius,
                       const VectorField& g, const QuadSpec& spec = {});

/// C^1 scalar test function with analytic gradient.
struct TestFunction {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> grad;
  std::string name;
  double c1_norm = 1.0;  // sup |phi| + sup |D phi| (sampled)
};

/// C^1 field on domain x target with the derivatives the pairing needs.
struct TestField {
  std::function<Vec3(const Vec3&, const Vec3&)> value;
  std::function<Mat3(const Vec3&, const Vec3&)> dx;       // (i,j) = d f_i / d x_j
  std::function<double(const Vec3&, const Vec3&)> div_y;
  std::string name;
  double sup_norm = 1.0;
};

struct PairingResult {
  std::string test_fn;
  double value = 0;
  double oracle = 0;
  double deviation = 0;
};

/// Weak determinant pairing -1/3 int u . (cof Du) Dphi over the atlas.
/// With `atoms` the oracle adds (pi/6)(phi(P) - phi(O)) to int phi det Du.
PairingResult det_pairing(const std::vector<RegionChart>& atlas, const TestFunction& phi,
                          bool atoms, const QuadSpec& spec = {});

/// Created-surface pairing int [D_x f . cof Du + div_y f det Du].
/// The oracle integrates (f(P,y) - f(O,y)) . nu over the bubble when `atoms`,
/// else it is 0. The bubble normal orientation is the frozen calibration
/// kBubbleNormalSign * outward.
PairingResult surface_pairing(const std::vector<RegionChart>& atlas, const TestField& f,
                              bool atoms, const QuadSpec& spec = {});

/// Orientation of the created-surface normal relative to the outward normal
/// of the bubble sphere, fixed once by calibration.
inline constexpr double kBubbleNormalSign = -1.0;

/// Oracle side of surface_pairing (bubble quadrature only).
double surface_pairing_oracle(const TestField& f, const QuadSpec& spec = {});

std::vector<TestFunction> standard_test_functions();
std::vector<TestField> standard_test_fields();
/// |E_u(f)|/sup|f| maximized over a fixed dictionary; approaches the total
/// created area 2 pi for the singular map.
double surface_energy_dictionary_sup(const std::vector<RegionChart>& atlas,
                                     const QuadSpec& spec = {});

/// Forward-image membership oracle: stratified samples of the solid ball
/// pushed through the map, hashed in the deformed half-plane.
class ImageSampler {
 public:
  ImageSampler(const MapValueFn& map, const Vec3& center, double radius,
               int grid = 1000);
  /// Distance from q to the nearest image sample, exact up to `cap`
  /// (larger distances are reported as 2*cap).
  double nearest(const Vec2& q, double cap = 0.1) const;

 private:
  double cell_, x0_, y0_;
  int nx_, ny_;
  std::vector<std::vector<Vec2>> buckets_;
};

struct DeltaField {
  double s0, z0, ds;  // grid origin and spacing
  int ns, nz;
  std::vector<int> value;  // kInvalid where discarded
  static constexpr int kInvalid = -9999;
  int at(int i, int j) const { return value[static_cast<size_t>(j) * ns + i]; }
  Vec2 point(int i, int j) const { return Vec2(s0 + i * ds, z0 + j * ds); }
};

/// Generalized-cavity indicator deg(u, B(x,r), .) - chi_imG on a grid window
/// of the deformed half-plane. Probes near the boundary image or inside the
/// membership ambiguity band are marked invalid.
DeltaField delta_field(const MapValueFn& map, const Vec3& x, double radius,
                       Vec2 window_s, Vec2 window_z, double resolution,
                       int membership_grid = 700);

/// Level-(1/2) boundary of {field == level} after one 3x3 smoothing pass,
/// returned as the longest closed contour polyline.
std::vector<Vec2> extract_level_loop(const DeltaField& field, int level);

struct SingularMassResult {
  std::vector<double> radii;
  std::vector<double> areas;   // revolve areas of the extracted bubbles
  double extrapolated = 0;     // r -> 0 linear extrapolation
  double mass = 0;             // |P - O| * extrapolated
};

/// Jump mass of the inverse: bubble area extracted from Delta_{P,r} level
/// sets, extrapolated to r = 0, times the pole distance.
SingularMassResult singular_mass(const MapValueFn& map,
                                 const std::vector<double>& radii = {0.4, 0.2, 0.1},
                                 double resolution = 0.005);

struct InvReport {
  long interior_samples = 0, exterior_samples = 0;
  long interior_violations = 0, exterior_violations = 0;
  double violation_fraction() const {
    const long n = interior_samples + exterior_samples;
    return n ? double(interior_violations + exterior_violations) / n : 0.0;
  }
};

/// Monotonicity probe: interior material must map inside the topological
/// image of the sphere, exterior material outside.
InvReport inv_check(const MapValueFn& map, const Vec3& center, double radius,
                    long n_samples, unsigned seed = 12345);

}  // namespace dlab
