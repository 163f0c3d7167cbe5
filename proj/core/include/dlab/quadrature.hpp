#pragma once

#include <functional>
#include <vector>

#include "dlab/geometry.hpp"
#include "dlab/kernels.hpp"
#include "dlab/types.hpp"

namespace dlab {

struct QuadSpec {
  double atol = 1e-10;
  double rtol = 1e-10;
  long max_cells = 200000;   // subdivision budget
  int order = 15;            // Gauss-Legendre nodes per cell per axis (>= 5)
  std::vector<GradedEdge> grading;  // extra dyadic pre-refinement
};

struct QuadResult {
  double value = 0;
  double error_estimate = 0;
  long cells_used = 0;
};

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

/// Adaptive Gauss-Legendre integration on [a, b]. Cells are bisected until
/// the summed coarse/fine discrepancy meets max(atol, rtol*|value|);
/// BudgetExceeded carries the partial result.
QuadResult integrate_1d(const Fn1& f, double a, double b, const QuadSpec& spec = {});

/// Tensor-product adaptive rule on [a0,b0]x[a1,b1] with quad-tree subdivision.
QuadResult integrate_2d(const Fn2& f, double a0, double b0, double a1, double b1,
                        const QuadSpec& spec = {});

/// Integral of density over the chart's region (volume weight and the 2*pi
/// azimuthal factor are the chart's). Requires chart.jet. The density must be
/// axisymmetric: charts sample the theta = 0 half-plane only.
QuadResult integrate_region(const RegionChart& chart,
                            const std::function<double(const Jet&)>& density,
                            const QuadSpec& spec = {});

/// Same but with an arbitrary map evaluated at chart points.
QuadResult integrate_region_with_map(const RegionChart& chart,
                                     const std::function<Jet(const Vec3&)>& map,
                                     const std::function<double(const Jet&)>& density,
                                     const QuadSpec& spec = {});

/// Surface integral over the sphere of the given center/radius:
/// phi is adaptive Gauss-Legendre, theta a fixed-count periodic trapezoid.
QuadResult integrate_sphere(const Vec3& center, double radius,
                            const std::function<double(const Vec3&, const Vec3&)>& density,
                            const QuadSpec& spec = {}, int theta_samples = 128);

/// Lateral area of the surface of revolution swept by a polyline of
/// (s, z) profile points: 2*pi * integral of s along the arc.
double revolve_arc_area(const std::vector<Vec2>& polyline);

/// Gauss-Legendre nodes/weights on [-1, 1], computed once per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

}  // namespace dlab
