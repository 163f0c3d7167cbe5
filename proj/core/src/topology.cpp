#include "dlab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace dlab {

// ---------------------------------------------------------------------------
// ProfileCurve
// ---------------------------------------------------------------------------

ProfileCurve::ProfileCurve(const MapValueFn& map, const Vec3& center, double radius,
                           double refine_tol, int max_points) {
  if (std::hypot(center.x(), center.y()) > 1e-12)
    throw OutOfDomain("ProfileCurve: ball center must lie on the axis");
  auto image = [&](double t) {
    const Vec3 u = map(center + radius * e_rho(0.0, t));
    return Vec2(std::hypot(u.x(), u.y()), u.z());
  };
  struct Node {
    double t;
    Vec2 p;
  };
  std::vector<Node> nodes;
  const int n0 = 257;
  nodes.reserve(n0);
  for (int i = 0; i < n0; ++i) {
    const double t = kPi * i / (n0 - 1);
    nodes.push_back({t, image(t)});
  }
  bool changed = true;
  while (changed && static_cast<int>(nodes.size()) < max_points) {
    changed = false;
    std::vector<Node> next;
    next.reserve(nodes.size() * 2);
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      next.push_back(nodes[i]);
      if ((nodes[i + 1].p - nodes[i].p).norm() > refine_tol &&
          nodes[i + 1].t - nodes[i].t > 1e-10) {
        const double tm = 0.5 * (nodes[i].t + nodes[i + 1].t);
        next.push_back({tm, image(tm)});
        changed = true;
      }
    }
    next.push_back(nodes.back());
    nodes.swap(next);
  }
  pts_.reserve(nodes.size() * 2);
  for (const auto& n : nodes) pts_.push_back(n.p);
  // close by reflection through the axis (skip the two axis endpoints)
  for (size_t i = nodes.size() - 1; i-- > 1;)
    pts_.push_back(Vec2(-nodes[i].p.x(), nodes[i].p.y()));
  // the zenith sweep traverses the loop clockwise; store it counterclockwise
  // so the winding number carries the usual orientation
  std::reverse(pts_.begin(), pts_.end());
  double max_seg = 0;
  for (size_t i = 0; i < pts_.size(); ++i) {
    const Vec2 a = pts_[i], b = pts_[(i + 1) % pts_.size()];
    max_seg = std::max(max_seg, (b - a).norm());
  }
  bound_ = std::max(1.5 * refine_tol, 0.75 * max_seg);
  build_index();
}

void ProfileCurve::build_index() {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& p : pts_) {
    xlo = std::min(xlo, p.x());
    xhi = std::max(xhi, p.x());
    ylo = std::min(ylo, p.y());
    yhi = std::max(yhi, p.y());
  }
  cell_ = std::max(2.0 * bound_, 1e-6);
  x0_ = xlo - cell_;
  y0_ = ylo - cell_;
  nx_ = static_cast<int>((xhi - x0_) / cell_) + 3;
  ny_ = static_cast<int>((yhi - y0_) / cell_) + 3;
  buckets_.assign(static_cast<size_t>(nx_) * ny_, {});
  for (size_t i = 0; i < pts_.size(); ++i) {
    const Vec2 a = pts_[i], b = pts_[(i + 1) % pts_.size()];
    const int ix0 = static_cast<int>((std::min(a.x(), b.x()) - x0_) / cell_);
    const int ix1 = static_cast<int>((std::max(a.x(), b.x()) - x0_) / cell_);
    const int iy0 = static_cast<int>((std::min(a.y(), b.y()) - y0_) / cell_);
    const int iy1 = static_cast<int>((std::max(a.y(), b.y()) - y0_) / cell_);
    for (int ix = std::max(ix0, 0); ix <= std::min(ix1, nx_ - 1); ++ix)
      for (int iy = std::max(iy0, 0); iy <= std::min(iy1, ny_ - 1); ++iy)
        buckets_[static_cast<size_t>(iy) * nx_ + ix].push_back(static_cast<int>(i));
  }
}

double ProfileCurve::distance(const Vec2& q, double cap) const {
  if (cap <= 0.0) cap = bound_;
  const int ix = static_cast<int>((q.x() - x0_) / cell_);
  const int iy = static_cast<int>((q.y() - y0_) / cell_);
  const int max_ring = static_cast<int>(cap / cell_) + 2;
  double best = 1e300;
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (best < (ring - 1) * cell_) break;
    for (int dx = -ring; dx <= ring; ++dx)
      for (int dy = -ring; dy <= ring; ++dy) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jy < 0 || jx >= nx_ || jy >= ny_) continue;
        for (int si : buckets_[static_cast<size_t>(jy) * nx_ + jx]) {
          const Vec2 a = pts_[si], b = pts_[(si + 1) % pts_.size()];
          const Vec2 d = b - a;
          const double len2 = d.squaredNorm();
          const double t = len2 > 0 ? std::clamp((q - a).dot(d) / len2, 0.0, 1.0) : 0.0;
          best = std::min(best, (q - (a + t * d)).norm());
        }
      }
  }
  return std::min(best, 2.0 * cap);
}

int ProfileCurve::winding(const Vec2& q) const {
  // crossing count; robust because probes keep resolution_bound() clearance
  int wn = 0;
  const size_t n = pts_.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = pts_[i];
    const Vec2& b = pts_[(i + 1) % n];
    if (a.y() <= q.y()) {
      if (b.y() > q.y() &&
          (b.x() - a.x()) * (q.y() - a.y()) - (q.x() - a.x()) * (b.y() - a.y()) > 0)
        ++wn;
    } else if (b.y() <= q.y() &&
               (b.x() - a.x()) * (q.y() - a.y()) - (q.x() - a.x()) * (b.y() - a.y()) < 0) {
      --wn;
    }
  }
  return wn;
}

int winding_degree(const ProfileCurve& curve, const Vec3& probe) {
  const Vec2 q(std::hypot(probe.x(), probe.y()), probe.z());
  if (curve.distance(q) < curve.resolution_bound())
    throw ProbeTooClose("winding_degree: probe within the curve resolution bound");
  return curve.winding(q);
}

int winding_degree(const MapValueFn& map, const Vec3& center, double radius,
                   const Vec3& probe) {
  return winding_degree(ProfileCurve(map, center, radius), probe);
}

QuadResult degree_flux(const MapJetFn& map, const Vec3& center, double radius,
                       const VectorField& g, const QuadSpec& spec) {
  return integrate_sphere(
      center, radius,
      [&](const Vec3& x, const Vec3& nu) {
        const Jet j = map(x);
        return g.value(j.value).dot(cofactor(j.grad) * nu);
      },
      spec);
}

// ---------------------------------------------------------------------------
// Pairings
// ---------------------------------------------------------------------------

PairingResult det_pairing(const std::vector<RegionChart>& atlas, const TestFunction& phi,
                          bool atoms, const QuadSpec& spec) {
  PairingResult out;
  out.test_fn = phi.name;
  double value = 0, oracle = 0;
  for (const auto& chart : atlas) {
    value += integrate_region(
                 chart,
                 [&](const Jet& j) {
                   return -(1.0 / 3.0) * j.value.dot(cofactor(j.grad) * phi.grad(j.point));
                 },
                 spec)
                 .value;
    oracle += integrate_region(
                  chart,
                  [&](const Jet& j) { return phi.value(j.point) * determinant(j.grad); },
                  spec)
                  .value;
  }
  if (atoms) oracle += kPi / 6.0 * (phi.value(point_P()) - phi.value(point_O()));
  out.value = value;
  out.oracle = oracle;
  out.deviation = value - oracle;
  return out;
}

double surface_pairing_oracle(const TestField& f, const QuadSpec& spec) {
  return integrate_sphere(
             bubble_center(), kBubbleRadius,
             [&](const Vec3& y, const Vec3& nu) {
               return (f.value(point_P(), y) - f.value(point_O(), y))
                   .dot(kBubbleNormalSign * nu);
             },
             spec)
      .value;
}

PairingResult surface_pairing(const std::vector<RegionChart>& atlas, const TestField& f,
                              bool atoms, const QuadSpec& spec) {
  PairingResult out;
  out.test_fn = f.name;
  double value = 0;
  for (const auto& chart : atlas) {
    value += integrate_region(
                 chart,
                 [&](const Jet& j) {
                   const Mat3 dxf = f.dx(j.point, j.value);
                   return dxf.cwiseProduct(cofactor(j.grad)).sum() +
                          f.div_y(j.point, j.value) * determinant(j.grad);
                 },
                 spec)
                 .value;
  }
  out.value = value;
  out.oracle = atoms ? surface_pairing_oracle(f, spec) : 0.0;
  out.deviation = value - out.oracle;
  return out;
}

namespace {
// C^2 bump profile in a squared ratio: (1 - t)^3 on [0, 1].
double bump(double t) {
  if (t >= 1.0) return 0.0;
  const double s = 1.0 - t;
  return s * s * s;
}
double bump_dt(double t) {
  if (t >= 1.0) return 0.0;
  const double s = 1.0 - t;
  return -3.0 * s * s;
}

TestFunction scaled_bump_function(const std::string& name,
                                  const std::function<double(const Vec3&)>& p,
                                  const std::function<Vec3(const Vec3&)>& dp,
                                  const Vec3& c, double R) {
  TestFunction tf;
  tf.name = name;
  tf.value = [p, c, R](const Vec3& x) {
    const double t = (x - c).squaredNorm() / (R * R);
    return p(x) * bump(t);
  };
  tf.grad = [p, dp, c, R](const Vec3& x) {
    const double t = (x - c).squaredNorm() / (R * R);
    return Vec3(dp(x) * bump(t) + p(x) * bump_dt(t) * 2.0 * (x - c) / (R * R));
  };
  double c1 = 0;
  for (long i = 0; i < 4000; ++i) {
    const Vec3 x = 6.0 * halton3(i) - Vec3(3, 3, 3);
    if (x.norm() > 3.0) continue;
    c1 = std::max(c1, std::abs(tf.value(x)) + tf.grad(x).norm());
  }
  tf.c1_norm = std::max(c1, 1e-12);
  return tf;
}
}  // namespace

std::vector<TestFunction> standard_test_functions() {
  std::vector<TestFunction> fns;
  fns.push_back(scaled_bump_function(
      "x3*bump", [](const Vec3& x) { return x.z(); },
      [](const Vec3&) { return Vec3(0, 0, 1); }, Vec3(0, 0, 0.5), 2.3));
  fns.push_back(scaled_bump_function(
      "bump_at_P", [](const Vec3&) { return 1.0; },
      [](const Vec3&) { return Vec3(Vec3::Zero()); }, point_P(), 0.8));
  fns.push_back(scaled_bump_function(
      "bump_at_O", [](const Vec3&) { return 1.0; },
      [](const Vec3&) { return Vec3(Vec3::Zero()); }, point_O(), 0.8));
  fns.push_back(scaled_bump_function(
      "wide_const", [](const Vec3&) { return 1.0; },
      [](const Vec3&) { return Vec3(Vec3::Zero()); }, Vec3(0, 0, 0.5), 2.45));
  fns.push_back(scaled_bump_function(
      "r2_x3*bump",
      [](const Vec3& x) { return x.x() * x.x() + x.y() * x.y() + 0.3 * x.z(); },
      [](const Vec3& x) { return Vec3(2 * x.x(), 2 * x.y(), 0.3); }, Vec3(0, 0, 0.5),
      2.3));
  return fns;
}

namespace {
// f(x, y) = w(x) n(y) with n radial about the bubble center.
TestField separable_field(const std::string& name,
                          const std::function<double(const Vec3&)>& w,
                          const std::function<Vec3(const Vec3&)>& dw, double width) {
  const Vec3 c = bubble_center();
  auto n = [c, width](const Vec3& y) -> Vec3 {
    const double rho = (y - c).norm();
    if (rho < 1e-12) return Vec3(Vec3::Zero());
    const double t = (rho - kBubbleRadius) / width;
    return Vec3(bump(t * t) * (y - c) / rho);
  };
  auto divn = [c, width](const Vec3& y) {
    const double rho = (y - c).norm();
    if (rho < 1e-12) return 0.0;
    const double t = (rho - kBubbleRadius) / width;
    const double db = bump_dt(t * t) * 2.0 * t / width;
    return db + 2.0 * bump(t * t) / rho;
  };
  TestField f;
  f.name = name;
  f.value = [w, n](const Vec3& x, const Vec3& y) { return Vec3(w(x) * n(y)); };
  f.dx = [dw, n](const Vec3& x, const Vec3& y) { return Mat3(n(y) * dw(x).transpose()); };
  f.div_y = [w, divn](const Vec3& x, const Vec3& y) { return w(x) * divn(y); };
  double sup = 0;
  for (long i = 0; i < 4000; ++i) {
    const Vec3 x = 6.0 * halton3(i) - Vec3(3, 3, 3);
    const Vec3 y = 2.0 * halton3(i + 9000) - Vec3(1, 1, 1);
    sup = std::max(sup, f.value(x, y).norm());
  }
  f.sup_norm = std::max(sup, 1e-12);
  return f;
}
}  // namespace

std::vector<TestField> standard_test_fields() {
  std::vector<TestField> fields;
  auto dipole_w = [](const Vec3& x) {
    const double t = (x - Vec3(0, 0, 0.5)).squaredNorm() / (1.4 * 1.4);
    return (2.0 * x.z() - 1.0) * bump(t);
  };
  auto dipole_dw = [](const Vec3& x) {
    const Vec3 c(0, 0, 0.5);
    const double t = (x - c).squaredNorm() / (1.4 * 1.4);
    return Vec3(Vec3(0, 0, 2.0) * bump(t) +
                (2.0 * x.z() - 1.0) * bump_dt(t) * 2.0 * (x - c) / (1.4 * 1.4));
  };
  fields.push_back(separable_field("dipole_normal", dipole_w, dipole_dw, 0.35));
  auto p_w = [](const Vec3& x) {
    return bump((x - point_P()).squaredNorm() / (0.7 * 0.7));
  };
  auto p_dw = [](const Vec3& x) {
    const double t = (x - point_P()).squaredNorm() / (0.7 * 0.7);
    return Vec3(bump_dt(t) * 2.0 * (x - point_P()) / (0.7 * 0.7));
  };
  fields.push_back(separable_field("window_at_P", p_w, p_dw, 0.3));
  fields.push_back(separable_field("narrow_band", dipole_w, dipole_dw, 0.18));
  {
    // x-independent equivariant field: zero pairing for closed-graph
    // deformations
    TestField f;
    f.name = "y_only";
    const Vec3 c(0, 0, 0.4);
    auto carrier = [](const Vec3& y) { return Vec3(0.3 * y.x(), 0.3 * y.y(), 1.0); };
    f.value = [c, carrier](const Vec3&, const Vec3& y) {
      return Vec3(bump((y - c).squaredNorm() / 1.2) * carrier(y));
    };
    f.dx = [](const Vec3&, const Vec3&) { return Mat3(Mat3::Zero()); };
    f.div_y = [c, carrier](const Vec3&, const Vec3& y) {
      return bump_dt((y - c).squaredNorm() / 1.2) * 2.0 / 1.2 * (y - c).dot(carrier(y)) +
             bump((y - c).squaredNorm() / 1.2) * 0.6;
    };
    f.sup_norm = 1.0;
    fields.push_back(f);
  }
  return fields;
}

double surface_energy_dictionary_sup(const std::vector<RegionChart>& atlas,
                                     const QuadSpec& spec) {
  double best = 0;
  for (double width : {0.5, 0.35, 0.25}) {
    for (double wr : {1.0, 1.6, 2.2}) {
      auto w = [wr](const Vec3& x) {
        const double t = (x - Vec3(0, 0, 0.5)).squaredNorm() / (wr * wr);
        return (2.0 * x.z() - 1.0) * bump(t);
      };
      auto dw = [wr](const Vec3& x) {
        const Vec3 c(0, 0, 0.5);
        const double t = (x - c).squaredNorm() / (wr * wr);
        return Vec3(Vec3(0, 0, 2.0) * bump(t) +
                    (2.0 * x.z() - 1.0) * bump_dt(t) * 2.0 * (x - c) / (wr * wr));
      };
      TestField f = separable_field("dict", w, dw, width);
      const PairingResult pr = surface_pairing(atlas, f, false, spec);
      best = std::max(best, std::abs(pr.value) / f.sup_norm);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Membership, Delta fields, singular mass, INV
// ---------------------------------------------------------------------------

ImageSampler::ImageSampler(const MapValueFn& map, const Vec3& center, double radius,
                           int grid) {
  std::vector<Vec2> samples;
  samples.reserve(static_cast<size_t>(grid) * grid);
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (int i = 0; i < grid; ++i) {
    const double t = kPi * (i + 0.5) / grid;
    for (int j = 0; j < grid; ++j) {
      const double rr = radius * std::sqrt((j + 0.5) / grid);
      const Vec3 u = map(center + rr * e_rho(0.0, t));
      const Vec2 q(std::hypot(u.x(), u.y()), u.z());
      samples.push_back(q);
      xlo = std::min(xlo, q.x());
      xhi = std::max(xhi, q.x());
      ylo = std::min(ylo, q.y());
      yhi = std::max(yhi, q.y());
    }
  }
  cell_ = std::max((xhi - xlo + 1e-9) / 512.0, (yhi - ylo + 1e-9) / 512.0);
  x0_ = xlo - 2 * cell_;
  y0_ = ylo - 2 * cell_;
  nx_ = static_cast<int>((xhi - x0_) / cell_) + 3;
  ny_ = static_cast<int>((yhi - y0_) / cell_) + 3;
  buckets_.assign(static_cast<size_t>(nx_) * ny_, {});
  for (const auto& q : samples) {
    const int ix = static_cast<int>((q.x() - x0_) / cell_);
    const int iy = static_cast<int>((q.y() - y0_) / cell_);
    if (ix >= 0 && iy >= 0 && ix < nx_ && iy < ny_)
      buckets_[static_cast<size_t>(iy) * nx_ + ix].push_back(q);
  }
}

double ImageSampler::nearest(const Vec2& q, double cap) const {
  const int ix = static_cast<int>((q.x() - x0_) / cell_);
  const int iy = static_cast<int>((q.y() - y0_) / cell_);
  const int max_ring = static_cast<int>(cap / cell_) + 2;
  double best = 1e300;
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (best < (ring - 1) * cell_) break;
    for (int dx = -ring; dx <= ring; ++dx)
      for (int dy = -ring; dy <= ring; ++dy) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jy < 0 || jx >= nx_ || jy >= ny_) continue;
        for (const auto& s : buckets_[static_cast<size_t>(jy) * nx_ + jx])
          best = std::min(best, (q - s).norm());
      }
  }
  return std::min(best, 2.0 * cap);
}

DeltaField delta_field(const MapValueFn& map, const Vec3& x, double radius, Vec2 window_s,
                       Vec2 window_z, double resolution, int membership_grid) {
  const ProfileCurve curve(map, x, radius, std::min(4e-3, resolution / 2.0));
  const ImageSampler sampler(map, x, radius, membership_grid);
  const double tau = 3.0 * resolution;
  // membership cannot be trusted closer to the boundary image than tau
  const double guard = std::max(curve.resolution_bound(), 1.5 * tau);
  DeltaField field;
  field.s0 = window_s.x();
  field.z0 = window_z.x();
  field.ds = resolution;
  field.ns = static_cast<int>((window_s.y() - window_s.x()) / resolution) + 1;
  field.nz = static_cast<int>((window_z.y() - window_z.x()) / resolution) + 1;
  field.value.assign(static_cast<size_t>(field.ns) * field.nz, DeltaField::kInvalid);
  for (int j = 0; j < field.nz; ++j)
    for (int i = 0; i < field.ns; ++i) {
      const Vec2 q = field.point(i, j);
      if (q.x() < 0) continue;
      if (curve.distance(q, guard) < guard) continue;  // probe too close
      const double nn = sampler.nearest(q, 2.0 * tau);
      if (std::abs(nn - tau) < 0.6 * tau) continue;  // membership ambiguous
      const int member = nn <= tau ? 1 : 0;
      field.value[static_cast<size_t>(j) * field.ns + i] = curve.winding(q) - member;
    }
  return field;
}

std::vector<Vec2> extract_level_loop(const DeltaField& field, int level) {
  // Indicator with invalid cells resolved by nearby valid votes, one 3x3 box
  // smoothing pass, then a marching-squares 0.5-contour.
  const int ns = field.ns, nz = field.nz;
  std::vector<double> f(static_cast<size_t>(ns) * nz, 0.0);
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < ns; ++i) {
      const int v = field.at(i, j);
      if (v == DeltaField::kInvalid) {
        int votes = 0, hits = 0;
        for (int d = 1; d <= 3 && hits == 0; ++d)
          for (int dj = -d; dj <= d; ++dj)
            for (int di = -d; di <= d; ++di) {
              const int ii = i + di, jj = j + dj;
              if (ii < 0 || jj < 0 || ii >= ns || jj >= nz) continue;
              const int w = field.at(ii, jj);
              if (w == DeltaField::kInvalid) continue;
              ++hits;
              votes += (w == level) ? 1 : 0;
            }
        f[static_cast<size_t>(j) * ns + i] = hits ? double(votes) / hits : 0.0;
      } else {
        f[static_cast<size_t>(j) * ns + i] = (v == level) ? 1.0 : 0.0;
      }
    }
  std::vector<double> sm = f;
  for (int j = 1; j + 1 < nz; ++j)
    for (int i = 1; i + 1 < ns; ++i) {
      double acc = 0;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          acc += f[static_cast<size_t>(j + dj) * ns + i + di];
      sm[static_cast<size_t>(j) * ns + i] = acc / 9.0;
    }
  auto val = [&](int i, int j) { return sm[static_cast<size_t>(j) * ns + i]; };
  auto interp = [&](int i0, int j0, int i1, int j1) {
    const double v0 = val(i0, j0), v1 = val(i1, j1);
    const double t = (0.5 - v0) / (v1 - v0);
    return Vec2(field.s0 + (i0 + t * (i1 - i0)) * field.ds,
                field.z0 + (j0 + t * (j1 - j0)) * field.ds);
  };
  std::vector<std::pair<Vec2, Vec2>> segs;
  for (int j = 0; j + 1 < nz; ++j)
    for (int i = 0; i + 1 < ns; ++i) {
      const bool b0 = val(i, j) >= 0.5, b1 = val(i + 1, j) >= 0.5;
      const bool b2 = val(i + 1, j + 1) >= 0.5, b3 = val(i, j + 1) >= 0.5;
      const int code = (b0 ? 1 : 0) | (b1 ? 2 : 0) | (b2 ? 4 : 0) | (b3 ? 8 : 0);
      if (code == 0 || code == 15) continue;
      std::vector<Vec2> cross;
      if (b0 != b1) cross.push_back(interp(i, j, i + 1, j));
      if (b1 != b2) cross.push_back(interp(i + 1, j, i + 1, j + 1));
      if (b3 != b2) cross.push_back(interp(i, j + 1, i + 1, j + 1));
      if (b0 != b3) cross.push_back(interp(i, j, i, j + 1));
      if (cross.size() == 2) {
        segs.emplace_back(cross[0], cross[1]);
      } else if (cross.size() == 4) {  // saddle: split consistently
        segs.emplace_back(cross[0], cross[1]);
        segs.emplace_back(cross[2], cross[3]);
      }
    }
  if (segs.empty()) return {};
  auto key = [](const Vec2& p) {
    return std::make_pair(llround(p.x() * 1e7), llround(p.y() * 1e7));
  };
  std::map<std::pair<long long, long long>, std::vector<int>> ends;
  for (size_t k = 0; k < segs.size(); ++k) {
    ends[key(segs[k].first)].push_back(static_cast<int>(k));
    ends[key(segs[k].second)].push_back(static_cast<int>(k));
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Vec2> best_loop;
  double best_len = -1;
  for (size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    std::vector<Vec2> loop = {segs[start].first, segs[start].second};
    used[start] = true;
    // walk forward from the tail, then reverse and walk the other end
    for (int pass = 0; pass < 2; ++pass) {
      while (true) {
        const Vec2 tail = loop.back();
        bool extended = false;
        for (int k : ends[key(tail)]) {
          if (used[k]) continue;
          used[k] = true;
          loop.push_back((key(segs[k].first) == key(tail)) ? segs[k].second
                                                           : segs[k].first);
          extended = true;
          break;
        }
        if (!extended) break;
      }
      std::reverse(loop.begin(), loop.end());
    }
    double len = 0;
    for (size_t i = 0; i + 1 < loop.size(); ++i) len += (loop[i + 1] - loop[i]).norm();
    if (len > best_len) {
      best_len = len;
      best_loop = loop;
    }
  }
  if (!best_loop.empty() && (best_loop.front() - best_loop.back()).norm() > 1e-9)
    best_loop.push_back(best_loop.front());
  return best_loop;
}

SingularMassResult singular_mass(const MapValueFn& map, const std::vector<double>& radii,
                                 double resolution) {
  SingularMassResult out;
  for (double r : radii) {
    DeltaField field =
        delta_field(map, point_P(), r, Vec2(0.0, 0.8), Vec2(-0.2, 1.2), resolution, 1000);
    const auto loop = extract_level_loop(field, 1);
    out.radii.push_back(r);
    out.areas.push_back(revolve_arc_area(loop));
  }
  const size_t n = out.radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += out.radii[i];
    sy += out.areas[i];
    sxx += out.radii[i] * out.radii[i];
    sxy += out.radii[i] * out.areas[i];
  }
  const double denom = n * sxx - sx * sx;
  out.extrapolated = (denom != 0) ? (sy * sxx - sx * sxy) / denom : sy / n;
  out.mass = (point_P() - point_O()).norm() * out.extrapolated;
  return out;
}

InvReport inv_check(const MapValueFn& map, const Vec3& center, double radius,
                    long n_samples, unsigned seed) {
  const ProfileCurve curve(map, center, radius);
  InvReport report;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto sample_shell = [&](double r_lo, double r_hi) {
    while (true) {
      const double rho = std::cbrt(r_lo * r_lo * r_lo +
                                   (r_hi * r_hi * r_hi - r_lo * r_lo * r_lo) * unif(rng));
      const double cphi = 1.0 - 2.0 * unif(rng);
      const double theta = kTwoPi * unif(rng);
      const Vec3 p = center + rho * e_rho(theta, std::acos(cphi));
      if (p.norm() <= kDomainRadius) return p;
    }
  };
  long interior = 0, exterior = 0;
  while (interior < n_samples || exterior < n_samples) {
    const bool want_interior = interior < n_samples;
    const Vec3 p = want_interior ? sample_shell(0.0, radius)
                                 : sample_shell(radius, std::min(radius + 0.5, 3.0));
    const Vec3 u = map(p);
    const Vec2 q(std::hypot(u.x(), u.y()), u.z());
    if (curve.distance(q) < curve.resolution_bound()) continue;  // a.e. sample: redraw
    const int deg = curve.winding(q);
    if (want_interior) {
      ++interior;
      if (deg == 0) ++report.interior_violations;
    } else {
      ++exterior;
      if (deg != 0) ++report.exterior_violations;
    }
  }
  report.interior_samples = interior;
  report.exterior_samples = exterior;
  return report;
}

}  // namespace dlab
