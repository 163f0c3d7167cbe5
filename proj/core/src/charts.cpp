#include "dlab/charts.hpp"

#include <cmath>

namespace dlab {

namespace {
double rho_max_upper(double phi) {
  // |P + rho e_rho| = 3
  const double c = std::cos(phi);
  return -c + std::sqrt(c * c + 8.0);
}
}  // namespace

std::vector<RegionChart> limit_atlas(const LimitMap& map) {
  std::vector<RegionChart> atlas;
  const LimitMap* m = &map;

  RegionChart a;
  a.region = RegionId::A;
  a.name = "a";
  a.lo0 = 0.0; a.hi0 = 1.0; a.lo1 = 0.5 * kPi; a.hi1 = kPi;
  a.point = [](double rho, double phi) { return Vec3(rho * std::sin(phi), 0.0, rho * std::cos(phi)); };
  a.weight = [](double rho, double phi) { return kTwoPi * rho * rho * std::sin(phi); };
  a.jet = [m, a_point = a.point](double rho, double phi) { return m->eval(a_point(rho, phi)); };
  a.grading = {{0, false, 1e-8}, {0, true, 1e-8}, {1, false, 1e-8}};
  atlas.push_back(a);

  RegionChart b;
  b.region = RegionId::B;
  b.name = "b";
  b.lo0 = 1.0; b.hi0 = 3.0; b.lo1 = 0.5 * kPi; b.hi1 = kPi;
  b.point = a.point;
  b.weight = a.weight;
  b.jet = [m, p = b.point](double rho, double phi) { return m->eval(p(rho, phi)); };
  b.grading = {{0, false, 1e-8}};
  atlas.push_back(b);

  RegionChart dc;  // slab core: r in [0, 1]
  dc.region = RegionId::D;
  dc.name = "d_core";
  dc.lo0 = 0.0; dc.hi0 = 1.0; dc.lo1 = 0.0; dc.hi1 = 1.0;
  dc.point = [](double r, double x3) { return Vec3(r, 0.0, x3); };
  dc.weight = [](double r, double) { return kTwoPi * r; };
  dc.jet = [m](double r, double x3) { return m->eval(Vec3(r, 0.0, x3)); };
  dc.grading = {{0, false, 1e-6}, {0, true, 1e-8}, {1, false, 1e-8}, {1, true, 1e-8}};
  atlas.push_back(dc);

  RegionChart ds;  // slab strip: r = 1 + t (rmax - 1)
  ds.region = RegionId::D;
  ds.name = "d_strip";
  ds.lo0 = 0.0; ds.hi0 = 1.0; ds.lo1 = 0.0; ds.hi1 = 1.0;
  ds.point = [](double t, double x3) {
    const double rmax = std::sqrt(9.0 - x3 * x3);
    return Vec3(1.0 + t * (rmax - 1.0), 0.0, x3);
  };
  ds.weight = [](double t, double x3) {
    const double rmax = std::sqrt(9.0 - x3 * x3);
    return kTwoPi * (1.0 + t * (rmax - 1.0)) * (rmax - 1.0);
  };
  ds.jet = [m, p = ds.point](double t, double x3) { return m->eval(p(t, x3)); };
  ds.grading = {{0, false, 1e-8}, {1, false, 1e-8}, {1, true, 1e-8}};
  atlas.push_back(ds);

  RegionChart e;
  e.region = RegionId::E;
  e.name = "e";
  e.lo0 = 0.0; e.hi0 = 1.0; e.lo1 = 0.0; e.hi1 = 0.5 * kPi;
  e.point = [](double rho, double phi) {
    return Vec3(rho * std::sin(phi), 0.0, 1.0 + rho * std::cos(phi));
  };
  e.weight = a.weight;
  e.jet = [m, p = e.point](double rho, double phi) { return m->eval(p(rho, phi)); };
  e.grading = {{0, false, 1e-8}, {0, true, 1e-8}, {1, true, 1e-8}};
  atlas.push_back(e);

  RegionChart f;
  f.region = RegionId::F;
  f.name = "f";
  f.lo0 = 0.0; f.hi0 = 1.0; f.lo1 = 0.0; f.hi1 = 0.5 * kPi;
  f.point = [](double t, double phi) {
    const double rho = 1.0 + t * (rho_max_upper(phi) - 1.0);
    return Vec3(rho * std::sin(phi), 0.0, 1.0 + rho * std::cos(phi));
  };
  f.weight = [](double t, double phi) {
    const double span = rho_max_upper(phi) - 1.0;
    const double rho = 1.0 + t * span;
    return kTwoPi * rho * rho * std::sin(phi) * span;
  };
  f.jet = [m, p = f.point](double t, double phi) { return m->eval(p(t, phi)); };
  f.grading = {{1, true, 1e-8}};
  atlas.push_back(f);

  return atlas;
}

std::vector<RegionChart> recovery_atlas(const RecoveryMap& map) {
  std::vector<RegionChart> atlas;
  const RecoveryMap* m = &map;
  const double eps = map.params().eps;
  const double knee = std::pow(eps, 2.0 * map.params().gamma);

  RegionChart c;
  c.region = RegionId::CEps;
  c.name = "c_eps";
  c.lo0 = 0.0; c.hi0 = eps; c.lo1 = 0.0; c.hi1 = 1.0;
  c.point = [](double r, double x3) { return Vec3(r, 0.0, x3); };
  c.weight = [](double r, double) { return kTwoPi * r; };
  c.jet = [m](double r, double x3) { return m->eval_tube(r, x3); };
  c.grading = {{0, false, std::min(1e-6, 1e-3 * eps * eps)}, {0, true, 1e-3 * eps}};
  atlas.push_back(c);

  RegionChart ap;
  ap.region = RegionId::APrimeEps;
  ap.name = "a_prime_eps";
  ap.lo0 = 0.0; ap.hi0 = 1.0; ap.lo1 = 0.0; ap.hi1 = 0.5 * kPi;
  ap.point = [m](double s, double phi) { return m->cap_lower_point(s, phi); };
  ap.weight = [m](double s, double phi) { return m->cap_weight(s, phi); };
  ap.jet = [m](double s, double phi) { return m->eval_cap_lower(s, phi); };
  ap.grading = {{0, false, 1e-4}, {1, true, 1e-6}, {1, false, 1e-4}};
  atlas.push_back(ap);

  RegionChart as;
  as.region = RegionId::AEps;
  as.name = "a_eps";
  as.lo0 = eps; as.hi0 = 1.0; as.lo1 = 0.0; as.hi1 = 0.5 * kPi;
  as.point = [](double rho, double psi) {
    const double phi = kPi - psi;
    return Vec3(rho * std::sin(phi), 0.0, rho * std::cos(phi));
  };
  as.weight = [](double rho, double psi) { return kTwoPi * rho * rho * std::sin(psi); };
  as.jet = [m](double rho, double psi) { return m->eval_shell_lower(rho, psi); };
  as.grading = {{0, false, 1e-3 * eps}, {0, true, 1e-8}, {1, true, 1e-8}, {1, false, 1e-8}};
  atlas.push_back(as);

  RegionChart b;
  b.region = RegionId::BEps;
  b.name = "b_eps";
  b.lo0 = 1.0; b.hi0 = 3.0; b.lo1 = 0.5 * kPi; b.hi1 = kPi;
  b.point = [](double rho, double phi) {
    return Vec3(rho * std::sin(phi), 0.0, rho * std::cos(phi));
  };
  b.weight = [](double rho, double phi) { return kTwoPi * rho * rho * std::sin(phi); };
  b.jet = [m](double rho, double phi) { return m->eval_outer_lower(rho, phi); };
  b.grading = {{0, false, 1e-4}};
  atlas.push_back(b);

  auto make_slab = [&](const char* name, double rlo, double rhi, bool scaled) {
    RegionChart d;
    d.region = RegionId::DEps;
    d.name = name;
    d.lo1 = 0.0; d.hi1 = 1.0;
    if (!scaled) {
      d.lo0 = rlo; d.hi0 = rhi;
      d.point = [](double r, double x3) { return Vec3(r, 0.0, x3); };
      d.weight = [](double r, double) { return kTwoPi * r; };
      d.jet = [m](double r, double x3) { return m->eval_slab(r, x3); };
    } else {
      d.lo0 = 0.0; d.hi0 = 1.0;
      d.point = [](double t, double x3) {
        const double rmax = std::sqrt(9.0 - x3 * x3);
        return Vec3(1.0 + t * (rmax - 1.0), 0.0, x3);
      };
      d.weight = [](double t, double x3) {
        const double rmax = std::sqrt(9.0 - x3 * x3);
        return kTwoPi * (1.0 + t * (rmax - 1.0)) * (rmax - 1.0);
      };
      d.jet = [m, p = d.point](double t, double x3) {
        const Vec3 q = p(t, x3);
        return m->eval_slab(std::hypot(q.x(), q.y()), q.z());
      };
    }
    d.grading = {{1, false, 1e-8}, {1, true, 1e-8}};
    return d;
  };
  atlas.push_back(make_slab("d_eps_inner", eps, knee, false));
  atlas.push_back(make_slab("d_eps_core", knee, 1.0, false));
  atlas.push_back(make_slab("d_eps_strip", 1.0, 0.0, true));

  RegionChart ep;
  ep.region = RegionId::EPrimeEps;
  ep.name = "e_prime_eps";
  ep.lo0 = 0.0; ep.hi0 = 1.0; ep.lo1 = 0.0; ep.hi1 = 0.5 * kPi;
  ep.point = [m](double s, double phi) { return m->cap_upper_point(s, phi); };
  ep.weight = [m](double s, double phi) { return m->cap_weight(s, phi); };
  ep.jet = [m](double s, double phi) { return m->eval_cap_upper(s, phi); };
  ep.grading = {{0, false, 1e-4}, {1, true, 1e-6}, {1, false, 1e-4}};
  atlas.push_back(ep);

  RegionChart es;
  es.region = RegionId::EEps;
  es.name = "e_eps";
  es.lo0 = eps; es.hi0 = 1.0; es.lo1 = 0.0; es.hi1 = 0.5 * kPi;
  es.point = [](double rho, double phi) {
    return Vec3(rho * std::sin(phi), 0.0, 1.0 + rho * std::cos(phi));
  };
  es.weight = [](double rho, double phi) { return kTwoPi * rho * rho * std::sin(phi); };
  es.jet = [m](double rho, double phi) { return m->eval_shell_upper(rho, phi); };
  es.grading = {{0, false, 1e-3 * eps}, {1, true, 1e-8}};
  atlas.push_back(es);

  RegionChart f;
  f.region = RegionId::FEps;
  f.name = "f_eps";
  f.lo0 = 0.0; f.hi0 = 1.0; f.lo1 = 0.0; f.hi1 = 0.5 * kPi;
  f.point = [](double t, double phi) {
    const double rho = 1.0 + t * (rho_max_upper(phi) - 1.0);
    return Vec3(rho * std::sin(phi), 0.0, 1.0 + rho * std::cos(phi));
  };
  f.weight = [](double t, double phi) {
    const double span = rho_max_upper(phi) - 1.0;
    const double rho = 1.0 + t * span;
    return kTwoPi * rho * rho * std::sin(phi) * span;
  };
  f.jet = [m, p = f.point](double t, double phi) {
    const Vec3 q = p(t, phi);
    const SphericalPoint s = cart_to_sph(q, point_P());
    return m->eval_outer_upper(s.rho, s.phi);
  };
  f.grading = {{1, true, 1e-8}};
  atlas.push_back(f);

  return atlas;
}

const RegionChart& chart_for(const std::vector<RegionChart>& atlas, RegionId id) {
  for (const auto& c : atlas)
    if (c.region == id) return c;
  throw OutOfDomain("chart_for: region not in atlas");
}

}  // namespace dlab
