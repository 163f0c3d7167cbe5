#include "dlab/energy.hpp"

#include <cmath>

namespace dlab {

HFunction power_H(double p, double q) {
  return {[p, q](double t) { return std::pow(t, p) + std::pow(t, -q); },
          "t^" + std::to_string(p) + "+t^-" + std::to_string(q)};
}

HFunction default_H() {
  HFunction h = power_H(1.25, 0.25);
  h.name = "t^(5/4)+t^(-1/4)";
  return h;
}

HValidation validate_H(const HFunction& h) {
  HValidation v;
  // Convexity on a log grid; scale-relative slack.
  v.convex = true;
  const int n = 241;
  for (int i = 1; i + 1 < n; ++i) {
    const double t0 = std::pow(10.0, -6.0 + 12.0 * (i - 1) / (n - 1));
    const double t1 = std::pow(10.0, -6.0 + 12.0 * i / (n - 1));
    const double t2 = std::pow(10.0, -6.0 + 12.0 * (i + 1) / (n - 1));
    // chord test: H(t1) must not exceed the chord through (t0, t2)
    const double lam = (t1 - t0) / (t2 - t0);
    const double chord = (1 - lam) * h.value(t0) + lam * h.value(t2);
    const double scale = 1.0 + std::abs(chord);
    if (h.value(t1) > chord + 1e-9 * scale) v.convex = false;
  }
  v.superlinear = h.value(1e12) / 1e12 > 10.0 * h.value(1e6) / 1e6 &&
                  h.value(1e12) / 1e12 > 1.0;
  v.blows_up_at_zero = h.value(1e-12) > 10.0 * h.value(1e-6) && h.value(1e-12) > 1e2;

  QuadSpec spec;
  spec.rtol = 1e-9;
  spec.atol = 1e-12;
  // Cauchy screen on dyadic-decade partial integrals: increments must decay
  // geometrically (ratio bounded away from 1), the signature of convergence.
  auto geometric = [&](auto integrand, double from, bool towards_zero) {
    double prev = -1.0, worst_ratio = 0.0;
    double edge = from;
    for (int k = 0; k < 10; ++k) {
      const double next = towards_zero ? edge / 10.0 : edge * 10.0;
      const double inc = integrate_1d(integrand, std::min(edge, next),
                                      std::max(edge, next), spec)
                             .value;
      if (prev >= 0 && prev > 0) worst_ratio = std::max(worst_ratio, inc / prev);
      prev = inc;
      edge = next;
    }
    return worst_ratio < 0.95;
  };
  v.tail_integrable =
      geometric([&](double s) { return h.value(s) * std::pow(s, -2.5); }, 1.0, false);
  v.cube_integrable = geometric([&](double s) { return h.value(s * s * s); }, 1.0, true);
  v.square_integrable = geometric([&](double s) { return h.value(s * s); }, 1.0, true);
  return v;
}

QuadResult dirichlet_energy(const RegionChart& chart, const QuadSpec& spec) {
  return integrate_region(chart, [](const Jet& j) { return dirichlet_density(j.grad); }, spec);
}

QuadResult h_energy(const RegionChart& chart, const HFunction& h, const QuadSpec& spec) {
  return integrate_region(
      chart, [&h](const Jet& j) { return h.value(determinant(j.grad)); }, spec);
}

CRegionParts c_region_parts(const RecoveryMap& map, const QuadSpec& spec) {
  const Blocks& B = map.blocks();
  const double eps = map.params().eps;
  const double m = 2.0 * map.params().eps_gamma();
  struct Terms {
    double in_plane, transverse, vertical;
  };
  auto terms = [&](double r, double x3) -> Terms {
    const double fr = B.f(r), fp = B.f_prime(r);
    const double a = std::cos(fr) + m;
    const double W = B.W(r), Wp = B.W_prime(r);
    const double u = std::cbrt(a * a * a + 3.0 * x3 * W);
    const double dur = (-a * a * std::sin(fr) * fp + x3 * Wp) / (u * u);
    const double dux = W / (u * u);
    const double sv = u * std::sin(fr);
    return {r * (dur * dur + u * u * fp * fp), sv * sv / std::max(r, 1e-300),
            r * dux * dux};
  };
  QuadSpec s = spec;
  s.grading = {{0, false, std::min(1e-6, 1e-3 * eps * eps)}, {0, true, 1e-3 * eps}};
  CRegionParts out;
  out.in_plane = integrate_2d([&](double r, double x3) { return terms(r, x3).in_plane; },
                              0.0, eps, 0.0, 1.0, s);
  out.transverse = integrate_2d(
      [&](double r, double x3) { return terms(r, x3).transverse; }, 0.0, eps, 0.0, 1.0, s);
  out.vertical = integrate_2d([&](double r, double x3) { return terms(r, x3).vertical; },
                              0.0, eps, 0.0, 1.0, s);
  return out;
}

std::vector<const EnergyRow*> EnergyTable::for_eps(double eps) const {
  std::vector<const EnergyRow*> out;
  for (const auto& r : rows)
    if (r.eps == eps) out.push_back(&r);
  return out;
}

namespace {
// A row whose budget runs out keeps the partial value and its honest error.
QuadResult tolerate_budget(const std::function<QuadResult()>& f) {
  try {
    return f();
  } catch (const BudgetExceeded& e) {
    return {e.partial_value, e.error_estimate, e.cells_used};
  }
}
}  // namespace

EnergyTable energy_gap_table(const std::vector<double>& eps_list, double gamma,
                             const LimitMap& limit, const HFunction& h,
                             const QuadSpec& spec) {
  EnergyTable table;
  for (double eps : eps_list) {
    RecoveryMap rec(RecoveryParams(eps, gamma), &limit);
    const auto atlas = recovery_atlas(rec);
    EnergyRow total;
    total.eps = eps;
    total.gamma = gamma;
    total.region = "total";
    auto limit_jet = [&](const Vec3& p) { return limit.eval(p); };
    for (const auto& chart : atlas) {
      EnergyRow row;
      row.eps = eps;
      row.gamma = gamma;
      row.region = chart.name;
      const QuadResult dir = tolerate_budget([&] { return dirichlet_energy(chart, spec); });
      const QuadResult hen = tolerate_budget([&] { return h_energy(chart, h, spec); });
      const QuadResult ldir = tolerate_budget([&] {
        return integrate_region_with_map(
            chart, limit_jet, [](const Jet& j) { return dirichlet_density(j.grad); },
            spec);
      });
      const QuadResult lhen = tolerate_budget([&] {
        return integrate_region_with_map(
            chart, limit_jet,
            [&h](const Jet& j) { return h.value(determinant(j.grad)); }, spec);
      });
      row.dirichlet = dir.value;
      row.dirichlet_err = dir.error_estimate;
      row.h_energy = hen.value;
      row.h_err = hen.error_estimate;
      row.limit_dirichlet = ldir.value;
      row.limit_h = lhen.value;
      row.expected = ldir.value + (chart.region == RegionId::CEps ? kTwoPi : 0.0);
      row.deviation = row.dirichlet - row.expected;
      total.dirichlet += row.dirichlet;
      total.dirichlet_err += row.dirichlet_err;
      total.h_energy += row.h_energy;
      total.h_err += row.h_err;
      total.limit_dirichlet += row.limit_dirichlet;
      total.limit_h += row.limit_h;
      table.rows.push_back(row);
    }
    total.expected = total.limit_dirichlet + kTwoPi;
    total.deviation = total.dirichlet - total.expected;
    table.rows.push_back(total);
  }
  return table;
}

}  // namespace dlab
