#include "dlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace dlab {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  // Newton on Legendre polynomials, Chebyshev initial guesses.
  std::vector<double> x(order), w(order);
  for (int i = 0; i < order; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (order + 0.5));
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = order * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = xi;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = order * (xi * p1 - p0) / (xi * xi - 1.0);
    x[order - 1 - i] = xi;
    w[order - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  return cache.emplace(order, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace {

double neumaier_sum(const std::vector<double>& v) {
  double sum = 0.0, comp = 0.0;
  for (double x : v) {
    const double t = sum + x;
    comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double gl_1d(const Fn1& f, double a, double b, int order) {
  const auto& [x, w] = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += w[i] * f(mid + half * x[i]);
  return s * half;
}

double gl_2d(const Fn2& f, double a0, double b0, double a1, double b1, int order) {
  const auto& [x, w] = gauss_legendre(order);
  const double m0 = 0.5 * (a0 + b0), h0 = 0.5 * (b0 - a0);
  const double m1 = 0.5 * (a1 + b1), h1 = 0.5 * (b1 - a1);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double row = 0.0;
    for (size_t j = 0; j < x.size(); ++j)
      row += w[j] * f(m0 + h0 * x[i], m1 + h1 * x[j]);
    s += w[i] * row;
  }
  return s * h0 * h1;
}

// Dyadic partition of [lo, hi] refined toward the requested edges.
std::vector<double> graded_breaks(double lo, double hi, int axis,
                                  const std::vector<GradedEdge>& grading) {
  std::vector<double> breaks = {lo, hi};
  const double span = hi - lo;
  for (const auto& g : grading) {
    if (g.axis != axis) continue;
    const double min_cell = std::max(g.min_cell, span * 1e-15);
    double step = 0.5 * span;
    while (step > min_cell) {
      breaks.push_back(g.at_upper ? hi - step : lo + step);
      step *= 0.5;
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

struct Cell1 {
  double a, b, coarse, fine, err;
  long seq;
};
struct Cell2 {
  double a0, b0, a1, b1, coarse, fine, err;
  long seq;
};

template <typename Cell>
struct WorstFirst {
  bool operator()(const Cell& x, const Cell& y) const {
    if (x.err != y.err) return x.err < y.err;
    return x.seq > y.seq;  // deterministic tie-break
  }
};

}  // namespace

QuadResult integrate_1d(const Fn1& f, double a, double b, const QuadSpec& spec) {
  long seq = 0;
  auto make = [&](double lo, double hi) {
    Cell1 c{lo, hi, 0, 0, 0, seq++};
    c.coarse = gl_1d(f, lo, hi, spec.order);
    const double mid = 0.5 * (lo + hi);
    c.fine = gl_1d(f, lo, mid, spec.order) + gl_1d(f, mid, hi, spec.order);
    c.err = std::abs(c.fine - c.coarse);
    return c;
  };
  std::priority_queue<Cell1, std::vector<Cell1>, WorstFirst<Cell1>> heap;
  double run_value = 0, run_err = 0;  // running estimates for the stop test
  auto push = [&](const Cell1& c) {
    run_value += c.fine;
    run_err += c.err;
    heap.push(c);
  };
  const auto breaks = graded_breaks(a, b, 0, spec.grading);
  for (size_t i = 0; i + 1 < breaks.size(); ++i) push(make(breaks[i], breaks[i + 1]));
  long cells = static_cast<long>(heap.size());
  auto final_totals = [&] {
    // deterministic compensated re-summation in insertion order
    std::vector<Cell1> v;
    auto cp = heap;
    while (!cp.empty()) {
      v.push_back(cp.top());
      cp.pop();
    }
    std::sort(v.begin(), v.end(), [](const Cell1& x, const Cell1& y) { return x.seq < y.seq; });
    std::vector<double> vals, errs;
    for (auto& c : v) {
      vals.push_back(c.fine);
      errs.push_back(c.err);
    }
    return std::make_pair(neumaier_sum(vals), neumaier_sum(errs));
  };
  while (true) {
    if (run_err <= std::max(spec.atol, spec.rtol * std::abs(run_value))) {
      auto [value, err] = final_totals();
      return {value, err, cells};
    }
    if (cells >= spec.max_cells) {
      auto [value, err] = final_totals();
      throw BudgetExceeded("integrate_1d: cell budget exhausted", value, err, cells);
    }
    Cell1 worst = heap.top();
    heap.pop();
    run_value -= worst.fine;
    run_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    push(make(worst.a, mid));
    push(make(mid, worst.b));
    ++cells;
  }
}

QuadResult integrate_2d(const Fn2& f, double a0, double b0, double a1, double b1,
                        const QuadSpec& spec) {
  long seq = 0;
  auto make = [&](double lo0, double hi0, double lo1, double hi1) {
    Cell2 c{lo0, hi0, lo1, hi1, 0, 0, 0, seq++};
    c.coarse = gl_2d(f, lo0, hi0, lo1, hi1, spec.order);
    const double m0 = 0.5 * (lo0 + hi0), m1 = 0.5 * (lo1 + hi1);
    c.fine = gl_2d(f, lo0, m0, lo1, m1, spec.order) + gl_2d(f, m0, hi0, lo1, m1, spec.order) +
             gl_2d(f, lo0, m0, m1, hi1, spec.order) + gl_2d(f, m0, hi0, m1, hi1, spec.order);
    c.err = std::abs(c.fine - c.coarse);
    return c;
  };
  std::priority_queue<Cell2, std::vector<Cell2>, WorstFirst<Cell2>> heap;
  double run_value = 0, run_err = 0;
  auto push = [&](const Cell2& c) {
    run_value += c.fine;
    run_err += c.err;
    heap.push(c);
  };
  auto bx = graded_breaks(a0, b0, 0, spec.grading);
  auto by = graded_breaks(a1, b1, 1, spec.grading);
  for (size_t i = 0; i + 1 < bx.size(); ++i)
    for (size_t j = 0; j + 1 < by.size(); ++j)
      push(make(bx[i], bx[i + 1], by[j], by[j + 1]));
  long cells = static_cast<long>(heap.size());
  auto final_totals = [&] {
    std::vector<Cell2> v;
    auto cp = heap;
    while (!cp.empty()) {
      v.push_back(cp.top());
      cp.pop();
    }
    std::sort(v.begin(), v.end(), [](const Cell2& x, const Cell2& y) { return x.seq < y.seq; });
    std::vector<double> vals, errs;
    for (auto& c : v) {
      vals.push_back(c.fine);
      errs.push_back(c.err);
    }
    return std::make_pair(neumaier_sum(vals), neumaier_sum(errs));
  };
  while (true) {
    if (run_err <= std::max(spec.atol, spec.rtol * std::abs(run_value))) {
      auto [value, err] = final_totals();
      return {value, err, cells};
    }
    if (cells >= spec.max_cells) {
      auto [value, err] = final_totals();
      throw BudgetExceeded("integrate_2d: cell budget exhausted", value, err, cells);
    }
    Cell2 w = heap.top();
    heap.pop();
    run_value -= w.fine;
    run_err -= w.err;
    const double m0 = 0.5 * (w.a0 + w.b0), m1 = 0.5 * (w.a1 + w.b1);
    push(make(w.a0, m0, w.a1, m1));
    push(make(m0, w.b0, w.a1, m1));
    push(make(w.a0, m0, m1, w.b1));
    push(make(m0, w.b0, m1, w.b1));
    cells += 3;
  }
}

QuadResult integrate_region(const RegionChart& chart,
                            const std::function<double(const Jet&)>& density,
                            const QuadSpec& spec) {
  if (!chart.jet) throw OutOfDomain("integrate_region: chart has no jet evaluator");
  QuadSpec s = spec;
  s.grading.insert(s.grading.end(), chart.grading.begin(), chart.grading.end());
  auto f = [&](double c0, double c1) {
    return density(chart.jet(c0, c1)) * chart.weight(c0, c1);
  };
  return integrate_2d(f, chart.lo0, chart.hi0, chart.lo1, chart.hi1, s);
}

QuadResult integrate_region_with_map(const RegionChart& chart,
                                     const std::function<Jet(const Vec3&)>& map,
                                     const std::function<double(const Jet&)>& density,
                                     const QuadSpec& spec) {
  QuadSpec s = spec;
  s.grading.insert(s.grading.end(), chart.grading.begin(), chart.grading.end());
  auto f = [&](double c0, double c1) {
    return density(map(chart.point(c0, c1))) * chart.weight(c0, c1);
  };
  return integrate_2d(f, chart.lo0, chart.hi0, chart.lo1, chart.hi1, s);
}

QuadResult integrate_sphere(const Vec3& center, double radius,
                            const std::function<double(const Vec3&, const Vec3&)>& density,
                            const QuadSpec& spec, int theta_samples) {
  auto ring = [&](double phi) {
    double s = 0.0;
    for (int k = 0; k < theta_samples; ++k) {
      const double theta = kTwoPi * k / theta_samples;
      const Vec3 nu = e_rho(theta, phi);
      s += density(center + radius * nu, nu);
    }
    return s / theta_samples * kTwoPi * radius * radius * std::sin(phi);
  };
  return integrate_1d(ring, 0.0, kPi, spec);
}

double revolve_arc_area(const std::vector<Vec2>& polyline) {
  double area = 0.0;
  for (size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec2 a = polyline[i], b = polyline[i + 1];
    area += kPi * (a.x() + b.x()) * (b - a).norm();
  }
  return area;
}

}  // namespace dlab
