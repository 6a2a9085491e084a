#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace pcfgn::detail {

struct NelderMeadResult {
  std::array<double, 2> x;
  double value;
  std::size_t evaluations;
};

/// Minimises f over R^2 with the standard reflection / expansion /
/// contraction / shrink moves.  Stops when both the spread of simplex
/// values and the simplex diameter fall below `tolerance`.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::array<double, 2> start, std::array<double, 2> step,
                             double tolerance, std::size_t max_evaluations) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> p{start, start, start};
  p[1][0] += step[0];
  p[2][1] += step[1];
  std::array<double, 3> v{};
  std::size_t evals = 0;
  auto eval = [&](const Point& x) {
    ++evals;
    const double y = f(x);
    return std::isnan(y) ? HUGE_VAL : y;
  };
  for (std::size_t i = 0; i < 3; ++i) v[i] = eval(p[i]);

  auto lerp = [](const Point& a, const Point& b, double t) {
    return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };

  while (evals < max_evaluations) {
    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    const std::size_t best = order[0], mid = order[1], worst = order[2];

    const double diameter = std::max({std::hypot(p[best][0] - p[mid][0], p[best][1] - p[mid][1]),
                                      std::hypot(p[best][0] - p[worst][0], p[best][1] - p[worst][1])});
    if (std::abs(v[worst] - v[best]) <= tolerance * (1.0 + std::abs(v[best])) &&
        diameter <= tolerance) {
      break;
    }

    const Point centroid{0.5 * (p[best][0] + p[mid][0]), 0.5 * (p[best][1] + p[mid][1])};
    const Point reflected = lerp(centroid, p[worst], -1.0);
    const double vr = eval(reflected);
    if (vr < v[best]) {
      const Point expanded = lerp(centroid, p[worst], -2.0);
      const double ve = eval(expanded);
      if (ve < vr) {
        p[worst] = expanded;
        v[worst] = ve;
      } else {
        p[worst] = reflected;
        v[worst] = vr;
      }
      continue;
    }
    if (vr < v[mid]) {
      p[worst] = reflected;
      v[worst] = vr;
      continue;
    }
    const bool outside = vr < v[worst];
    const Point contracted = lerp(centroid, outside ? reflected : p[worst], 0.5);
    const double vc = eval(contracted);
    if (vc < (outside ? vr : v[worst])) {
      p[worst] = contracted;
      v[worst] = vc;
      continue;
    }
    for (std::size_t i : {mid, worst}) {
      p[i] = lerp(p[best], p[i], 0.5);
      v[i] = eval(p[i]);
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  return {p[best], v[best], evals};
}

}  // namespace pcfgn::detail
