#include "chix/grid.hpp"

#include <cmath>

#include "chix/errors.hpp"

namespace chix {

Grid make_uniform_grid(double start, double step, std::size_t n) {
  if (n == 0) throw ParameterError("grid: point count must be positive");
  if (!(step > 0.0) && n > 1) throw ParameterError("grid: step must be positive");
  Grid g;
  g.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.points[i] = start + step * static_cast<double>(i);
  g.uniform = true;
  g.step = step;
  return g;
}

Grid make_grid(std::vector<double> points) {
  if (points.empty()) throw ParameterError("grid: points must be nonempty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) throw ParameterError("grid: points must be finite");
    if (i > 0 && !(points[i] > points[i - 1]))
      throw ParameterError("grid: points must be strictly increasing");
  }
  Grid g;
  g.points = std::move(points);
  g.uniform = true;
  if (g.points.size() >= 2) {
    const double h = g.points[1] - g.points[0];
    for (std::size_t i = 2; i < g.points.size(); ++i) {
      if (std::fabs((g.points[i] - g.points[i - 1]) - h) > 1e-12 * std::max(1.0, std::fabs(h))) {
        g.uniform = false;
        break;
      }
    }
    g.step = g.uniform ? h : 0.0;
  }
  return g;
}

double GridSpec::spacing_at(double u, double alpha) const {
  if (!(u > 0.0)) throw ParameterError("grid spec: u must be positive");
  if (!(alpha > 0.0) || alpha > 2.0) throw ParameterError("grid spec: alpha must be in (0,2]");
  return eta * std::pow(u, -1.0 / alpha);
}

Grid GridSpec::realize(double lo, double hi, double u, double alpha) const {
  if (!(hi >= lo)) throw ParameterError("grid spec: empty interval");
  const double h = spacing_at(u, alpha);
  if (!(h > 0.0))
    throw ResourceError("grid spec: eta = 0 grid is dense; no finite realization exists");
  // lattice points k*h inside [lo, hi]
  const long k0 = static_cast<long>(std::ceil(lo / h - 1e-9));
  const long k1 = static_cast<long>(std::floor(hi / h + 1e-9));
  if (k1 < k0) throw ParameterError("grid spec: no lattice points inside interval");
  Grid g;
  g.points.reserve(static_cast<std::size_t>(k1 - k0 + 1));
  for (long k = k0; k <= k1; ++k) g.points.push_back(static_cast<double>(k) * h);
  g.uniform = true;
  g.step = h;
  return g;
}

}  // namespace chix
