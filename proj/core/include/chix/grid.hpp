#pragma once

#include <cstddef>
#include <vector>

namespace chix {

// Finite strictly-increasing set of time points. Uniform grids carry their
// step so samplers can pick the FFT path.
struct Grid {
  std::vector<double> points;
  bool uniform = false;
  double step = 0.0;

  std::size_t size() const { return points.size(); }
  double front() const { return points.front(); }
  double back() const { return points.back(); }
};

// Grid {start, start+step, ..., start+(n-1)*step}.
Grid make_uniform_grid(double start, double step, std::size_t n);

// Validates invariants (nonempty, strictly increasing, finite entries) and
// detects uniformity. Throws ParameterError on violation.
Grid make_grid(std::vector<double> points);

// Threshold-dependent grid rule eta_u = eta * u^(-1/alpha), so that
// eta_u * u^(1/alpha) == eta identically.
struct GridSpec {
  double eta = 0.0;

  double spacing_at(double u, double alpha) const;

  // [lo, hi] intersected with eta_u * Z (lattice anchored at 0). Requires
  // eta > 0; a dense spec (eta == 0) has no finite realization.
  Grid realize(double lo, double hi, double u, double alpha) const;
};

}  // namespace chix
