#pragma once

#include <cstdint>
#include <string>

#include "chix/chi_square.hpp"
#include "chix/grid.hpp"
#include "chix/local_model.hpp"
#include "chix/pickands_table.hpp"

namespace chix {

// Two readings of the surface measure "dv" in the tail formula. RawSurface
// (A) takes the sphere integral literally; SphereAverage (B) divides by the
// sphere area |S_{n-1}| = 2 pi^{n/2} / Gamma(n/2). The MC harness decides
// empirically which one matches simulation.
enum class Convention { RawSurface, SphereAverage };

std::string convention_name(Convention c);

struct TailApproximation {
  double probability = 0.0;        // clamped to [0,1]
  double raw_value = 0.0;          // formula value before clamping
  double time_integral = 0.0;      // \int dt (sphere integral of H at t)
  double sphere_integral_mean = 0.0;  // time-averaged inner sphere integral
  double chisq_tail = 0.0;
  double u = 0.0;
  double u_factor = 0.0;           // u^{1/alpha}
  TailMode tail_mode = TailMode::Exact;
  Convention convention = Convention::SphereAverage;
  double quadrature_error = 0.0;   // time quadrature + sphere + table error
};

struct QuadratureOptions {
  double rel_tol = 1e-6;           // adaptive time quadrature
  std::size_t sphere_resolution = 256;
  int max_depth = 18;
};

// Right side of the tail theorem for sup over [t_lo, t_hi] cap eta_u Z of the
// chi-square of `model` at threshold u:
//   (time integral of the sphere integral of H^eta_alpha(sum v_i^2 a_i(t)))
//   * u^{1/alpha} * P(chi^2_n(0) > u),
// divided by the sphere area under Convention::SphereAverage. Pickands values
// come only from the supplied table; this function never simulates.
TailApproximation tail_formula(const LocalModel& model, const GridSpec& grid, double u,
                                const PickandsTable& table,
                                Convention convention = Convention::SphereAverage,
                                TailMode tail_mode = TailMode::Exact,
                                const QuadratureOptions& opts = {});

// Adaptive Gauss-Legendre (7/15 point pair) on [lo, hi].
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol, int max_depth, double* error_estimate = nullptr);

}  // namespace chix
