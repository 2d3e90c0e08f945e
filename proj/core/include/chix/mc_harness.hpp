#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chix/grid.hpp"
#include "chix/local_model.hpp"
#include "chix/tail_asymptotics.hpp"

namespace chix {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};
// 95% score interval for k successes out of n.
WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

struct MCEstimate {
  double probability = 0.0;
  std::uint64_t exceed_count = 0;
  std::uint64_t n_rep = 0;
  WilsonInterval ci;
  std::uint64_t seed = 0;
  std::size_t grid_points = 0;
  double grid_spacing = 0.0;
  std::vector<double> jitter;  // per component
};

// Empirical P(sup over the realized grid of sum_i X_i(t)^2 > u). Components
// are simulated independently with exact Cholesky sampling; counting is
// integer so the estimate is invariant to worker count.
MCEstimate sup_exceedance_mc(const LocalModel& model, const GridSpec& grid, double u,
                             std::uint64_t n_rep, std::uint64_t seed, unsigned n_threads = 0,
                             std::size_t max_grid_points = 10000);

// Per-replicate nested-grid dominance: sup over the 2*eta_u lattice vs the
// eta_u lattice on common paths. Violations are exactly zero by construction;
// the check exercises the real sampling path.
struct McDominance {
  std::uint64_t n_rep = 0;
  std::uint64_t violations = 0;
  std::uint64_t exceed_fine = 0;
  std::uint64_t exceed_coarse = 0;
};
McDominance mc_sup_dominance(const LocalModel& model, const GridSpec& grid, double u,
                             std::uint64_t n_rep, std::uint64_t seed, unsigned n_threads = 0);

struct ComparisonRung {
  double u = 0.0;
  MCEstimate mc;
  double formula_a = 0.0;
  double formula_b = 0.0;
  double ratio_a = 0.0;  // formula / MC
  double ratio_b = 0.0;
  bool dropped = false;  // tail unestimable at this u
};

struct ComparisonReport {
  std::vector<ComparisonRung> rungs;
  Convention verdict = Convention::SphereAverage;
  double terminal_ratio_a = 0.0;
  double terminal_ratio_b = 0.0;
  bool trend_improving_a = false;
  bool trend_improving_b = false;
  std::vector<std::string> warnings;
};

// Formula-vs-simulation ladder over increasing u; the verdict is the
// convention whose terminal |ratio - 1| is smaller. Rungs where the MC count
// falls below 10 are dropped with a warning.
ComparisonReport convergence_ladder(const LocalModel& model, const GridSpec& grid,
                                    const std::vector<double>& u_values, std::uint64_t n_rep,
                                    std::uint64_t seed, const PickandsTable& table,
                                    unsigned n_threads = 0);

void write_comparison_csv(const ComparisonReport& report, const std::string& path);

}  // namespace chix
