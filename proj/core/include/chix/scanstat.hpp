#pragma once

#include <cstdint>
#include <vector>

#include "chix/local_model.hpp"
#include "chix/mc_harness.hpp"
#include "chix/pickands_table.hpp"
#include "chix/tail_asymptotics.hpp"

namespace chix {

// Change-point application: the generalized edge-count scan statistic
// S(t) = X1(t)^2 + X2(t)^2 scanned over [T1, T2] cap u^{-1} Z.
struct ScanWindow {
  double t1 = 0.2;
  double t2 = 0.8;
  double u = 20.0;

  void validate(bool allow_degenerate = false) const;
};

// Exact covariance of component 1 or 2 at (s, t) in (0,1).
double edge_count_cov(int which, double s, double t);

struct LocalVarianceCoeffs {
  double a1 = 0.0;  // 1/(t(1-t))
  double a2 = 0.0;  // 1/(2t(1-t))
};
LocalVarianceCoeffs local_variance_coeffs(double t);

// Finite-difference ratios (1 - r(t,t+s))/s along the s ladder vs a_i(t).
StationarityProbe verify_local_stationarity(int which, double t,
                                            const std::vector<double>& s_ladder);

struct ScanReport {
  TailApproximation conv_a;
  TailApproximation conv_b;  // the theorem's own normalization (1/(2 pi))
};

// Evaluates the asymptotic p-value formula: convention B through the tail
// machinery with n = 2, alpha = 1, eta = 1, a_i from local_variance_coeffs;
// convention A reported alongside for the harness to judge. Degenerate
// windows (t1 == t2) give p = 0.
ScanReport pvalue_formula(const ScanWindow& window, const PickandsTable& table,
                           const QuadratureOptions& opts = {});

// Direct simulation of the scan statistic over [T1,T2] cap u^{-1} Z.
MCEstimate pvalue_mc(const ScanWindow& window, std::uint64_t n_rep, std::uint64_t seed,
                     unsigned n_threads = 0);

// Exact per-sample monotonicity checks on common paths. Window enlargement:
// both windows share u, the narrow grid is a subset of the wide one, and each
// replicate's narrow sup is computed from the same simulated path, so
// narrow-exceeds implies wide-exceeds sample by sample. Threshold: the grid
// is realized once (from u_hi) and both thresholds are applied to the same
// sups.
struct ScanDominance {
  std::uint64_t n_rep = 0;
  std::uint64_t violations = 0;  // exact count; 0 by construction
  std::uint64_t count_lo = 0;    // narrow window / higher threshold
  std::uint64_t count_hi = 0;    // wide window / lower threshold
};
ScanDominance scan_window_dominance(const ScanWindow& narrow, const ScanWindow& wide,
                                    std::uint64_t n_rep, std::uint64_t seed,
                                    unsigned n_threads = 0);
ScanDominance scan_threshold_dominance(const ScanWindow& window, double u_lo, double u_hi,
                                       std::uint64_t n_rep, std::uint64_t seed,
                                       unsigned n_threads = 0);

}  // namespace chix
