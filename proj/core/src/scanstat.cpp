#include "chix/scanstat.hpp"

#include <cmath>

#include "chix/errors.hpp"
#include "chix/gaussian_sim.hpp"
#include "chix/thread_pool.hpp"

namespace chix {

void ScanWindow::validate(bool allow_degenerate) const {
  if (!(0.0 < t1) || !(t1 < 1.0)) throw ParameterError("scan window: need 0 < T1 < 1");
  if (!(0.0 < t2) || !(t2 < 1.0)) throw ParameterError("scan window: need 0 < T2 < 1");
  if (allow_degenerate ? !(t1 <= t2) : !(t1 < t2))
    throw ParameterError("scan window: need T1 < T2");
  if (!(u > 0.0)) throw ParameterError("scan window: u must be positive");
}

double edge_count_cov(int which, double s, double t) {
  if (which != 1 && which != 2) throw ParameterError("edge_count_cov: which must be 1 or 2");
  if (!(s > 0.0) || !(s < 1.0) || !(t > 0.0) || !(t < 1.0))
    throw ParameterError("edge_count_cov: s, t must lie in (0,1)");
  const double lo = std::min(s, t), hi = std::max(s, t);
  if (which == 1) return lo * (1.0 - hi) / (hi * (1.0 - lo));
  return lo * (1.0 - hi) / std::sqrt(lo * (1.0 - lo) * hi * (1.0 - hi));
}

LocalVarianceCoeffs local_variance_coeffs(double t) {
  if (!(t > 0.0) || !(t < 1.0)) throw ParameterError("local_variance_coeffs: t must be in (0,1)");
  const double d = t * (1.0 - t);
  return {1.0 / d, 0.5 / d};
}

StationarityProbe verify_local_stationarity(int which, double t,
                                            const std::vector<double>& s_ladder) {
  // one-component model wrapping the requested kernel, alpha = 1
  LocalModel m;
  m.n_comp = 1;
  m.alpha = 1.0;
  m.t_lo = 1e-6;
  m.t_hi = 1.0 - 1e-6;
  m.kernels.push_back(edge_count_kernel(which));
  const bool first = which == 1;
  m.a_fns.push_back([first](double tt) {
    const auto c = local_variance_coeffs(tt);
    return first ? c.a1 : c.a2;
  });
  m.name = "edge_count_component";
  return probe_local_stationarity(m, 1, t, s_ladder);
}

ScanReport pvalue_formula(const ScanWindow& window, const PickandsTable& table,
                           const QuadratureOptions& opts) {
  window.validate(/*allow_degenerate=*/true);
  ScanReport rep;
  if (window.t1 == window.t2) {
    // zero-length scan interval: p-value 0 under both conventions
    rep.conv_a.u = rep.conv_b.u = window.u;
    rep.conv_a.convention = Convention::RawSurface;
    rep.conv_b.convention = Convention::SphereAverage;
    return rep;
  }
  const LocalModel model = make_edge_count_model(window.t1, window.t2);
  const GridSpec grid{1.0};  // [T1,T2] cap u^{-1} Z: eta = 1 under alpha = 1
  rep.conv_a = tail_formula(model, grid, window.u, table, Convention::RawSurface,
                             TailMode::Exact, opts);
  rep.conv_b = tail_formula(model, grid, window.u, table, Convention::SphereAverage,
                             TailMode::Exact, opts);
  return rep;
}

MCEstimate pvalue_mc(const ScanWindow& window, std::uint64_t n_rep, std::uint64_t seed,
                     unsigned n_threads) {
  window.validate();
  const double span = (window.t2 - window.t1) * window.u;
  if (span > 10000.0)
    throw ResourceError("pvalue_mc: (T2-T1)*u = " + std::to_string(span) +
                        " grid points exceed the 1e4 bound; coarsen the grid");
  const LocalModel model = make_edge_count_model(window.t1, window.t2);
  const GridSpec grid{1.0};
  return sup_exceedance_mc(model, grid, window.u, n_rep, seed, n_threads);
}

namespace {

// sup of X1^2 + X2^2 per replicate over the wide grid, with masked subset sups
ScanDominance run_dominance(const ScanWindow& wide, double u_lo_threshold, double u_hi_threshold,
                            const std::vector<bool>& subset_mask, std::uint64_t n_rep,
                            std::uint64_t seed, unsigned n_threads) {
  const LocalModel model = make_edge_count_model(wide.t1, wide.t2);
  const GridSpec grid{1.0};
  const Grid g = grid.realize(wide.t1, wide.t2, wide.u, 1.0);
  if (g.size() > 10000) throw ResourceError("scan dominance: grid too large");
  std::vector<CholeskyFactor> factors;
  for (std::size_t i = 0; i < 2; ++i)
    factors.push_back(cholesky_factor(build_cov_matrix(model.kernels[i], g)));

  const std::uint64_t block = default_block_size();
  const std::size_t n_blocks = static_cast<std::size_t>((n_rep + block - 1) / block);
  std::vector<std::uint64_t> lo_cnt(n_blocks, 0), hi_cnt(n_blocks, 0), viol(n_blocks, 0);
  const std::size_t m = g.size();

  parallel_blocks(n_rep, block, n_threads, [&](std::size_t b, std::uint64_t r0, std::uint64_t r1) {
    std::vector<double> chi2(m), comp(m);
    for (std::uint64_t r = r0; r < r1; ++r) {
      std::fill(chi2.begin(), chi2.end(), 0.0);
      for (int c = 0; c < 2; ++c) {
        RngStream stream(seed, stream_id(0x5343414EULL, r, static_cast<std::uint64_t>(c)));
        factors[static_cast<std::size_t>(c)].sample(stream, comp.data());
        for (std::size_t i = 0; i < m; ++i) chi2[i] += comp[i] * comp[i];
      }
      double sup_subset = -1.0, sup_full = -1.0;
      for (std::size_t i = 0; i < m; ++i) {
        sup_full = std::max(sup_full, chi2[i]);
        if (subset_mask[i]) sup_subset = std::max(sup_subset, chi2[i]);
      }
      const bool lo = sup_subset > u_hi_threshold;  // narrow window or higher u
      const bool hi = sup_full > u_lo_threshold;    // wide window or lower u
      if (lo) ++lo_cnt[b];
      if (hi) ++hi_cnt[b];
      if (lo && !hi) ++viol[b];
    }
  });

  ScanDominance out;
  out.n_rep = n_rep;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    out.count_lo += lo_cnt[b];
    out.count_hi += hi_cnt[b];
    out.violations += viol[b];
  }
  return out;
}

}  // namespace

ScanDominance scan_window_dominance(const ScanWindow& narrow, const ScanWindow& wide,
                                    std::uint64_t n_rep, std::uint64_t seed,
                                    unsigned n_threads) {
  narrow.validate();
  wide.validate();
  if (narrow.u != wide.u)
    throw ParameterError("scan window dominance: windows must share the threshold u");
  if (narrow.t1 < wide.t1 || narrow.t2 > wide.t2)
    throw ParameterError("scan window dominance: narrow window must be inside the wide one");
  const GridSpec grid{1.0};
  const Grid g = grid.realize(wide.t1, wide.t2, wide.u, 1.0);
  std::vector<bool> mask(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    mask[i] = g.points[i] >= narrow.t1 - 1e-12 && g.points[i] <= narrow.t2 + 1e-12;
  return run_dominance(wide, wide.u, wide.u, mask, n_rep, seed, n_threads);
}

ScanDominance scan_threshold_dominance(const ScanWindow& window, double u_lo, double u_hi,
                                       std::uint64_t n_rep, std::uint64_t seed,
                                       unsigned n_threads) {
  window.validate();
  if (!(u_lo < u_hi)) throw ParameterError("scan threshold dominance: need u_lo < u_hi");
  const GridSpec grid{1.0};
  const Grid g = grid.realize(window.t1, window.t2, window.u, 1.0);
  std::vector<bool> mask(g.size(), true);
  return run_dominance(window, u_lo, u_hi, mask, n_rep, seed, n_threads);
}

}  // namespace chix
