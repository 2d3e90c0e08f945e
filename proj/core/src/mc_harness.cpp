#include "chix/mc_harness.hpp"

#include <cmath>
#include <fstream>

#include "chix/errors.hpp"
#include "chix/gaussian_sim.hpp"
#include "chix/thread_pool.hpp"

namespace chix {

namespace {
constexpr std::uint64_t kMcTag = 0x4D432D48ULL;
}

WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) throw ParameterError("wilson: n must be positive");
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double den = 1.0 + z2 / nn;
  const double ctr = (ph + z2 / (2.0 * nn)) / den;
  const double hw = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / den;
  return {std::max(0.0, ctr - hw), std::min(1.0, ctr + hw)};
}

namespace {

struct ComponentSamplers {
  std::vector<CholeskyFactor> factors;
  Grid grid;
};

ComponentSamplers prepare(const LocalModel& model, const Grid& grid) {
  ComponentSamplers cs;
  cs.grid = grid;
  for (int i = 0; i < model.n_comp; ++i) {
    SymMatrix cov = build_cov_matrix(model.kernels[static_cast<std::size_t>(i)], grid);
    cs.factors.push_back(cholesky_factor(cov));
  }
  return cs;
}

}  // namespace

MCEstimate sup_exceedance_mc(const LocalModel& model, const GridSpec& grid, double u,
                             std::uint64_t n_rep, std::uint64_t seed, unsigned n_threads,
                             std::size_t max_grid_points) {
  model.validate();
  if (!(u > 0.0)) throw ParameterError("sup_exceedance_mc: u must be positive");
  if (n_rep == 0) throw ParameterError("sup_exceedance_mc: n_rep must be positive");
  const Grid g = grid.realize(model.t_lo, model.t_hi, u, model.alpha);
  if (g.size() > max_grid_points)
    throw ResourceError("sup_exceedance_mc: realized grid has " + std::to_string(g.size()) +
                        " points, exceeding the exact-Cholesky bound " +
                        std::to_string(max_grid_points) + "; coarsen eta or shrink T");

  ComponentSamplers cs = prepare(model, g);
  const std::size_t m = g.size();

  const std::uint64_t block = default_block_size();
  const std::size_t n_blocks = static_cast<std::size_t>((n_rep + block - 1) / block);
  std::vector<std::uint64_t> counts(n_blocks, 0);

  parallel_blocks(n_rep, block, n_threads, [&](std::size_t b, std::uint64_t r0, std::uint64_t r1) {
    std::vector<double> chi2(m), comp(m);
    for (std::uint64_t r = r0; r < r1; ++r) {
      std::fill(chi2.begin(), chi2.end(), 0.0);
      for (int c = 0; c < model.n_comp; ++c) {
        RngStream stream(seed, stream_id(kMcTag, r, static_cast<std::uint64_t>(c)));
        cs.factors[static_cast<std::size_t>(c)].sample(stream, comp.data());
        for (std::size_t i = 0; i < m; ++i) chi2[i] += comp[i] * comp[i];
      }
      double sup = chi2[0];
      for (std::size_t i = 1; i < m; ++i) sup = std::max(sup, chi2[i]);
      if (sup > u) ++counts[b];
    }
  });

  MCEstimate est;
  est.n_rep = n_rep;
  est.seed = seed;
  est.grid_points = m;
  est.grid_spacing = g.step;
  for (std::uint64_t c : counts) est.exceed_count += c;
  est.probability = static_cast<double>(est.exceed_count) / static_cast<double>(n_rep);
  est.ci = wilson_interval(est.exceed_count, n_rep);
  for (const auto& f : cs.factors) est.jitter.push_back(f.jitter);
  return est;
}

McDominance mc_sup_dominance(const LocalModel& model, const GridSpec& grid, double u,
                             std::uint64_t n_rep, std::uint64_t seed, unsigned n_threads) {
  model.validate();
  const Grid g = grid.realize(model.t_lo, model.t_hi, u, model.alpha);
  if (g.size() > 10000) throw ResourceError("mc_sup_dominance: grid too large");
  ComponentSamplers cs = prepare(model, g);
  const std::size_t m = g.size();
  // absolute lattice index of each grid point; the coarse sub-lattice
  // (spacing 2 eta_u) keeps the even ones
  std::vector<bool> on_coarse(m);
  for (std::size_t i = 0; i < m; ++i) {
    const long k = std::lround(g.points[i] / g.step);
    on_coarse[i] = (k % 2) == 0;
  }

  const std::uint64_t block = default_block_size();
  const std::size_t n_blocks = static_cast<std::size_t>((n_rep + block - 1) / block);
  std::vector<std::uint64_t> viol(n_blocks, 0), exf(n_blocks, 0), exc(n_blocks, 0);

  parallel_blocks(n_rep, block, n_threads, [&](std::size_t b, std::uint64_t r0, std::uint64_t r1) {
    std::vector<double> chi2(m), comp(m);
    for (std::uint64_t r = r0; r < r1; ++r) {
      std::fill(chi2.begin(), chi2.end(), 0.0);
      for (int c = 0; c < model.n_comp; ++c) {
        RngStream stream(seed, stream_id(kMcTag, r, static_cast<std::uint64_t>(c)));
        cs.factors[static_cast<std::size_t>(c)].sample(stream, comp.data());
        for (std::size_t i = 0; i < m; ++i) chi2[i] += comp[i] * comp[i];
      }
      double sup_f = -1.0, sup_c = -1.0;
      for (std::size_t i = 0; i < m; ++i) {
        sup_f = std::max(sup_f, chi2[i]);
        if (on_coarse[i]) sup_c = std::max(sup_c, chi2[i]);
      }
      if (sup_c > sup_f) ++viol[b];
      if (sup_f > u) ++exf[b];
      if (sup_c > u) ++exc[b];
    }
  });

  McDominance out;
  out.n_rep = n_rep;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    out.violations += viol[b];
    out.exceed_fine += exf[b];
    out.exceed_coarse += exc[b];
  }
  return out;
}

ComparisonReport convergence_ladder(const LocalModel& model, const GridSpec& grid,
                                    const std::vector<double>& u_values, std::uint64_t n_rep,
                                    std::uint64_t seed, const PickandsTable& table,
                                    unsigned n_threads) {
  if (u_values.empty()) throw ParameterError("convergence_ladder: u ladder must be nonempty");
  for (std::size_t i = 1; i < u_values.size(); ++i)
    if (!(u_values[i] > u_values[i - 1]))
      throw ParameterError("convergence_ladder: u ladder must be increasing");

  ComparisonReport rep;
  for (std::size_t i = 0; i < u_values.size(); ++i) {
    ComparisonRung rung;
    rung.u = u_values[i];
    rung.mc = sup_exceedance_mc(model, grid, rung.u, n_rep, seed + i, n_threads);
    rung.formula_a =
        tail_formula(model, grid, rung.u, table, Convention::RawSurface).probability;
    rung.formula_b =
        tail_formula(model, grid, rung.u, table, Convention::SphereAverage).probability;
    if (rung.mc.exceed_count < 10) {
      rung.dropped = true;
      rep.warnings.push_back("u = " + std::to_string(rung.u) + ": only " +
                             std::to_string(rung.mc.exceed_count) +
                             " exceedances, tail unestimable; rung dropped");
    } else {
      rung.ratio_a = rung.formula_a / rung.mc.probability;
      rung.ratio_b = rung.formula_b / rung.mc.probability;
    }
    rep.rungs.push_back(rung);
  }

  std::vector<const ComparisonRung*> kept;
  for (const auto& r : rep.rungs)
    if (!r.dropped) kept.push_back(&r);
  if (kept.empty()) {
    rep.warnings.push_back("no estimable rungs; verdict defaults to convention B");
    return rep;
  }
  rep.terminal_ratio_a = kept.back()->ratio_a;
  rep.terminal_ratio_b = kept.back()->ratio_b;
  auto improving = [&](auto get) {
    bool ok = true;
    for (std::size_t i = 1; i < kept.size(); ++i)
      ok = ok && std::fabs(get(*kept[i]) - 1.0) <= std::fabs(get(*kept[i - 1]) - 1.0);
    return ok && kept.size() >= 2;
  };
  rep.trend_improving_a = improving([](const ComparisonRung& r) { return r.ratio_a; });
  rep.trend_improving_b = improving([](const ComparisonRung& r) { return r.ratio_b; });
  rep.verdict = std::fabs(rep.terminal_ratio_b - 1.0) <= std::fabs(rep.terminal_ratio_a - 1.0)
                    ? Convention::SphereAverage
                    : Convention::RawSurface;
  return rep;
}

void write_comparison_csv(const ComparisonReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ResourceError("comparison csv: cannot open " + path);
  out.precision(17);
  out << "# chix-comparison v1\n";
  out << "u,mc,ci_lo,ci_hi,conv_A,conv_B,ratio_A,ratio_B,dropped\n";
  for (const auto& r : report.rungs) {
    out << r.u << ',' << r.mc.probability << ',' << r.mc.ci.lo << ',' << r.mc.ci.hi << ','
        << r.formula_a << ',' << r.formula_b << ',' << r.ratio_a << ',' << r.ratio_b << ','
        << (r.dropped ? 1 : 0) << '\n';
  }
}

}  // namespace chix
