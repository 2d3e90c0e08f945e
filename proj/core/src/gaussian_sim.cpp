#include "chix/gaussian_sim.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "chix/errors.hpp"
#include "chix/fft.hpp"
#include "chix/thread_pool.hpp"

namespace chix {

SymMatrix build_cov_matrix(const CovKernel& kernel, const Grid& grid) {
  const std::size_t n = grid.size();
  SymMatrix m;
  m.n = n;
  m.a.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel(grid.points[i], grid.points[j]);
      m.at(i, j) = v;
      m.at(j, i) = v;  // mirror: bitwise symmetric
    }
  }
  return m;
}

namespace {

bool try_cholesky(const SymMatrix& m, double jitter, std::vector<double>& l,
                  double& smallest_pivot) {
  const std::size_t n = m.n;
  l.assign(n * n, 0.0);
  smallest_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        const double piv = s + jitter;
        if (piv < smallest_pivot) smallest_pivot = piv;
        if (!(piv > 0.0)) return false;
        l[i * n + i] = std::sqrt(piv);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
  return true;
}

}  // namespace

CholeskyFactor cholesky_factor(const SymMatrix& m, double max_jitter) {
  CholeskyFactor f;
  f.n = m.n;
  double worst_pivot = 0.0;
  for (double jitter : {0.0, 1e-13, 1e-12, 1e-11, 1e-10}) {
    if (jitter > max_jitter) break;
    double piv = 0.0;
    if (try_cholesky(m, jitter, f.l, piv)) {
      f.jitter = jitter;
      f.smallest_pivot = piv;
      return f;
    }
    worst_pivot = piv;
  }
  throw NumericalError("cholesky: matrix not positive semidefinite within jitter budget " +
                       std::to_string(max_jitter) + " (smallest pivot " +
                       std::to_string(worst_pivot) + ")");
}

void CholeskyFactor::sample(RngStream& stream, double* out) const {
  // z buffer on the stack would need alloca; reuse out for z then transform in
  // place back-to-front so each y_i only needs z_0..z_i (already stored).
  for (std::size_t i = 0; i < n; ++i) out[i] = stream.next_normal();
  for (std::size_t i = n; i-- > 0;) {
    double s = 0.0;
    const double* li = l.data() + i * n;
    for (std::size_t k = 0; k <= i; ++k) s += li[k] * out[k];
    out[i] = s;
  }
}

PathBatch cholesky_sample(const CholeskyFactor& f, std::uint64_t n_rep, std::uint64_t seed,
                          unsigned n_threads, std::uint64_t stream_tag) {
  if (n_rep == 0) throw ParameterError("cholesky_sample: n_rep must be positive");
  PathBatch batch;
  batch.n_rep = n_rep;
  batch.n_points = f.n;
  batch.seed = seed;
  batch.values.resize(n_rep * f.n);
  parallel_blocks(n_rep, default_block_size(), n_threads,
                  [&](std::size_t, std::uint64_t r0, std::uint64_t r1) {
                    for (std::uint64_t r = r0; r < r1; ++r) {
                      RngStream s(seed, stream_id(stream_tag, r));
                      f.sample(s, batch.row(r));
                    }
                  });
  return batch;
}

double fbm_cov(double alpha, double s, double t) {
  return 0.5 * (std::pow(s, alpha) + std::pow(t, alpha) -
                std::pow(std::fabs(t - s), alpha));
}

FbmSampler::FbmSampler(double alpha, const Grid& grid, Method forced) : alpha_(alpha) {
  if (!(alpha > 0.0) || alpha > 2.0) throw ParameterError("fbm: alpha must be in (0,2]");
  if (!grid.uniform) throw ParameterError("fbm: grid must be uniform");
  if (std::fabs(grid.points.front()) > 0.0) throw ParameterError("fbm: grid must start at 0");
  n_points_ = grid.size();
  step_ = grid.step;
  if (n_points_ < 2) {
    method_ = "exact-linear";  // single point t=0, path is identically 0
    return;
  }

  if (forced == Method::Cholesky) {
    method_ = "cholesky";
    SymMatrix cov;
    cov.n = n_points_ - 1;
    cov.a.assign(cov.n * cov.n, 0.0);
    for (std::size_t i = 0; i < cov.n; ++i)
      for (std::size_t j = i; j < cov.n; ++j) {
        const double v = fbm_cov(alpha, step_ * static_cast<double>(i + 1),
                                 step_ * static_cast<double>(j + 1));
        cov.at(i, j) = v;
        cov.at(j, i) = v;
      }
    chol_ = cholesky_factor(cov);
    return;
  }

  if (forced == Method::Auto) {
    if (alpha == 2.0) {
      method_ = "exact-linear";  // B_2(t) = t Z; general covariance is rank one
      return;
    }
    if (alpha == 1.0) {
      method_ = "exact-bm";  // independent increments
      return;
    }
  } else if (alpha == 2.0) {
    throw ParameterError("fbm: alpha = 2 embedding is rank-one; use Method::Auto");
  }

  // circulant embedding of the fGn increment autocovariance
  const std::size_t n_inc = n_points_ - 1;
  const std::size_t m = next_pow2(2 * n_inc);
  const double ha = std::pow(step_, alpha);
  auto gamma = [&](std::size_t k) {
    const double kk = static_cast<double>(k);
    return 0.5 * ha *
           (std::pow(kk + 1.0, alpha) - 2.0 * std::pow(kk, alpha) +
            std::pow(std::fabs(kk - 1.0), alpha));
  };
  std::vector<std::complex<double>> row(m);
  for (std::size_t k = 0; k <= m / 2; ++k) row[k] = gamma(k);
  for (std::size_t k = m / 2 + 1; k < m; ++k) row[k] = row[m - k];
  fft_inplace(row, false);

  double max_lambda = 0.0, min_lambda = std::numeric_limits<double>::infinity();
  for (const auto& c : row) {
    max_lambda = std::max(max_lambda, c.real());
    min_lambda = std::min(min_lambda, c.real());
  }
  if (min_lambda < -1e-12 * std::max(1.0, max_lambda)) {
    // embedding not nonnegative: exact Cholesky of the path covariance on the
    // positive-time points (t=0 is deterministic zero)
    method_ = "cholesky";
    SymMatrix cov;
    cov.n = n_points_ - 1;
    cov.a.assign(cov.n * cov.n, 0.0);
    for (std::size_t i = 0; i < cov.n; ++i)
      for (std::size_t j = i; j < cov.n; ++j) {
        const double v = fbm_cov(alpha, step_ * static_cast<double>(i + 1),
                                 step_ * static_cast<double>(j + 1));
        cov.at(i, j) = v;
        cov.at(j, i) = v;
      }
    chol_ = cholesky_factor(cov);
    return;
  }

  method_ = "circulant";
  embed_m_ = m;
  sqrt_spectrum_.resize(m);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k)
    sqrt_spectrum_[k] = std::sqrt(std::max(0.0, row[k].real()) * inv_m);
}

void FbmSampler::sample_path(RngStream& stream, double* out, Workspace& ws) const {
  out[0] = 0.0;
  if (n_points_ < 2) return;
  const std::size_t n_inc = n_points_ - 1;

  if (method_ == "exact-linear") {
    const double z = stream.next_normal();
    for (std::size_t i = 0; i < n_points_; ++i) out[i] = step_ * static_cast<double>(i) * z;
    return;
  }
  if (method_ == "exact-bm") {
    const double sd = std::sqrt(step_);
    double acc = 0.0;
    for (std::size_t i = 1; i < n_points_; ++i) {
      acc += sd * stream.next_normal();
      out[i] = acc;
    }
    return;
  }
  if (method_ == "cholesky") {
    chol_.sample(stream, out + 1);
    return;
  }

  // circulant: Re(FFT(sqrt(lambda/M) * complex normal)) gives one fGn sample
  ws.freq.resize(embed_m_);
  for (std::size_t k = 0; k < embed_m_; ++k) {
    const double re = stream.next_normal();
    const double im = stream.next_normal();
    ws.freq[k] = std::complex<double>(re * sqrt_spectrum_[k], im * sqrt_spectrum_[k]);
  }
  fft_inplace(ws.freq, false);
  double acc = 0.0;
  for (std::size_t i = 0; i < n_inc; ++i) {
    acc += ws.freq[i].real();
    out[i + 1] = acc;
  }
}

PathBatch fbm_sample(double alpha, const Grid& grid, std::uint64_t n_rep, std::uint64_t seed,
                     unsigned n_threads, std::uint64_t stream_tag) {
  if (n_rep == 0) throw ParameterError("fbm_sample: n_rep must be positive");
  FbmSampler sampler(alpha, grid);
  PathBatch batch;
  batch.n_rep = n_rep;
  batch.n_points = sampler.n_points();
  batch.seed = seed;
  batch.values.resize(n_rep * sampler.n_points());
  parallel_blocks(n_rep, default_block_size(), n_threads,
                  [&](std::size_t, std::uint64_t r0, std::uint64_t r1) {
                    FbmSampler::Workspace ws;
                    for (std::uint64_t r = r0; r < r1; ++r) {
                      RngStream s(seed, stream_id(stream_tag, r));
                      sampler.sample_path(s, batch.row(r), ws);
                    }
                  });
  return batch;
}

void write_paths_csv(const PathBatch& batch, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ResourceError("write_paths_csv: cannot open " + path);
  out.precision(17);
  for (std::uint64_t r = 0; r < batch.n_rep; ++r) {
    const double* row = batch.row(r);
    for (std::size_t i = 0; i < batch.n_points; ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

}  // namespace chix
