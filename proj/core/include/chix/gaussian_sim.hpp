#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "chix/grid.hpp"
#include "chix/kernels.hpp"
#include "chix/rng.hpp"

namespace chix {

// Dense symmetric matrix, row-major. Construction mirrors the upper triangle
// so symmetry is bitwise.
struct SymMatrix {
  std::size_t n = 0;
  std::vector<double> a;  // n*n row-major

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

SymMatrix build_cov_matrix(const CovKernel& kernel, const Grid& grid);

// Lower-triangular Cholesky factor with the diagonal jitter that was needed
// (0 when the matrix factored cleanly). Jitter ladder goes up to
// max_jitter = 1e-10; beyond that factorization fails reporting the smallest
// pivot encountered.
struct CholeskyFactor {
  std::size_t n = 0;
  std::vector<double> l;  // row-major lower triangle, full storage
  double jitter = 0.0;
  double smallest_pivot = 0.0;

  // y = L z for standard-normal z drawn from the stream (len n each)
  void sample(RngStream& stream, double* out) const;
};

CholeskyFactor cholesky_factor(const SymMatrix& m, double max_jitter = 1e-10);

// Sampled replicate paths, row-major: replicate r occupies
// values[r*n_points .. (r+1)*n_points).
struct PathBatch {
  std::uint64_t n_rep = 0;
  std::size_t n_points = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  double* row(std::uint64_t r) { return values.data() + r * n_points; }
  const double* row(std::uint64_t r) const { return values.data() + r * n_points; }
};

// i.i.d. centered Gaussian rows with the given covariance. Deterministic for a
// fixed seed; replicate r always uses stream (seed, tag, r).
PathBatch cholesky_sample(const CholeskyFactor& f, std::uint64_t n_rep, std::uint64_t seed,
                          unsigned n_threads = 0, std::uint64_t stream_tag = 0x43484F4CULL);

// Fractional Brownian motion sampler on a uniform grid starting at 0,
// covariance (s^alpha + t^alpha - |t-s|^alpha)/2. Uses circulant embedding of
// the stationary increments (FFT) and falls back to Cholesky if the embedding
// spectrum has a negative entry below -1e-12 * max; tiny negatives are
// clamped to zero. alpha = 1 and alpha = 2 short-circuit to exact forms
// (independent increments resp. B(t) = t*Z).
class FbmSampler {
 public:
  enum class Method { Auto, Circulant, Cholesky };

  FbmSampler(double alpha, const Grid& grid, Method forced = Method::Auto);

  std::size_t n_points() const { return n_points_; }
  double alpha() const { return alpha_; }
  const std::string& method() const { return method_; }

  // One path (length n_points) into out; workspace is per-thread scratch.
  struct Workspace {
    std::vector<std::complex<double>> freq;
  };
  void sample_path(RngStream& stream, double* out, Workspace& ws) const;

 private:
  double alpha_ = 0.0;
  double step_ = 0.0;
  std::size_t n_points_ = 0;  // grid points including t=0
  std::string method_;        // "circulant" | "cholesky" | "exact-bm" | "exact-linear"
  std::size_t embed_m_ = 0;
  std::vector<double> sqrt_spectrum_;  // sqrt(lambda_k / M)
  CholeskyFactor chol_;                // fallback (points > 0)
};

PathBatch fbm_sample(double alpha, const Grid& grid, std::uint64_t n_rep, std::uint64_t seed,
                     unsigned n_threads = 0, std::uint64_t stream_tag = 0x46424DULL);

// Exact fBm covariance, the oracle target for sampler checks.
double fbm_cov(double alpha, double s, double t);

// CSV dump (one row per replicate).
void write_paths_csv(const PathBatch& batch, const std::string& path);

}  // namespace chix
