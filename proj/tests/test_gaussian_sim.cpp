#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "chix/errors.hpp"
#include "chix/gaussian_sim.hpp"

using namespace chix;

TEST_CASE("cov matrix examples") {
  CovKernel ou = ou_kernel(1.0, 0.0, 2.0);
  SymMatrix m = build_cov_matrix(ou, make_grid({0.0, 1.0}));
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 1.0);
  CHECK(m.at(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(m.at(0, 1) == m.at(1, 0));  // mirrored, bitwise

  SymMatrix one = build_cov_matrix(ou, make_grid({0.7}));
  CHECK(one.n == 1);
  CHECK(one.at(0, 0) == 1.0);

  SymMatrix ec = build_cov_matrix(edge_count_kernel(1), make_grid({0.2, 0.5}));
  CHECK(ec.at(0, 1) == doctest::Approx(0.25));

  CHECK_THROWS_AS(build_cov_matrix(ou, make_grid({0.0, 3.0})), ParameterError);
}

TEST_CASE("cholesky factor: jitter and failure reporting") {
  SymMatrix ones;
  ones.n = 2;
  ones.a = {1.0, 1.0, 1.0, 1.0};  // rank one, needs jitter on the second pivot
  CholeskyFactor f = cholesky_factor(ones);
  CHECK(f.jitter > 0.0);
  CHECK(f.jitter <= 1e-10);

  SymMatrix bad;
  bad.n = 3;
  bad.a = {1.0, -0.9, -0.9, -0.9, 1.0, -0.9, -0.9, -0.9, 1.0};  // eigenvalue -0.8
  CHECK_THROWS_WITH_AS(cholesky_factor(bad), doctest::Contains("smallest pivot"),
                       NumericalError);
}

namespace {

// empirical covariance entry over a batch
double sample_cov(const PathBatch& b, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::uint64_t r = 0; r < b.n_rep; ++r) s += b.row(r)[i] * b.row(r)[j];
  return s / static_cast<double>(b.n_rep);
}

}  // namespace

TEST_CASE("cholesky sampling: identity, 1x1, OU lag correlation") {
  SymMatrix id;
  id.n = 2;
  id.a = {1.0, 0.0, 0.0, 1.0};
  PathBatch b = cholesky_sample(cholesky_factor(id), 100000, 11);
  const double c01 = sample_cov(b, 0, 1);
  CHECK(std::fabs(c01) < 4.0 / std::sqrt(100000.0));

  SymMatrix one;
  one.n = 1;
  one.a = {1.0};
  PathBatch b1 = cholesky_sample(cholesky_factor(one), 100000, 12);
  CHECK(sample_cov(b1, 0, 0) == doctest::Approx(1.0).epsilon(0.02));

  // OU on {0, 1}: lag-1 correlation e^{-1}, oracle = closed form
  SymMatrix ou = build_cov_matrix(ou_kernel(1.0, 0.0, 1.0), make_grid({0.0, 1.0}));
  PathBatch bo = cholesky_sample(cholesky_factor(ou), 200000, 13);
  CHECK(sample_cov(bo, 0, 1) ==
        doctest::Approx(std::exp(-1.0)).epsilon(5.0 / (std::exp(-1.0) * std::sqrt(200000.0))));
}

TEST_CASE("fbm: alpha = 1 independent increments, E[B(1)B(2)] = 1") {
  Grid g = make_uniform_grid(0.0, 1.0, 3);
  PathBatch b = fbm_sample(1.0, g, 200000, 21);
  CHECK(sample_cov(b, 1, 2) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("fbm: alpha = 2 is exactly linear in t") {
  Grid g = make_uniform_grid(0.0, 0.25, 5);
  PathBatch b = fbm_sample(2.0, g, 1000, 22);
  for (std::uint64_t r = 0; r < b.n_rep; ++r) {
    const double* row = b.row(r);
    CHECK(row[0] == 0.0);
    const double z = row[4];  // B(1) = Z
    for (std::size_t i = 0; i < 5; ++i)
      CHECK(row[i] == doctest::Approx(0.25 * static_cast<double>(i) * z).epsilon(1e-12));
  }
}

TEST_CASE("fbm: alpha = 1.5 covariance matches the closed form") {
  // oracle: cov(B(1), B(2)) = (1 + 2^1.5 - 1)/2
  const double target = fbm_cov(1.5, 1.0, 2.0);
  CHECK(target == doctest::Approx(0.5 * std::pow(2.0, 1.5)));
  Grid g = make_uniform_grid(0.0, 0.5, 5);
  PathBatch b = fbm_sample(1.5, g, 200000, 23);
  CHECK(sample_cov(b, 2, 4) == doctest::Approx(target).epsilon(0.03));
}

TEST_CASE("fbm rejects bad parameters") {
  Grid g = make_uniform_grid(0.0, 0.5, 4);
  CHECK_THROWS_AS(fbm_sample(2.5, g, 10, 1), ParameterError);
  CHECK_THROWS_AS(fbm_sample(0.0, g, 10, 1), ParameterError);
  CHECK_THROWS_AS(fbm_sample(1.0, make_grid({0.5, 1.0}), 10, 1), ParameterError);
  CHECK_THROWS_AS(fbm_sample(1.0, make_grid({0.0, 0.4, 1.0}), 10, 1), ParameterError);
}

TEST_CASE("empirical covariance convergence at n = 1e5 (4th-moment bound)") {
  // max-entry deviation <= 5 sqrt(2/n) for unit-scale covariances on [0,1]
  const std::uint64_t n_rep = 100000;
  const double bound = 5.0 * std::sqrt(2.0 / static_cast<double>(n_rep));
  Grid g = make_uniform_grid(0.0, 0.125, 9);
  for (double alpha : {0.5, 1.0, 1.5}) {
    PathBatch b = fbm_sample(alpha, g, n_rep, 31);
    double worst = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i)
      for (std::size_t j = i; j < g.size(); ++j) {
        const double dev =
            std::fabs(sample_cov(b, i, j) - fbm_cov(alpha, g.points[i], g.points[j]));
        worst = std::max(worst, dev);
      }
    CAPTURE(alpha);
    CHECK(worst <= bound);
  }
}

namespace {

// two-sample Kolmogorov-Smirnov distance; ties advance both sides before the
// gap is measured (the sup functional has an exact atom at 0: paths that
// never climb above the origin)
double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

std::vector<double> path_sups(double alpha, const Grid& g, std::uint64_t n, std::uint64_t seed,
                              FbmSampler::Method method) {
  FbmSampler sampler(alpha, g, method);
  FbmSampler::Workspace ws;
  std::vector<double> path(g.size()), sups(n);
  for (std::uint64_t r = 0; r < n; ++r) {
    RngStream s(seed, stream_id(0x4B53ULL, r));
    sampler.sample_path(s, path.data(), ws);
    sups[r] = *std::max_element(path.begin(), path.end());
  }
  return sups;
}

}  // namespace

TEST_CASE("circulant and cholesky samplers are distributionally indistinguishable (KS, 1%)") {
  // sup functional over a 33-point grid on [0,1]; 1e4 replicates per sampler
  Grid g = make_uniform_grid(0.0, 1.0 / 32.0, 33);
  const std::uint64_t n = 10000;
  // two-sample critical value at the 1% level
  const double crit = 1.628 * std::sqrt(2.0 / static_cast<double>(n));
  for (double alpha : {0.5, 1.0, 1.5}) {
    auto a = path_sups(alpha, g, n, 1001, FbmSampler::Method::Circulant);
    auto b = path_sups(alpha, g, n, 2002, FbmSampler::Method::Cholesky);
    CAPTURE(alpha);
    CHECK(ks_distance(a, b) < crit);
  }
}

TEST_CASE("path dump writes one csv row per replicate") {
  Grid g = make_uniform_grid(0.0, 0.5, 3);
  PathBatch b = fbm_sample(1.0, g, 7, 99);
  write_paths_csv(b, "paths_dump_test.csv");
  std::ifstream in("paths_dump_test.csv");
  REQUIRE(in.good());
  std::string line;
  int rows = 0, commas = 0;
  while (std::getline(in, line)) {
    ++rows;
    commas = 0;
    for (char c : line) commas += c == ',' ? 1 : 0;
  }
  CHECK(rows == 7);
  CHECK(commas == 2);
}

TEST_CASE("same seed gives bit-identical batches; thread count does not matter") {
  Grid g = make_uniform_grid(0.0, 0.05, 41);
  PathBatch a = fbm_sample(1.5, g, 5000, 77, /*n_threads=*/1);
  PathBatch b = fbm_sample(1.5, g, 5000, 77, /*n_threads=*/4);
  REQUIRE(a.values.size() == b.values.size());
  bool identical = true;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    identical = identical && (a.values[i] == b.values[i]);
  CHECK(identical);

  PathBatch c = fbm_sample(1.5, g, 5000, 78, 1);
  CHECK(c.values != a.values);
}
