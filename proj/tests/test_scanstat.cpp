#include <doctest.h>

#include <cmath>

#include "chix/errors.hpp"
#include "chix/pickands_table.hpp"
#include "chix/scanstat.hpp"

using namespace chix;

TEST_CASE("edge count covariances at the worked points") {
  CHECK(edge_count_cov(1, 0.2, 0.5) == doctest::Approx(0.25));
  CHECK(edge_count_cov(2, 0.2, 0.5) == doctest::Approx(0.5));
  CHECK(edge_count_cov(1, 0.3, 0.3) == doctest::Approx(1.0));
  CHECK(edge_count_cov(2, 0.9, 0.9) == doctest::Approx(1.0));
  CHECK(edge_count_cov(1, 0.6, 0.1) == doctest::Approx(edge_count_cov(1, 0.1, 0.6)));
  CHECK_THROWS_AS(edge_count_cov(1, 0.0, 0.5), ParameterError);
  CHECK_THROWS_AS(edge_count_cov(2, 0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(edge_count_cov(3, 0.5, 0.5), ParameterError);
}

TEST_CASE("local variance coefficients") {
  auto c = local_variance_coeffs(0.5);
  CHECK(c.a1 == doctest::Approx(4.0));
  CHECK(c.a2 == doctest::Approx(2.0));
  c = local_variance_coeffs(0.2);
  CHECK(c.a1 == doctest::Approx(6.25));
  CHECK(c.a2 == doctest::Approx(3.125));
  // a1 = 2 a2 identically
  for (double t : {0.1, 0.37, 0.62, 0.9}) {
    auto cc = local_variance_coeffs(t);
    CHECK(cc.a1 == doctest::Approx(2.0 * cc.a2));
  }
  CHECK_THROWS_AS(local_variance_coeffs(0.0), ParameterError);
  CHECK_THROWS_AS(local_variance_coeffs(1.0), ParameterError);
}

TEST_CASE("local stationarity ratios converge to the coefficients") {
  const std::vector<double> ladder{1e-2, 1e-3, 1e-4, 1e-5};
  for (double t : {0.3, 0.5, 0.7}) {
    auto p1 = verify_local_stationarity(1, t, ladder);
    auto p2 = verify_local_stationarity(2, t, ladder);
    const auto c = local_variance_coeffs(t);
    CAPTURE(t);
    CHECK(std::fabs(p1.final_ratio / c.a1 - 1.0) < 0.01);
    CHECK(std::fabs(p2.final_ratio / c.a2 - 1.0) < 0.01);
    // ratio sequence is Cauchy: successive differences shrink
    for (std::size_t i = 2; i < p1.ratios.size(); ++i) {
      CHECK(std::fabs(p1.ratios[i] - p1.ratios[i - 1]) <
            std::fabs(p1.ratios[i - 1] - p1.ratios[i - 2]) + 1e-12);
    }
  }
  CHECK_THROWS_AS(verify_local_stationarity(1, 0.999, {1e-2}), ParameterError);
}

namespace {

PickandsTable synthetic_scan_table() {
  // monotone decreasing placeholder curve over the eta' range the scan
  // integrand visits (a in [2, 6.25] at eta = 1)
  std::vector<PickandsTable::Node> nodes;
  for (double ep = 1.5; ep <= 7.01; ep += 0.5) {
    PickandsTable::Node nd;
    nd.eta_prime = ep;
    nd.h = 1.0 / (1.0 + ep);  // stand-in shape, smooth and decreasing
    nd.std_error = 0.0;
    nodes.push_back(nd);
  }
  return PickandsTable::from_nodes(1.0, 1.0, std::move(nodes));
}

}  // namespace

TEST_CASE("pvalue_formula structure") {
  PickandsTable table = synthetic_scan_table();

  // integrand argument at (v1,v2) = (1,0), t = 0.5 is 4; at (0,1) it is 2
  const auto c = local_variance_coeffs(0.5);
  CHECK(1.0 * c.a1 + 0.0 * c.a2 == doctest::Approx(4.0));
  CHECK(0.0 * c.a1 + 1.0 * c.a2 == doctest::Approx(2.0));

  // degenerate window has p-value 0
  ScanWindow degen{0.5, 0.5, 20.0};
  auto rep0 = pvalue_formula(degen, table);
  CHECK(rep0.conv_b.probability == 0.0);
  CHECK(rep0.conv_a.probability == 0.0);

  // conventions differ by exactly the circle length 2 pi
  ScanWindow w{0.2, 0.8, 20.0};
  auto rep = pvalue_formula(w, table);
  CHECK(rep.conv_a.raw_value ==
        doctest::Approx(rep.conv_b.raw_value * 2.0 * M_PI).epsilon(1e-9));
  CHECK(rep.conv_b.probability > 0.0);
  CHECK(rep.conv_b.u == 20.0);
}

TEST_CASE("pvalue_mc: low thresholds and the single-point window") {
  // low threshold sanity: 4 correlated grid points, marginal tail e^{-2.5}
  ScanWindow small{0.2, 0.8, 5.0};
  MCEstimate e = pvalue_mc(small, 20000, 31);
  CHECK(e.probability > std::exp(-2.5));  // sup dominates a single marginal
  CHECK(e.probability < 4.0 * std::exp(-2.5));  // union bound

  // window collapsing to one grid point: P(chi2_2 > u) = e^{-u/2}
  // u = 10: lattice 1/10; window [0.45, 0.549] contains only t = 0.5
  ScanWindow single{0.45, 0.549, 10.0};
  MCEstimate s = pvalue_mc(single, 200000, 32);
  CHECK(s.grid_points == 1);
  const double target = std::exp(-5.0);
  CHECK(s.ci.lo <= target);
  CHECK(s.ci.hi >= target);

  ScanWindow bad{0.8, 0.2, 10.0};
  CHECK_THROWS_AS(pvalue_mc(bad, 100, 1), ParameterError);

  // resource guard: (t2-t1)*u too large
  ScanWindow huge{0.01, 0.99, 20000.0};
  CHECK_THROWS_AS(pvalue_mc(huge, 100, 1), ResourceError);
}

TEST_CASE("pvalue_mc monotonicity with common random numbers is exact per sample") {
  // window enlargement: narrow-sup <= wide-sup on every replicate
  ScanWindow narrow{0.3, 0.6, 15.0};
  ScanWindow wide{0.2, 0.8, 15.0};
  ScanDominance wd = scan_window_dominance(narrow, wide, 20000, 77);
  CHECK(wd.violations == 0);
  CHECK(wd.count_lo <= wd.count_hi);

  // threshold: exceedance indicators are nested on the same sups
  ScanWindow w{0.2, 0.8, 15.0};
  ScanDominance td = scan_threshold_dominance(w, 12.0, 18.0, 20000, 78);
  CHECK(td.violations == 0);
  CHECK(td.count_lo <= td.count_hi);
}
