#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chix/kernels.hpp"

namespace chix {

// A vector of n unit-variance Gaussian components with common structure
// exponent alpha: local-variance functions a_i(t) (so that
// (1 - r_i(t, t+s)) / |s|^alpha -> a_i(t)) plus the exact kernels used for
// simulation.
struct LocalModel {
  int n_comp = 1;
  double alpha = 1.0;
  std::vector<std::function<double(double)>> a_fns;
  std::vector<CovKernel> kernels;
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::string name;

  void validate() const;
};

// Stationary OU components: r = exp(-a|s-t|), alpha = 1, a_i(t) = a.
LocalModel make_ou_model(int n_comp, double a, double t_hi);

// Stationary components r = exp(-a|s-t|^alpha), alpha in (0,2), a_i(t) = a.
LocalModel make_exp_alpha_model(int n_comp, double a, double alpha, double t_hi);

// The two edge-count scan-statistic components on a window inside (0,1);
// alpha = 1, a_1(t) = 1/(t(1-t)), a_2(t) = 1/(2t(1-t)).
LocalModel make_edge_count_model(double t_lo, double t_hi);

// Finite-difference probe of the local-stationarity ratio
// (1 - r(t, t+s)) / s^alpha along a decreasing s ladder.
struct StationarityProbe {
  std::vector<double> s_values;
  std::vector<double> ratios;
  double target = 0.0;     // a_i(t)
  double final_ratio = 0.0;
};
StationarityProbe probe_local_stationarity(const LocalModel& model, int component, double t,
                                           const std::vector<double>& s_ladder);

}  // namespace chix
