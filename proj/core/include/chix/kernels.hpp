#pragma once

#include <functional>
#include <string>

namespace chix {

// Unit-variance correlation kernel r(s,t) on a time interval. k(t,t) must be 1
// and k symmetric; positive semidefiniteness is checked at factorization time.
struct CovKernel {
  std::function<double(double, double)> eval;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  std::string name;

  double operator()(double s, double t) const;
  bool contains(double t) const { return t >= domain_lo && t <= domain_hi; }
};

// Stationary Ornstein-Uhlenbeck correlation e^{-a|s-t|} (alpha = 1, local
// variance coefficient a).
CovKernel ou_kernel(double a, double domain_lo, double domain_hi);

// Stationary kernel exp(-a|s-t|^alpha), alpha in (0,2).
CovKernel exp_alpha_kernel(double a, double alpha, double domain_lo, double domain_hi);

// Edge-count scan statistic kernels on (0,1); `which` selects component 1 or 2.
CovKernel edge_count_kernel(int which);

}  // namespace chix
