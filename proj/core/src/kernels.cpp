#include "chix/kernels.hpp"

#include <cmath>

#include "chix/errors.hpp"

namespace chix {

double CovKernel::operator()(double s, double t) const {
  if (!contains(s) || !contains(t))
    throw ParameterError("kernel '" + name + "': point outside domain [" +
                         std::to_string(domain_lo) + ", " + std::to_string(domain_hi) + "]");
  return eval(s, t);
}

CovKernel ou_kernel(double a, double domain_lo, double domain_hi) {
  if (!(a > 0.0)) throw ParameterError("ou_kernel: a must be positive");
  CovKernel k;
  k.eval = [a](double s, double t) { return std::exp(-a * std::fabs(s - t)); };
  k.domain_lo = domain_lo;
  k.domain_hi = domain_hi;
  k.name = "ou(a=" + std::to_string(a) + ")";
  return k;
}

CovKernel exp_alpha_kernel(double a, double alpha, double domain_lo, double domain_hi) {
  if (!(a > 0.0)) throw ParameterError("exp_alpha_kernel: a must be positive");
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw ParameterError("exp_alpha_kernel: alpha must be in (0,2)");
  CovKernel k;
  k.eval = [a, alpha](double s, double t) {
    return std::exp(-a * std::pow(std::fabs(s - t), alpha));
  };
  k.domain_lo = domain_lo;
  k.domain_hi = domain_hi;
  k.name = "exp_alpha(a=" + std::to_string(a) + ",alpha=" + std::to_string(alpha) + ")";
  return k;
}

CovKernel edge_count_kernel(int which) {
  if (which != 1 && which != 2) throw ParameterError("edge_count_kernel: which must be 1 or 2");
  CovKernel k;
  if (which == 1) {
    k.eval = [](double s, double t) {
      const double lo = std::min(s, t), hi = std::max(s, t);
      return lo * (1.0 - hi) / (hi * (1.0 - lo));
    };
  } else {
    k.eval = [](double s, double t) {
      const double lo = std::min(s, t), hi = std::max(s, t);
      return lo * (1.0 - hi) / std::sqrt(lo * (1.0 - lo) * hi * (1.0 - hi));
    };
  }
  // open interval: the kernels are singular at 0 and 1
  k.domain_lo = 1e-12;
  k.domain_hi = 1.0 - 1e-12;
  k.name = "edge_count_" + std::to_string(which);
  return k;
}

}  // namespace chix
