#include "chix/chi_square.hpp"

#include <cmath>
#include <limits>

#include "chix/errors.hpp"

namespace chix {

namespace {

// lower-gamma series: P(s,x) = x^s e^-x / Gamma(s) * sum x^k / (s (s+1)...(s+k))
double gamma_p_series(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16)
      return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
  }
  throw NumericalError("regularized_gamma: series failed to converge");
}

// upper-gamma continued fraction (modified Lentz)
double gamma_q_cf(double s, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16)
      return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
  }
  throw NumericalError("regularized_gamma: continued fraction failed to converge");
}

}  // namespace

double regularized_gamma_q(double s, double x) {
  if (!(s > 0.0)) throw ParameterError("regularized_gamma_q: s must be positive");
  if (x < 0.0) throw ParameterError("regularized_gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double chi_square_tail(int n, double u, TailMode mode) {
  if (n < 1) throw ParameterError("chi_square_tail: n must be >= 1");
  if (!(u > 0.0)) throw ParameterError("chi_square_tail: u must be positive");
  const double half_n = 0.5 * static_cast<double>(n);
  if (mode == TailMode::Exact) return regularized_gamma_q(half_n, 0.5 * u);
  // u^{n/2-1} e^{-u/2} / (2^{n/2-1} Gamma(n/2))
  return std::exp((half_n - 1.0) * std::log(u) - 0.5 * u -
                  (half_n - 1.0) * std::log(2.0) - std::lgamma(half_n));
}

}  // namespace chix
