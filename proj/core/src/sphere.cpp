#include "chix/sphere.hpp"

#include <cmath>

#include "chix/errors.hpp"
#include "chix/rng.hpp"

namespace chix {

double sphere_area(int n) {
  if (n < 1) throw ParameterError("sphere_area: n must be >= 1");
  const double hn = 0.5 * static_cast<double>(n);
  return 2.0 * std::exp(hn * std::log(M_PI) - std::lgamma(hn));
}

SphereIntegral sphere_integral(int n, const std::function<double(const std::vector<double>&)>& f,
                               std::size_t resolution, std::uint64_t seed) {
  if (n < 1) throw ParameterError("sphere_integral: n must be >= 1");
  SphereIntegral out;

  if (n == 1) {
    std::vector<double> v(1);
    v[0] = 1.0;
    const double fp = f(v);
    v[0] = -1.0;
    const double fm = f(v);
    out.value = fp + fm;
    out.error_estimate = 0.0;
    out.evaluations = 2;
    return out;
  }

  if (n == 2) {
    if (resolution < 8) resolution = 8;
    if (resolution % 2) ++resolution;
    std::vector<double> v(2);
    auto trap = [&](std::size_t m, std::size_t stride_from, std::size_t stride) {
      // uniform angular nodes; periodic trapezoid = plain average * 2 pi
      double s = 0.0;
      for (std::size_t k = stride_from; k < resolution; k += stride) {
        const double th = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(resolution);
        v[0] = std::cos(th);
        v[1] = std::sin(th);
        s += f(v);
      }
      return s * 2.0 * M_PI / static_cast<double>(m);
    };
    const double full = trap(resolution, 0, 1);
    const double half = trap(resolution / 2, 0, 2);
    out.value = full;
    out.error_estimate = std::fabs(full - half);
    out.evaluations = resolution;
    return out;
  }

  // n >= 3: direction sampling v = z/|z|, z ~ N(0, I_n); E[f(v)] * area
  if (resolution < 64) resolution = 64;
  RngStream stream(seed, stream_id(0x53504852ULL, 0));
  std::vector<double> v(static_cast<std::size_t>(n));
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < resolution; ++i) {
    double norm2 = 0.0;
    for (auto& x : v) {
      x = stream.next_normal();
      norm2 += x * x;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
    const double fv = f(v);
    sum += fv;
    sumsq += fv * fv;
  }
  const double mean = sum / static_cast<double>(resolution);
  const double var = std::max(0.0, sumsq / static_cast<double>(resolution) - mean * mean);
  const double area = sphere_area(n);
  out.value = mean * area;
  out.error_estimate = area * std::sqrt(var / static_cast<double>(resolution));
  out.evaluations = resolution;
  return out;
}

}  // namespace chix
