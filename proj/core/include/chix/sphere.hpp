#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace chix {

struct SphereIntegral {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

// Surface area of S_{n-1} = {v in R^n : |v| = 1}: 2 pi^{n/2} / Gamma(n/2).
// n = 1 is the two-point sphere {-1, +1} with counting measure, area 2.
double sphere_area(int n);

// Integral of f over S_{n-1} with respect to surface measure.
//  n = 1: sum of the two point evaluations
//  n = 2: trapezoid in angle (spectrally accurate for smooth periodic f);
//         error estimated by comparing against half resolution
//  n >= 3: Monte Carlo with normalized Gaussian directions times the area
// `resolution` is the angular node count (n=2) or sample count (n>=3).
SphereIntegral sphere_integral(int n, const std::function<double(const std::vector<double>&)>& f,
                               std::size_t resolution = 256, std::uint64_t seed = 0x5048ULL);

}  // namespace chix
