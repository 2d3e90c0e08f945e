#pragma once

namespace chix {

enum class TailMode { Exact, Asymptotic };

// P(chi^2_n > u). Exact mode is the regularized upper incomplete gamma
// Q(n/2, u/2); asymptotic mode is u^{n/2-1} e^{-u/2} / (2^{n/2-1} Gamma(n/2)).
double chi_square_tail(int n, double u, TailMode mode = TailMode::Exact);

// Regularized upper incomplete gamma Q(s, x), |rel err| < 1e-13 for the
// parameter range used here (series for x < s+1, continued fraction above).
double regularized_gamma_q(double s, double x);

}  // namespace chix
