#include "chix/tail_asymptotics.hpp"

#include <cmath>

#include "chix/errors.hpp"
#include "chix/sphere.hpp"

namespace chix {

std::string convention_name(Convention c) {
  return c == Convention::RawSurface ? "A" : "B";
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1]
constexpr double kGl7X[] = {0.0, 0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr double kGl7W[] = {0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
                            0.1294849661688697};
constexpr double kGl15X[] = {0.0,
                             0.2011940939974345,
                             0.3941513470775634,
                             0.5709721726085388,
                             0.7244177313601701,
                             0.8482065834104272,
                             0.9372733924007060,
                             0.9879925180204854};
constexpr double kGl15W[] = {0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
                             0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
                             0.0703660474881081, 0.0307532419961173};

struct PanelResult {
  double coarse;
  double fine;
};

PanelResult panel(const std::function<double(double)>& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double s7 = kGl7W[0] * f(c);
  for (int i = 1; i < 4; ++i)
    s7 += kGl7W[i] * (f(c - h * kGl7X[i]) + f(c + h * kGl7X[i]));
  double s15 = kGl15W[0] * f(c);
  for (int i = 1; i < 8; ++i)
    s15 += kGl15W[i] * (f(c - h * kGl15X[i]) + f(c + h * kGl15X[i]));
  return {s7 * h, s15 * h};
}

double adaptive_rec(const std::function<double(double)>& f, double lo, double hi, double tol,
                    int depth, int max_depth, double& err_acc) {
  const PanelResult p = panel(f, lo, hi);
  const double err = std::fabs(p.fine - p.coarse);
  if (depth >= max_depth || err <= tol * std::max(std::fabs(p.fine), 1e-300)) {
    err_acc += err;
    return p.fine;
  }
  const double mid = 0.5 * (lo + hi);
  return adaptive_rec(f, lo, mid, tol, depth + 1, max_depth, err_acc) +
         adaptive_rec(f, mid, hi, tol, depth + 1, max_depth, err_acc);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol, int max_depth, double* error_estimate) {
  if (!(hi >= lo)) throw ParameterError("integrate: hi must be >= lo");
  if (hi == lo) {
    if (error_estimate) *error_estimate = 0.0;
    return 0.0;
  }
  double err = 0.0;
  const double v = adaptive_rec(f, lo, hi, rel_tol, 0, max_depth, err);
  if (error_estimate) *error_estimate = err;
  return v;
}

TailApproximation tail_formula(const LocalModel& model, const GridSpec& grid, double u,
                                const PickandsTable& table, Convention convention,
                                TailMode tail_mode, const QuadratureOptions& opts) {
  model.validate();
  if (!(u > 0.0)) throw ParameterError("tail_formula: u must be positive");
  const double exact_tail = chi_square_tail(model.n_comp, u, TailMode::Exact);
  if (!(exact_tail < 0.5))
    throw ParameterError("tail_formula: u too small, chi-square tail >= 0.5");
  if (std::fabs(table.alpha() - model.alpha) > 1e-12)
    throw ParameterError("tail_formula: table alpha does not match model alpha");
  if (std::fabs(table.eta() - grid.eta) > 1e-12)
    throw ParameterError("tail_formula: table eta does not match grid spec");

  double sphere_err_max = 0.0;
  double table_err_max = 0.0;

  auto inner = [&](double t) {
    std::vector<double> a_of_t(static_cast<std::size_t>(model.n_comp));
    for (int i = 0; i < model.n_comp; ++i) {
      a_of_t[static_cast<std::size_t>(i)] = model.a_fns[static_cast<std::size_t>(i)](t);
      if (!(a_of_t[static_cast<std::size_t>(i)] > 0.0))
        throw ParameterError("tail_formula: a_" + std::to_string(i + 1) +
                             "(t) <= 0 at quadrature node t = " + std::to_string(t));
    }
    auto f = [&](const std::vector<double>& v) {
      double arg = 0.0;
      for (int i = 0; i < model.n_comp; ++i)
        arg += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)] *
               a_of_t[static_cast<std::size_t>(i)];
      const double h = table.value(arg);
      table_err_max = std::max(table_err_max, table.error(arg));
      return h;
    };
    const SphereIntegral si = sphere_integral(model.n_comp, f, opts.sphere_resolution);
    sphere_err_max = std::max(sphere_err_max, si.error_estimate);
    return si.value;
  };

  double time_err = 0.0;
  const double time_integral =
      integrate_adaptive(inner, model.t_lo, model.t_hi, opts.rel_tol, opts.max_depth, &time_err);

  TailApproximation out;
  out.u = u;
  out.u_factor = std::pow(u, 1.0 / model.alpha);
  out.tail_mode = tail_mode;
  out.convention = convention;
  out.chisq_tail = chi_square_tail(model.n_comp, u, tail_mode);
  out.time_integral = time_integral;
  const double span = model.t_hi - model.t_lo;
  out.sphere_integral_mean = span > 0.0 ? time_integral / span : 0.0;

  const double norm =
      convention == Convention::SphereAverage ? 1.0 / sphere_area(model.n_comp) : 1.0;
  out.raw_value = time_integral * norm * out.u_factor * out.chisq_tail;
  out.probability = std::min(1.0, std::max(0.0, out.raw_value));
  out.quadrature_error =
      (time_err + sphere_err_max * span + table_err_max * span) * norm * out.u_factor *
      out.chisq_tail;
  return out;
}

}  // namespace chix
