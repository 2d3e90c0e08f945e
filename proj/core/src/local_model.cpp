#include "chix/local_model.hpp"

#include <cmath>

#include "chix/errors.hpp"
#include "chix/scanstat.hpp"

namespace chix {

void LocalModel::validate() const {
  if (n_comp < 1) throw ParameterError("model: n must be >= 1");
  if (!(alpha > 0.0) || alpha > 2.0) throw ParameterError("model: alpha must be in (0,2]");
  if (!(t_hi > t_lo)) throw ParameterError("model: time interval must be nondegenerate");
  if (a_fns.size() != static_cast<std::size_t>(n_comp) ||
      kernels.size() != static_cast<std::size_t>(n_comp))
    throw ParameterError("model: need one a_i and one kernel per component");
  const double mid = 0.5 * (t_lo + t_hi);
  for (int i = 0; i < n_comp; ++i) {
    if (!(a_fns[i](mid) > 0.0))
      throw ParameterError("model: a_" + std::to_string(i + 1) + " must be positive");
    if (std::fabs(kernels[i](mid, mid) - 1.0) > 1e-12)
      throw ParameterError("model: kernel " + std::to_string(i + 1) + " must have unit diagonal");
  }
}

LocalModel make_ou_model(int n_comp, double a, double t_hi) {
  LocalModel m;
  m.n_comp = n_comp;
  m.alpha = 1.0;
  m.t_lo = 0.0;
  m.t_hi = t_hi;
  m.name = "ou(n=" + std::to_string(n_comp) + ",a=" + std::to_string(a) + ")";
  for (int i = 0; i < n_comp; ++i) {
    m.a_fns.push_back([a](double) { return a; });
    m.kernels.push_back(ou_kernel(a, 0.0, t_hi));
  }
  m.validate();
  return m;
}

LocalModel make_exp_alpha_model(int n_comp, double a, double alpha, double t_hi) {
  LocalModel m;
  m.n_comp = n_comp;
  m.alpha = alpha;
  m.t_lo = 0.0;
  m.t_hi = t_hi;
  m.name = "exp_alpha(n=" + std::to_string(n_comp) + ",a=" + std::to_string(a) +
           ",alpha=" + std::to_string(alpha) + ")";
  for (int i = 0; i < n_comp; ++i) {
    m.a_fns.push_back([a](double) { return a; });
    m.kernels.push_back(exp_alpha_kernel(a, alpha, 0.0, t_hi));
  }
  m.validate();
  return m;
}

LocalModel make_edge_count_model(double t_lo, double t_hi) {
  if (!(0.0 < t_lo) || !(t_lo < t_hi) || !(t_hi < 1.0))
    throw ParameterError("edge-count model: need 0 < T1 < T2 < 1");
  LocalModel m;
  m.n_comp = 2;
  m.alpha = 1.0;
  m.t_lo = t_lo;
  m.t_hi = t_hi;
  m.name = "edge_count";
  m.a_fns.push_back([](double t) { return local_variance_coeffs(t).a1; });
  m.a_fns.push_back([](double t) { return local_variance_coeffs(t).a2; });
  m.kernels.push_back(edge_count_kernel(1));
  m.kernels.push_back(edge_count_kernel(2));
  m.validate();
  return m;
}

StationarityProbe probe_local_stationarity(const LocalModel& model, int component, double t,
                                           const std::vector<double>& s_ladder) {
  model.validate();
  if (component < 1 || component > model.n_comp)
    throw ParameterError("stationarity probe: component out of range");
  if (s_ladder.empty()) throw ParameterError("stationarity probe: s ladder must be nonempty");
  for (std::size_t i = 0; i < s_ladder.size(); ++i) {
    if (!(s_ladder[i] > 0.0))
      throw ParameterError("stationarity probe: s values must be positive");
    if (i > 0 && !(s_ladder[i] < s_ladder[i - 1]))
      throw ParameterError("stationarity probe: s ladder must be decreasing");
  }
  const CovKernel& k = model.kernels[static_cast<std::size_t>(component - 1)];
  StationarityProbe probe;
  probe.target = model.a_fns[static_cast<std::size_t>(component - 1)](t);
  for (double s : s_ladder) {
    if (!k.contains(t) || !k.contains(t + s))
      throw ParameterError("stationarity probe: t + s leaves the kernel domain");
    probe.s_values.push_back(s);
    probe.ratios.push_back((1.0 - k(t, t + s)) / std::pow(s, model.alpha));
  }
  probe.final_ratio = probe.ratios.back();
  return probe;
}

}  // namespace chix
