#include "chix/pickands_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chix/errors.hpp"

namespace chix {

namespace {

// Fritsch-Carlson monotone cubic slopes
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), s(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    s[i] = (y[i + 1] - y[i]) / h[i];
  }
  d[0] = s[0];
  d[n - 1] = s[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i - 1] * s[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
  }
  return d;
}

}  // namespace

double PickandsTable::interp(double ep, bool* have_gap, double* se) const {
  if (nodes_.empty()) throw ResourceError("pickands table: no nodes tabulated");
  const double lo = nodes_.front().eta_prime;
  const double hi = nodes_.back().eta_prime;
  if (ep < lo - 1e-12 || ep > hi + 1e-12)
    throw ResourceError("pickands table: eta' = " + std::to_string(ep) +
                        " outside tabulated range [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
  ep = std::clamp(ep, lo, hi);

  std::vector<double> xs, ys;
  xs.reserve(nodes_.size());
  for (const auto& nd : nodes_) {
    xs.push_back(nd.eta_prime);
    ys.push_back(nd.h);
  }
  std::vector<double> d = pchip_slopes(xs, ys);

  std::size_t i = 0;
  while (i + 2 < xs.size() && ep > xs[i + 1]) ++i;
  const double h = xs[i + 1] - xs[i];
  const double u = (ep - xs[i]) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  const double cubic = h00 * ys[i] + h10 * h * d[i] + h01 * ys[i + 1] + h11 * h * d[i + 1];
  const double lin = ys[i] + u * (ys[i + 1] - ys[i]);
  if (have_gap) *have_gap = true;
  if (se) {
    const double se_i = nodes_[i].std_error;
    const double se_j = nodes_[i + 1].std_error;
    *se = std::sqrt((1 - u) * (1 - u) * se_i * se_i + u * u * se_j * se_j) +
          std::fabs(cubic - lin);
  }
  return cubic;
}

double PickandsTable::value(double a) const {
  if (!(a > 0.0)) throw ParameterError("pickands table: a must be positive");
  const auto red = reduce_to_unit_scale(alpha_, a, eta_);
  if (eta_ == 0.0) return red.scale_factor * base0_.h;
  return red.scale_factor * interp(red.eta_prime, nullptr, nullptr);
}

double PickandsTable::error(double a) const {
  const auto red = reduce_to_unit_scale(alpha_, a, eta_);
  if (eta_ == 0.0) return red.scale_factor * base0_.std_error;
  double se = 0.0;
  interp(red.eta_prime, nullptr, &se);
  return red.scale_factor * se;
}

double PickandsTable::interp_error(double a) const {
  const auto red = reduce_to_unit_scale(alpha_, a, eta_);
  if (eta_ == 0.0) return 0.0;
  std::size_t i = 0;
  const double ep = red.eta_prime;
  std::vector<double> xs, ys;
  for (const auto& nd : nodes_) {
    xs.push_back(nd.eta_prime);
    ys.push_back(nd.h);
  }
  while (i + 2 < xs.size() && ep > xs[i + 1]) ++i;
  const double u = (ep - xs[i]) / (xs[i + 1] - xs[i]);
  const double lin = ys[i] + u * (ys[i + 1] - ys[i]);
  double se = 0.0;
  const double cubic = interp(ep, nullptr, &se);
  return std::fabs(cubic - lin);
}

PickandsTable build_pickands_table(const PickandsTableParams& params, std::uint64_t seed) {
  if (params.a_values.empty())
    throw ParameterError("pickands table: a_values must be nonempty");
  for (std::size_t i = 0; i < params.a_values.size(); ++i) {
    if (!(params.a_values[i] > 0.0))
      throw ParameterError("pickands table: a_values must be positive");
    if (i > 0 && params.a_values[i] < params.a_values[i - 1])
      throw ParameterError("pickands table: a_values must be sorted ascending");
  }
  if (params.eta < 0.0) throw ParameterError("pickands table: eta must be nonnegative");

  PickandsTable table;
  table.alpha_ = params.alpha;
  table.eta_ = params.eta;
  table.seed_ = seed;

  auto node_estimate = [&](double eta_prime, std::uint64_t node_idx) {
    PickandsParams pp;
    pp.alpha = params.alpha;
    pp.a = 1.0;
    pp.eta = eta_prime;
    pp.n_threads = params.n_threads;
    // n from the per-node point budget (short lattices afford more replicates)
    const double s_budget = std::max(16.0, 2.0 * eta_prime);
    const double step = eta_prime == 0.0 ? 0.0025 : eta_prime;
    const double path_points = s_budget / step + 1.0;
    const double n = std::clamp(params.points_budget / path_points,
                                static_cast<double>(params.n_rep_min),
                                static_cast<double>(params.n_rep_max));
    pp.n_rep = static_cast<std::uint64_t>(n);
    PickandsEstimate est = estimate_pickands(pp, seed + 0x9E37ULL * (node_idx + 1));
    PickandsTable::Node nd;
    nd.eta_prime = eta_prime;
    nd.h = est.value;
    nd.std_error = est.std_error;
    nd.ladder = est.ladder;
    return nd;
  };

  if (params.eta == 0.0) {
    table.base0_ = node_estimate(0.0, 0);
    return table;
  }

  const double a_lo = params.a_values.front();
  const double a_hi = params.a_values.back();
  const double ep_lo = reduce_to_unit_scale(params.alpha, a_lo, params.eta).eta_prime;
  const double ep_hi = reduce_to_unit_scale(params.alpha, a_hi, params.eta).eta_prime;
  const double pad = params.node_spacing;
  const double start = std::max(params.node_spacing,
                                std::floor((ep_lo - pad) / params.node_spacing) *
                                    params.node_spacing);
  std::uint64_t idx = 0;
  for (double ep = start; ep < ep_hi + pad + 0.5 * params.node_spacing;
       ep += params.node_spacing) {
    table.nodes_.push_back(node_estimate(ep, ++idx));
  }
  if (table.nodes_.size() < 2)
    table.nodes_.push_back(node_estimate(start + params.node_spacing, ++idx));
  return table;
}

void PickandsTable::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ResourceError("pickands table: cannot open " + path);
  out.precision(17);
  out << "# chix-pickands-table v1\n";
  out << "alpha,eta,eta_prime,S,estimate,std_error\n";
  auto dump_node = [&](const Node& nd) {
    // S = 0 row carries the extrapolated node value; S > 0 rows the ladder
    out << alpha_ << ',' << eta_ << ',' << nd.eta_prime << ",0," << nd.h << ','
        << nd.std_error << '\n';
    for (const auto& r : nd.ladder)
      out << alpha_ << ',' << eta_ << ',' << nd.eta_prime << ',' << r.s << ','
          << r.value << ',' << r.std_error << '\n';
  };
  if (eta_ == 0.0)
    dump_node(base0_);
  else
    for (const auto& nd : nodes_) dump_node(nd);
}

PickandsTable PickandsTable::from_nodes(double alpha, double eta, std::vector<Node> nodes) {
  PickandsTable table;
  table.alpha_ = alpha;
  table.eta_ = eta;
  if (eta == 0.0) {
    if (nodes.size() != 1)
      throw ParameterError("pickands table: eta = 0 takes exactly one base node");
    table.base0_ = nodes.front();
    return table;
  }
  if (nodes.size() < 2)
    throw ParameterError("pickands table: need at least two nodes for eta > 0");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i].eta_prime > nodes[i - 1].eta_prime))
      throw ParameterError("pickands table: nodes must be sorted by eta_prime");
  table.nodes_ = std::move(nodes);
  return table;
}

PickandsTable PickandsTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("pickands table: cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != "# chix-pickands-table v1")
    throw ResourceError("pickands table: unsupported format tag '" + line + "'");
  std::getline(in, line);  // column header
  PickandsTable table;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    double vals[6];
    for (int i = 0; i < 6; ++i) {
      if (!std::getline(ss, tok, ',')) throw ResourceError("pickands table: malformed row");
      vals[i] = std::stod(tok);
    }
    if (first) {
      table.alpha_ = vals[0];
      table.eta_ = vals[1];
      first = false;
    }
    if (vals[3] == 0.0) {  // extrapolated node row
      Node nd;
      nd.eta_prime = vals[2];
      nd.h = vals[4];
      nd.std_error = vals[5];
      if (table.eta_ == 0.0)
        table.base0_ = nd;
      else
        table.nodes_.push_back(nd);
    }
  }
  std::sort(table.nodes_.begin(), table.nodes_.end(),
            [](const Node& a, const Node& b) { return a.eta_prime < b.eta_prime; });
  return table;
}

}  // namespace chix
