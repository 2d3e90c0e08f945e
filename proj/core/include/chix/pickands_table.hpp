#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chix/pickands.hpp"

namespace chix {

struct PickandsTableParams;
class PickandsTable;
PickandsTable build_pickands_table(const PickandsTableParams& params, std::uint64_t seed);

// Precomputed curve eta' -> H^{eta'}_alpha(1). Queries for H^eta_alpha(a) go
// through the self-similarity reduction eta' = eta * a^(1/alpha) and monotone
// cubic interpolation in eta'. For eta == 0 a single base estimate H^0_alpha(1)
// serves every a exactly (pure scaling); no interpolation is involved.
class PickandsTable {
 public:
  struct Node {
    double eta_prime = 0.0;
    double h = 0.0;
    double std_error = 0.0;
    std::vector<RungEstimate> ladder;
  };

  double alpha() const { return alpha_; }
  double eta() const { return eta_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  // H^eta_alpha(a); throws ResourceError when eta*a^(1/alpha) is outside the
  // tabulated range (no silent extrapolation).
  double value(double a) const;
  // propagated MC std error plus interpolation error estimate
  double error(double a) const;
  double interp_error(double a) const;

  void write_csv(const std::string& path) const;
  static PickandsTable load_csv(const std::string& path);

  // Assemble a table from precomputed node values (deserialization path,
  // also handy for synthetic tables in tests). Nodes must be sorted by
  // eta_prime; pass a single eta_prime = 0 node when eta == 0.
  static PickandsTable from_nodes(double alpha, double eta, std::vector<Node> nodes);

  friend PickandsTable build_pickands_table(const PickandsTableParams& params,
                                            std::uint64_t seed);

 private:
  double alpha_ = 1.0;
  double eta_ = 0.0;
  std::vector<Node> nodes_;       // sorted by eta_prime (eta > 0)
  Node base0_;                    // eta == 0 case
  std::uint64_t seed_ = 0;

  double interp(double ep, bool* linear_vs_cubic_gap, double* se) const;
};

struct PickandsTableParams {
  double alpha = 1.0;
  double eta = 0.0;
  std::vector<double> a_values;   // query range the table must cover
  double node_spacing = 0.25;     // eta' node spacing
  double points_budget = 4e8;     // per-node n_rep = budget / path length
  std::uint64_t n_rep_min = 200000;
  std::uint64_t n_rep_max = 300000000;
  unsigned n_threads = 0;
};

}  // namespace chix
