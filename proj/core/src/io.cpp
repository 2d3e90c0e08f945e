#include "chix/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chix/errors.hpp"
#include "chix/mc_harness.hpp"
#include "chix/pickands.hpp"
#include "chix/pickands_table.hpp"
#include "chix/scanstat.hpp"
#include "chix/tail_asymptotics.hpp"
#include "chix/thread_pool.hpp"

namespace chix::io {

using nlohmann::json;

namespace {

void require_fields(const json& obj, const std::string& where,
                    const std::set<std::string>& required,
                    const std::set<std::string>& optional) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!required.count(it.key()) && !optional.count(it.key()))
      throw ParameterError(where + ": unknown field '" + it.key() + "'");
  }
  for (const auto& f : required)
    if (!obj.contains(f)) throw ParameterError(where + ": missing field '" + f + "'");
}

LocalModel model_from_json(const json& p) {
  require_fields(p, "params.model", {"family"},
                 {"n", "a", "alpha", "T", "t1", "t2"});
  const std::string family = p.at("family").get<std::string>();
  if (family == "ou")
    return make_ou_model(p.value("n", 1), p.value("a", 1.0), p.value("T", 1.0));
  if (family == "exp_alpha")
    return make_exp_alpha_model(p.value("n", 1), p.value("a", 1.0), p.value("alpha", 1.0),
                                p.value("T", 1.0));
  if (family == "edge_count")
    return make_edge_count_model(p.value("t1", 0.2), p.value("t2", 0.8));
  throw ParameterError("params.model.family: unknown family '" + family + "'");
}

json tail_to_json(const TailApproximation& t, double eta) {
  return json{{"u", t.u},
              {"eta", eta},
              {"convention", convention_name(t.convention)},
              {"sphere_integral", t.sphere_integral_mean},
              {"time_integral", t.time_integral},
              {"chisq_tail", t.chisq_tail},
              {"probability", t.probability},
              {"error_estimate", t.quadrature_error}};
}

json mc_to_json(const MCEstimate& e) {
  return json{{"probability", e.probability}, {"exceed_count", e.exceed_count},
              {"n_rep", e.n_rep},             {"ci_lo", e.ci.lo},
              {"ci_hi", e.ci.hi},             {"grid_points", e.grid_points},
              {"grid_spacing", e.grid_spacing}, {"jitter", e.jitter}};
}

json ladder_to_json(const std::vector<RungEstimate>& ladder) {
  json rows = json::array();
  for (const auto& r : ladder)
    rows.push_back(json{{"s", r.s},
                        {"value", r.value},
                        {"std_error", r.std_error},
                        {"model_std_error", r.model_std_error},
                        {"value_grid", r.value_grid},
                        {"n_rep", r.n_rep}});
  return rows;
}

PickandsTable build_table_for(double alpha, double eta, double a_lo, double a_hi,
                              double points_budget, unsigned threads, std::uint64_t seed,
                              const std::string& table_in, const std::string& table_out) {
  if (!table_in.empty()) return PickandsTable::load_csv(table_in);
  PickandsTableParams tp;
  tp.alpha = alpha;
  tp.eta = eta;
  tp.a_values = {a_lo, a_hi};
  tp.points_budget = points_budget;
  tp.n_threads = threads;
  PickandsTable table = build_pickands_table(tp, seed ^ 0x5441424CULL);
  if (!table_out.empty()) table.write_csv(table_out);
  return table;
}

std::string pickands_csv(const PickandsEstimate& est) {
  std::ostringstream out;
  out.precision(17);
  out << "# chix-pickands v1\n";
  out << "alpha,a,eta,S,estimate,std_error,n_rep\n";
  out << est.params.alpha << ',' << est.params.a << ',' << est.params.eta << ",0,"
      << est.value << ',' << est.std_error << ',' << est.params.n_rep << '\n';
  for (const auto& r : est.ladder)
    out << est.params.alpha << ',' << est.params.a << ',' << est.params.eta << ',' << r.s
        << ',' << r.value << ',' << r.std_error << ',' << r.n_rep << '\n';
  return out.str();
}

std::string comparison_csv(const ComparisonReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "# chix-comparison v1\n";
  out << "u,mc,ci_lo,ci_hi,conv_A,conv_B,ratio_A,ratio_B,dropped\n";
  for (const auto& r : rep.rungs)
    out << r.u << ',' << r.mc.probability << ',' << r.mc.ci.lo << ',' << r.mc.ci.hi << ','
        << r.formula_a << ',' << r.formula_b << ',' << r.ratio_a << ',' << r.ratio_b << ','
        << (r.dropped ? 1 : 0) << '\n';
  return out.str();
}

// Executes a validated config; returns the results object plus optional CSV
// side-car content.
json execute(const json& cfg, std::string* csv_out) {
  const std::string command = cfg.at("command").get<std::string>();
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const unsigned threads = cfg.value("threads", 0u);
  const json& p = cfg.at("params");

  if (command == "pickands") {
    require_fields(p, "params", {"alpha", "a", "eta", "n_rep"},
                   {"inner_step", "s_ladder"});
    PickandsParams pp;
    pp.alpha = p.at("alpha").get<double>();
    pp.a = p.at("a").get<double>();
    pp.eta = p.at("eta").get<double>();
    pp.inner_step = p.value("inner_step", 0.0);
    if (p.contains("s_ladder")) pp.s_ladder = p.at("s_ladder").get<std::vector<double>>();
    pp.n_rep = p.at("n_rep").get<std::uint64_t>();
    pp.n_threads = threads;
    const PickandsEstimate est = estimate_pickands(pp, seed);
    if (csv_out) *csv_out = pickands_csv(est);
    return json{{"value", est.value},
                {"std_error", est.std_error},
                {"value_last", est.value_last},
                {"std_error_last", est.std_error_last},
                {"delta_used", est.delta_used},
                {"fit_mode", est.fit_mode},
                {"ladder", ladder_to_json(est.ladder)}};
  }

  if (command == "tail") {
    require_fields(p, "params", {"model", "eta", "u"},
                   {"points_budget", "table_in", "table_out", "a_pad"});
    const LocalModel model = model_from_json(p.at("model"));
    const GridSpec grid{p.at("eta").get<double>()};
    const double u = p.at("u").get<double>();
    // cover the a-range the integrand visits, padded
    double a_lo = 1e300, a_hi = 0.0;
    for (int i = 0; i < model.n_comp; ++i) {
      for (int k = 0; k <= 32; ++k) {
        const double t = model.t_lo + (model.t_hi - model.t_lo) * k / 32.0;
        const double a = model.a_fns[static_cast<std::size_t>(i)](t);
        a_lo = std::min(a_lo, a);
        a_hi = std::max(a_hi, a);
      }
    }
    const double pad = p.value("a_pad", 1.1);
    const PickandsTable table =
        build_table_for(model.alpha, grid.eta, a_lo / pad, a_hi * pad,
                        p.value("points_budget", 2e8), threads, seed,
                        p.value("table_in", std::string{}), p.value("table_out", std::string{}));
    const TailApproximation ta =
        tail_formula(model, grid, u, table, Convention::RawSurface);
    const TailApproximation tb =
        tail_formula(model, grid, u, table, Convention::SphereAverage);
    return json{{"A", tail_to_json(ta, grid.eta)}, {"B", tail_to_json(tb, grid.eta)}};
  }

  if (command == "scanstat") {
    require_fields(p, "params", {"t1", "t2", "u", "n_rep"},
                   {"points_budget", "table_in", "table_out"});
    ScanWindow w{p.at("t1").get<double>(), p.at("t2").get<double>(), p.at("u").get<double>()};
    w.validate();
    const LocalModel model = make_edge_count_model(w.t1, w.t2);
    double a_lo = 1e300, a_hi = 0.0;
    for (int k = 0; k <= 64; ++k) {
      const double t = w.t1 + (w.t2 - w.t1) * k / 64.0;
      const auto c = local_variance_coeffs(t);
      a_lo = std::min(a_lo, c.a2);
      a_hi = std::max(a_hi, c.a1);
    }
    const PickandsTable table =
        build_table_for(1.0, 1.0, a_lo / 1.1, a_hi * 1.1, p.value("points_budget", 2e8),
                        threads, seed, p.value("table_in", std::string{}),
                        p.value("table_out", std::string{}));
    const ScanReport formula = pvalue_formula(w, table);
    const MCEstimate mc = pvalue_mc(w, p.at("n_rep").get<std::uint64_t>(), seed, threads);
    const double ra = formula.conv_a.probability / std::max(mc.probability, 1e-300);
    const double rb = formula.conv_b.probability / std::max(mc.probability, 1e-300);
    const std::string verdict = std::fabs(rb - 1.0) <= std::fabs(ra - 1.0) ? "B" : "A";
    return json{{"A", tail_to_json(formula.conv_a, 1.0)},
                {"B", tail_to_json(formula.conv_b, 1.0)},
                {"mc", mc_to_json(mc)},
                {"ratio_A", ra},
                {"ratio_B", rb},
                {"verdict", verdict}};
  }

  if (command == "mc") {
    require_fields(p, "params", {"model", "eta", "u", "n_rep"}, {});
    const LocalModel model = model_from_json(p.at("model"));
    const GridSpec grid{p.at("eta").get<double>()};
    const MCEstimate mc = sup_exceedance_mc(model, grid, p.at("u").get<double>(),
                                            p.at("n_rep").get<std::uint64_t>(), seed, threads);
    return json{{"mc", mc_to_json(mc)}};
  }

  if (command == "compare") {
    require_fields(p, "params", {"model", "eta", "u_values", "n_rep"},
                   {"points_budget", "table_in", "table_out", "a_pad"});
    const LocalModel model = model_from_json(p.at("model"));
    const GridSpec grid{p.at("eta").get<double>()};
    const std::vector<double> u_values = p.at("u_values").get<std::vector<double>>();
    double a_lo = 1e300, a_hi = 0.0;
    for (int i = 0; i < model.n_comp; ++i)
      for (int k = 0; k <= 32; ++k) {
        const double t = model.t_lo + (model.t_hi - model.t_lo) * k / 32.0;
        const double a = model.a_fns[static_cast<std::size_t>(i)](t);
        a_lo = std::min(a_lo, a);
        a_hi = std::max(a_hi, a);
      }
    const double pad = p.value("a_pad", 1.1);
    const PickandsTable table =
        build_table_for(model.alpha, grid.eta, a_lo / pad, a_hi * pad,
                        p.value("points_budget", 2e8), threads, seed,
                        p.value("table_in", std::string{}), p.value("table_out", std::string{}));
    const ComparisonReport rep = convergence_ladder(
        model, grid, u_values, p.at("n_rep").get<std::uint64_t>(), seed, table, threads);
    if (csv_out) *csv_out = comparison_csv(rep);
    json rungs = json::array();
    for (const auto& r : rep.rungs)
      rungs.push_back(json{{"u", r.u},
                           {"mc", mc_to_json(r.mc)},
                           {"conv_A", r.formula_a},
                           {"conv_B", r.formula_b},
                           {"ratio_A", r.ratio_a},
                           {"ratio_B", r.ratio_b},
                           {"dropped", r.dropped}});
    return json{{"rungs", rungs},
                {"verdict", convention_name(rep.verdict)},
                {"terminal_ratio_A", rep.terminal_ratio_a},
                {"terminal_ratio_B", rep.terminal_ratio_b},
                {"trend_improving_A", rep.trend_improving_a},
                {"trend_improving_B", rep.trend_improving_b},
                {"warnings", rep.warnings}};
  }

  throw ParameterError("command: unknown command '" + command + "'");
}

json validate_config(const std::string& text) {
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const std::exception& e) {
    throw ParameterError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ParameterError("config: expected a JSON object");
  require_fields(cfg, "config", {"version", "command", "seed", "params"},
                 {"threads", "output"});
  const std::string version = cfg.at("version").get<std::string>();
  if (version != kFormatVersion)
    throw ParameterError("config.version: got '" + version + "', expected '" +
                         std::string(kFormatVersion) + "'");
  if (!cfg.at("params").is_object()) throw ParameterError("config.params: expected an object");
  return cfg;
}

std::string canonical_payload(const json& cfg, const json& results) {
  json payload{{"config", cfg}, {"results", results}};
  return payload.dump();
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ResourceError("cannot open " + tmp);
    out << content;
    if (!out) throw ResourceError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ResourceError("atomic rename failed for " + path);
}

int run_config(const std::string& config_json, std::ostream& log, std::string* artifact_path) {
  try {
    const json cfg = validate_config(config_json);
    std::string csv;
    const json results = execute(cfg, &csv);

    const std::string out_base =
        cfg.value("output", std::string("chix_") + cfg.at("command").get<std::string>());
    json artifact{{"version", kFormatVersion},
                  {"library_version", kLibraryVersion},
                  {"config", cfg},
                  {"results", results}};
    artifact["checksum"] = fnv1a64(canonical_payload(cfg, results));
    write_text_file_atomic(out_base + ".json", artifact.dump(2) + "\n");
    if (!csv.empty()) write_text_file_atomic(out_base + ".csv", csv);
    if (artifact_path) *artifact_path = out_base + ".json";
    log << "wrote " << out_base << ".json" << (csv.empty() ? "" : " (+csv)") << "\n";
    return kExitOk;
  } catch (const ParameterError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ResourceError& e) {
    log << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const NumericalError& e) {
    log << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int replay(const std::string& artifact_path, std::ostream& log, unsigned thread_override) {
  try {
    json artifact;
    try {
      artifact = json::parse(read_text_file(artifact_path));
    } catch (const std::exception& e) {
      throw ParameterError(std::string("artifact: invalid JSON: ") + e.what());
    }
    for (const char* f : {"version", "config", "results", "checksum"})
      if (!artifact.contains(f))
        throw ParameterError(std::string("artifact: missing field '") + f + "'");
    const std::string version = artifact.at("version").get<std::string>();
    if (version != kFormatVersion)
      throw ParameterError("artifact version '" + version + "' is incompatible with '" +
                           std::string(kFormatVersion) + "'");

    json cfg = artifact.at("config");
    const json stored = artifact.at("results");
    const std::uint64_t stored_sum = artifact.at("checksum").get<std::uint64_t>();
    const std::uint64_t actual_sum = fnv1a64(canonical_payload(cfg, stored));
    if (stored_sum != actual_sum)
      throw ParameterError("artifact checksum mismatch: stored " + std::to_string(stored_sum) +
                           ", recomputed " + std::to_string(actual_sum) +
                           " (config or results were modified)");

    if (thread_override > 0) cfg["threads"] = thread_override;
    std::string csv;
    const json rerun = execute(cfg, &csv);
    if (rerun.dump() != stored.dump()) {
      log << "replay MISMATCH for " << artifact_path << "\n";
      log << "stored:   " << stored.dump() << "\n";
      log << "recomputed: " << rerun.dump() << "\n";
      return kExitNumerical;
    }
    log << "replay OK: results reproduce bit-exactly\n";
    return kExitOk;
  } catch (const ParameterError& e) {
    log << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ResourceError& e) {
    log << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const NumericalError& e) {
    log << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace chix::io
