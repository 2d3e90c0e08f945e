// chix: tail asymptotics of locally-stationary chi-square processes on
// discrete grids. Subcommands evaluate the asymptotic formula, estimate the
// Pickands constants it needs, and validate both against direct simulation.
//
// Every run resolves to a declarative config (JSON); flags override config
// file values; artifacts embed the resolved config so `chix replay` can
// reproduce any result bit-exactly.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chix/io.hpp"

using nlohmann::json;

namespace {

struct Common {
  std::string config_file;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string output;
};

json base_config(const Common& c, const std::string& command, CLI::App* sub) {
  json cfg;
  if (!c.config_file.empty()) {
    cfg = json::parse(chix::io::read_text_file(c.config_file));
  } else {
    cfg = json{{"version", chix::io::kFormatVersion},
               {"command", command},
               {"seed", c.seed},
               {"params", json::object()}};
  }
  if (sub->count("--seed")) cfg["seed"] = c.seed;
  if (sub->count("--threads") || !cfg.contains("threads")) cfg["threads"] = c.threads;
  if (sub->count("--output"))
    cfg["output"] = c.output;
  else if (!cfg.contains("output"))
    cfg["output"] = "chix_" + command;
  return cfg;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_file, "config file (JSON); flags override its values");
  sub->add_option("--seed", c.seed, "master RNG seed");
  sub->add_option("--threads", c.threads, "worker threads (0 = CHIX_THREADS env or hardware)");
  sub->add_option("--output", c.output, "output path base (writes <base>.json [+ <base>.csv])");
}

int run(const json& cfg) {
  return chix::io::run_config(cfg.dump(), std::cout, nullptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extremes of locally-stationary chi-square processes on discrete grids"};
  app.require_subcommand(1);

  // ---- pickands ----
  Common pc;
  double p_alpha = 1.0, p_a = 1.0, p_eta = 0.0, p_step = 0.0;
  std::vector<double> p_ladder;
  std::uint64_t p_nrep = 200000;
  auto* sp = app.add_subcommand("pickands", "estimate the Pickands constant H^eta_alpha(a)");
  add_common(sp, pc);
  sp->add_option("--alpha", p_alpha, "structure exponent in (0,2]");
  sp->add_option("--a", p_a, "local-variance scale");
  sp->add_option("--eta", p_eta, "grid spacing (0 = continuous limit)");
  sp->add_option("--inner-step", p_step, "delta grid for eta = 0 (0 = auto rule)");
  sp->add_option("--s-ladder", p_ladder, "horizon ladder (default: auto)");
  sp->add_option("--n-rep", p_nrep, "replicates for primary rungs");

  // ---- tail ----
  Common tc;
  std::string t_family = "ou";
  int t_n = 2;
  double t_a = 1.0, t_alpha = 1.0, t_T = 1.0, t_t1 = 0.2, t_t2 = 0.8, t_eta = 1.0, t_u = 20.0,
         t_budget = 2e8;
  std::string t_table_in, t_table_out;
  auto* st = app.add_subcommand("tail", "evaluate the tail asymptotics formula");
  add_common(st, tc);
  st->add_option("--family", t_family, "model family: ou | exp_alpha | edge_count");
  st->add_option("--n", t_n, "component count");
  st->add_option("--a", t_a, "local-variance scale (stationary families)");
  st->add_option("--alpha", t_alpha, "structure exponent (exp_alpha family)");
  st->add_option("--T", t_T, "time horizon");
  st->add_option("--t1", t_t1, "window start (edge_count)");
  st->add_option("--t2", t_t2, "window end (edge_count)");
  st->add_option("--eta", t_eta, "limit grid constant");
  st->add_option("--u", t_u, "threshold");
  st->add_option("--points-budget", t_budget, "per-node sampling budget for the Pickands table");
  st->add_option("--table-in", t_table_in, "load Pickands table CSV instead of building");
  st->add_option("--table-out", t_table_out, "persist the built Pickands table CSV");

  // ---- scanstat ----
  Common sc;
  double s_t1 = 0.2, s_t2 = 0.8, s_u = 20.0, s_budget = 2e8;
  std::uint64_t s_nrep = 1000000;
  std::string s_table_in, s_table_out;
  auto* ss = app.add_subcommand("scanstat", "edge-count scan statistic p-value (formula and MC)");
  add_common(ss, sc);
  ss->add_option("--t1", s_t1, "window start in (0,1)");
  ss->add_option("--t2", s_t2, "window end in (0,1)");
  ss->add_option("--u", s_u, "threshold");
  ss->add_option("--n-rep", s_nrep, "MC replicates");
  ss->add_option("--points-budget", s_budget, "per-node sampling budget for the Pickands table");
  ss->add_option("--table-in", s_table_in, "load Pickands table CSV");
  ss->add_option("--table-out", s_table_out, "persist Pickands table CSV");

  // ---- mc ----
  Common mc;
  std::string m_family = "ou";
  int m_n = 2;
  double m_a = 1.0, m_alpha = 1.0, m_T = 1.0, m_t1 = 0.2, m_t2 = 0.8, m_eta = 1.0, m_u = 20.0;
  std::uint64_t m_nrep = 1000000;
  auto* sm = app.add_subcommand("mc", "direct sup-exceedance Monte Carlo");
  add_common(sm, mc);
  sm->add_option("--family", m_family, "ou | exp_alpha | edge_count");
  sm->add_option("--n", m_n, "component count");
  sm->add_option("--a", m_a, "local-variance scale");
  sm->add_option("--alpha", m_alpha, "structure exponent (exp_alpha)");
  sm->add_option("--T", m_T, "time horizon (stationary families)");
  sm->add_option("--t1", m_t1, "window start (edge_count)");
  sm->add_option("--t2", m_t2, "window end (edge_count)");
  sm->add_option("--eta", m_eta, "limit grid constant");
  sm->add_option("--u", m_u, "threshold");
  sm->add_option("--n-rep", m_nrep, "replicates");

  // ---- compare ----
  Common cc;
  std::string c_family = "ou";
  int c_n = 2;
  double c_a = 1.0, c_alpha = 1.0, c_T = 1.0, c_t1 = 0.2, c_t2 = 0.8, c_eta = 1.0,
         c_budget = 2e8;
  std::vector<double> c_u = {12.0, 16.0, 20.0};
  std::uint64_t c_nrep = 1000000;
  std::string c_table_in, c_table_out;
  auto* scmp = app.add_subcommand("compare", "formula-vs-MC ladder and convention verdict");
  add_common(scmp, cc);
  scmp->add_option("--family", c_family, "ou | exp_alpha | edge_count");
  scmp->add_option("--n", c_n, "component count");
  scmp->add_option("--a", c_a, "local-variance scale");
  scmp->add_option("--alpha", c_alpha, "structure exponent (exp_alpha)");
  scmp->add_option("--T", c_T, "time horizon");
  scmp->add_option("--t1", c_t1, "window start (edge_count)");
  scmp->add_option("--t2", c_t2, "window end (edge_count)");
  scmp->add_option("--eta", c_eta, "limit grid constant");
  scmp->add_option("--u-values", c_u, "increasing threshold ladder");
  scmp->add_option("--n-rep", c_nrep, "MC replicates per rung");
  scmp->add_option("--points-budget", c_budget, "Pickands table budget");
  scmp->add_option("--table-in", c_table_in, "load Pickands table CSV");
  scmp->add_option("--table-out", c_table_out, "persist Pickands table CSV");

  // ---- replay ----
  std::string r_artifact;
  unsigned r_threads = 0;
  auto* sr = app.add_subcommand("replay", "re-execute an artifact and verify bit-exact results");
  sr->add_option("artifact", r_artifact, "artifact JSON path")->required();
  sr->add_option("--threads", r_threads, "override worker count (results must not change)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sp->parsed()) {
      json cfg = base_config(pc, "pickands", sp);
      json& p = cfg["params"];
      if (sp->count("--alpha") || !p.contains("alpha")) p["alpha"] = p_alpha;
      if (sp->count("--a") || !p.contains("a")) p["a"] = p_a;
      if (sp->count("--eta") || !p.contains("eta")) p["eta"] = p_eta;
      if (sp->count("--inner-step")) p["inner_step"] = p_step;
      if (sp->count("--s-ladder")) p["s_ladder"] = p_ladder;
      if (sp->count("--n-rep") || !p.contains("n_rep")) p["n_rep"] = p_nrep;
      return run(cfg);
    }
    if (st->parsed()) {
      json cfg = base_config(tc, "tail", st);
      json& p = cfg["params"];
      json model{{"family", t_family}};
      if (t_family == "edge_count") {
        model["t1"] = t_t1;
        model["t2"] = t_t2;
      } else {
        model["n"] = t_n;
        model["a"] = t_a;
        model["T"] = t_T;
        if (t_family == "exp_alpha") model["alpha"] = t_alpha;
      }
      if (st->count("--family") || !p.contains("model")) p["model"] = model;
      if (st->count("--eta") || !p.contains("eta")) p["eta"] = t_eta;
      if (st->count("--u") || !p.contains("u")) p["u"] = t_u;
      if (st->count("--points-budget") || !p.contains("points_budget"))
        p["points_budget"] = t_budget;
      if (st->count("--table-in")) p["table_in"] = t_table_in;
      if (st->count("--table-out")) p["table_out"] = t_table_out;
      return run(cfg);
    }
    if (ss->parsed()) {
      json cfg = base_config(sc, "scanstat", ss);
      json& p = cfg["params"];
      if (ss->count("--t1") || !p.contains("t1")) p["t1"] = s_t1;
      if (ss->count("--t2") || !p.contains("t2")) p["t2"] = s_t2;
      if (ss->count("--u") || !p.contains("u")) p["u"] = s_u;
      if (ss->count("--n-rep") || !p.contains("n_rep")) p["n_rep"] = s_nrep;
      if (ss->count("--points-budget") || !p.contains("points_budget"))
        p["points_budget"] = s_budget;
      if (ss->count("--table-in")) p["table_in"] = s_table_in;
      if (ss->count("--table-out")) p["table_out"] = s_table_out;
      return run(cfg);
    }
    if (sm->parsed()) {
      json cfg = base_config(mc, "mc", sm);
      json& p = cfg["params"];
      json model{{"family", m_family}};
      if (m_family == "edge_count") {
        model["t1"] = m_t1;
        model["t2"] = m_t2;
      } else {
        model["n"] = m_n;
        model["a"] = m_a;
        model["T"] = m_T;
        if (m_family == "exp_alpha") model["alpha"] = m_alpha;
      }
      if (sm->count("--family") || !p.contains("model")) p["model"] = model;
      if (sm->count("--eta") || !p.contains("eta")) p["eta"] = m_eta;
      if (sm->count("--u") || !p.contains("u")) p["u"] = m_u;
      if (sm->count("--n-rep") || !p.contains("n_rep")) p["n_rep"] = m_nrep;
      return run(cfg);
    }
    if (scmp->parsed()) {
      json cfg = base_config(cc, "compare", scmp);
      json& p = cfg["params"];
      json model{{"family", c_family}};
      if (c_family == "edge_count") {
        model["t1"] = c_t1;
        model["t2"] = c_t2;
      } else {
        model["n"] = c_n;
        model["a"] = c_a;
        model["T"] = c_T;
        if (c_family == "exp_alpha") model["alpha"] = c_alpha;
      }
      if (scmp->count("--family") || !p.contains("model")) p["model"] = model;
      if (scmp->count("--eta") || !p.contains("eta")) p["eta"] = c_eta;
      if (scmp->count("--u-values") || !p.contains("u_values")) p["u_values"] = c_u;
      if (scmp->count("--n-rep") || !p.contains("n_rep")) p["n_rep"] = c_nrep;
      if (scmp->count("--points-budget") || !p.contains("points_budget"))
        p["points_budget"] = c_budget;
      if (scmp->count("--table-in")) p["table_in"] = c_table_in;
      if (scmp->count("--table-out")) p["table_out"] = c_table_out;
      return run(cfg);
    }
    if (sr->parsed()) {
      return chix::io::replay(r_artifact, std::cout, r_threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return chix::io::kExitValidation;
  }
  return 0;
}
