#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chix/io.hpp"

using namespace chix;
using nlohmann::json;

namespace {

json tiny_pickands_cfg(const std::string& out) {
  return json{{"version", "1"},
              {"command", "pickands"},
              {"seed", 7},
              {"threads", 1},
              {"output", out},
              {"params",
               json{{"alpha", 2.0}, {"a", 1.0}, {"eta", 0.0}, {"inner_step", 0.02},
                    {"s_ladder", {1.5, 2.0, 2.5}}, {"n_rep", 4000}}}};
}

std::string slurp(const std::string& p) { return io::read_text_file(p); }

}  // namespace

TEST_CASE("run_config writes artifact + csv and validates fields") {
  std::ostringstream log;
  const std::string base = "io_test_pk";
  std::string artifact;
  const int rc = io::run_config(tiny_pickands_cfg(base).dump(), log, &artifact);
  CHECK(rc == io::kExitOk);
  CHECK(artifact == base + ".json");

  json art = json::parse(slurp(artifact));
  CHECK(art.at("version") == "1");
  CHECK(art.contains("checksum"));
  CHECK(art.at("config").at("command") == "pickands");
  CHECK(art.at("results").contains("value"));
  CHECK(art.at("results").at("ladder").size() == 3);

  // csv side-car with the versioned header
  const std::string csv = slurp(base + ".csv");
  CHECK(csv.rfind("# chix-pickands v1\n", 0) == 0);
  CHECK(csv.find("alpha,a,eta,S,estimate,std_error,n_rep") != std::string::npos);

  // no leftover temp files from the atomic writes
  std::ifstream tmp(base + ".json.tmp");
  CHECK_FALSE(tmp.good());
}

TEST_CASE("unknown and missing fields are rejected with the field name") {
  std::ostringstream log;
  json cfg = tiny_pickands_cfg("io_test_bad");
  cfg["params"]["bogus_knob"] = 1;
  CHECK(io::run_config(cfg.dump(), log, nullptr) == io::kExitValidation);
  CHECK(log.str().find("bogus_knob") != std::string::npos);

  json cfg2 = tiny_pickands_cfg("io_test_bad2");
  cfg2.erase("seed");
  std::ostringstream log2;
  CHECK(io::run_config(cfg2.dump(), log2, nullptr) == io::kExitValidation);
  CHECK(log2.str().find("seed") != std::string::npos);

  json cfg3 = tiny_pickands_cfg("io_test_bad3");
  cfg3["version"] = "99";
  std::ostringstream log3;
  CHECK(io::run_config(cfg3.dump(), log3, nullptr) == io::kExitValidation);
}

TEST_CASE("invalid parameter values exit 2 without artifacts") {
  std::ostringstream log;
  json cfg = tiny_pickands_cfg("io_test_noart");
  cfg["params"]["alpha"] = 3.0;
  CHECK(io::run_config(cfg.dump(), log, nullptr) == io::kExitValidation);
  std::ifstream f("io_test_noart.json");
  CHECK_FALSE(f.good());
}

TEST_CASE("replay reproduces bit-exactly across thread counts") {
  std::ostringstream log;
  std::string artifact;
  json cfg = tiny_pickands_cfg("io_test_replay");
  REQUIRE(io::run_config(cfg.dump(), log, &artifact) == io::kExitOk);

  for (unsigned threads : {1u, 4u, 8u}) {
    std::ostringstream rlog;
    CHECK(io::replay(artifact, rlog, threads) == io::kExitOk);
  }
}

TEST_CASE("tampered artifacts fail the checksum") {
  std::ostringstream log;
  std::string artifact;
  json cfg = tiny_pickands_cfg("io_test_tamper");
  REQUIRE(io::run_config(cfg.dump(), log, &artifact) == io::kExitOk);

  json art = json::parse(slurp(artifact));
  art["config"]["seed"] = 8;  // tamper
  io::write_text_file_atomic(artifact, art.dump(2));
  std::ostringstream rlog;
  CHECK(io::replay(artifact, rlog, 0) == io::kExitValidation);
  CHECK(rlog.str().find("checksum") != std::string::npos);

  // version incompatibility is its own explicit error
  art = json::parse(slurp(artifact));
  art["version"] = "0";
  io::write_text_file_atomic(artifact, art.dump(2));
  std::ostringstream vlog;
  CHECK(io::replay(artifact, vlog, 0) == io::kExitValidation);
  CHECK(vlog.str().find("incompatible") != std::string::npos);
}

TEST_CASE("golden schema: artifact field set is stable under the version tag") {
  std::ostringstream log;
  std::string artifact;
  REQUIRE(io::run_config(tiny_pickands_cfg("io_test_schema").dump(), log, &artifact) ==
          io::kExitOk);
  json art = json::parse(slurp(artifact));
  // frozen field lists; extending them requires a version bump
  const std::vector<std::string> top = {"checksum", "config", "library_version", "results",
                                        "version"};
  std::vector<std::string> got;
  for (auto it = art.begin(); it != art.end(); ++it) got.push_back(it.key());
  CHECK(got == top);
  const std::vector<std::string> res = {"delta_used",     "fit_mode", "ladder",
                                        "std_error",      "value",    "std_error_last",
                                        "value_last"};
  json r = art.at("results");
  std::size_t found = 0;
  for (const auto& key : res) found += r.contains(key) ? 1 : 0;
  CHECK(found == res.size());
}

TEST_CASE("fnv checksum is stable") {
  CHECK(io::fnv1a64("") == 0xCBF29CE484222325ULL);
  CHECK(io::fnv1a64("a") != io::fnv1a64("b"));
}
