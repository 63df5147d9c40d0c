#include <catch2/catch_amalgamated.hpp>

#include "deconv/experiment.hpp"

#include <filesystem>
#include <fstream>

using namespace deconv;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}
}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.scenario = Scenario::s_index;
  c.noise = "stable(1.5)";
  c.n_list = {1000, 500};
  CHECK_THROWS_AS(c.validate(), ParamError);
  c.n_list = {};
  CHECK_THROWS_AS(c.validate(), ParamError);
  c.n_list = {500, 1000};
  c.reps = 0;
  CHECK_THROWS_AS(c.validate(), ParamError);
  c.reps = 10;
  c.eps = 1.5;
  CHECK_THROWS_AS(c.validate(), ParamError);
  c.eps = 0.1;
  CHECK_NOTHROW(c.validate());
  c.f = "bogus(1)";
  CHECK_THROWS_AS(c.validate(), ParamError);
}

TEST_CASE("config json round trip and field errors") {
  ExperimentConfig c;
  c.scenario = Scenario::clt;
  c.n_list = {200, 800};
  c.seed = 99;
  auto text = c.to_json_string();
  auto back = ExperimentConfig::from_json_string(text);
  CHECK(back.scenario == Scenario::clt);
  CHECK(back.n_list == c.n_list);
  CHECK(back.seed == 99);

  CHECK_THROWS_AS(ExperimentConfig::from_json_string("{nope"), ParamError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_string(R"({"reps":"ten"})"),
                  ParamError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_string(R"({"scenario":"x"})"),
                  ParamError);
}

TEST_CASE("s_index experiment writes deterministic files") {
  ExperimentConfig c;
  c.scenario = Scenario::s_index;
  c.f = "laplace(1)";
  c.noise = "stable(1.5)";
  c.stable_index.s_lo = 1.0;
  c.stable_index.s_hi = 2.0;
  c.stable_index.beta_prime = 2.0;
  c.stable_index.A = 0.5;
  c.n_list = {100000};
  c.reps = 8;
  c.seed = 12345;
  c.out_dir = "exp_sindex_out";

  auto r1 = run_experiment(c);
  auto csv1 = slurp(r1.csv_path);
  auto r2 = run_experiment(c);
  auto csv2 = slurp(r2.csv_path);
  CHECK(csv1 == csv2);  // byte-identical under the same seed
  CHECK(csv1.find("n,replicate,ok,u_n,ecf_mod,s_hat,s_tilde,agree") == 0);
  CHECK(r1.summary_json.find("agreement_rate") != std::string::npos);

  // Aborting configuration: tiny n rows carry ok=0 instead of failing.
  c.n_list = {100};
  c.out_dir.clear();
  auto r3 = run_experiment(c);
  CHECK(r3.summary_json.find("\"ok\": false") != std::string::npos);

  std::filesystem::remove_all("exp_sindex_out");
}

TEST_CASE("clt experiment with the product statistic") {
  ExperimentConfig c;
  c.scenario = Scenario::clt;
  c.f = "gaussian(0,1)";
  c.f0 = "gaussian(0,1)";
  c.noise = "stable(2)";
  c.clt_statistic = "product";
  c.n_list = {100};
  c.reps = 1500;
  c.seed = 777;
  auto r = run_experiment(c);
  CHECK(r.summary_json.find("\"ks\"") != std::string::npos);
}

TEST_CASE("level experiment on a tiny budget controls its own pool") {
  ExperimentConfig c;
  c.scenario = Scenario::level;
  c.f0 = "laplace(1)";
  c.noise = "poly(2,1)";
  c.grid.beta_lo = 0.5;
  c.grid.beta_hi = 1.0;
  c.n_list = {100};
  c.reps = 60;
  c.calibration_reps = 500;
  c.eps = 0.2;
  c.seed = 31415;
  c.quadrature.m_points = 512;
  auto r = run_experiment(c);
  CHECK(r.summary_json.find("\"c_star\"") != std::string::npos);
  CHECK(r.summary_json.find("\"level\"") != std::string::npos);
}
