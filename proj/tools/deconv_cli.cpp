// Command-line surface for the deconvolution toolkit: sampling, index
// estimation, plug-in estimators, goodness-of-fit tests, calibration, and
// the reproducible experiment runner.
//
// Every subcommand prints one machine-readable JSON object on stdout;
// --pretty adds a human-readable table on stderr. Exit codes: 0 success,
// 2 validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include "deconv/adaptive_test.hpp"
#include "deconv/csv.hpp"
#include "deconv/experiment.hpp"
#include "deconv/sampling.hpp"
#include "deconv/semiparam.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace deconv;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir;
  bool pretty = false;
  // Track which flags the user actually set, so they override the file.
  bool seed_set = false, threads_set = false, out_set = false;
  std::uint64_t seed = 1;
  int threads = 1;
};

ExperimentConfig load_config(const GlobalOpts& g) {
  ExperimentConfig cfg;
  if (!g.config_path.empty()) cfg = ExperimentConfig::from_json_file(g.config_path);
  if (g.seed_set) cfg.seed = g.seed;
  if (g.threads_set) cfg.threads = g.threads;
  if (g.out_set) cfg.out_dir = g.out_dir;
  return cfg;
}

void emit(const json& j, const GlobalOpts& g) {
  std::cout << j.dump(2) << std::endl;
  if (g.pretty) {
    std::cerr << "----------------------------------------\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_structured()) continue;
      std::cerr << "  " << it.key() << " = " << it.value().dump() << "\n";
    }
    std::cerr << "----------------------------------------\n";
  }
}

Sample obtain_sample(const ExperimentConfig& cfg, const std::string& in_path,
                     std::size_t n) {
  if (!in_path.empty()) return read_sample(in_path);
  RngStream rng(cfg.seed, 0);
  auto f = densities::parse(cfg.f);
  auto g = NoiseSpec::parse(cfg.noise);
  Sample s = sample_convolution(f, g, n, rng);
  s.seed = cfg.seed;
  return s;
}

json outcome_to_json(const TestOutcome& out) {
  json j;
  j["reject"] = out.reject;
  j["max_ratio"] = out.max_ratio;
  j["c_star"] = out.c_star;
  if (out.trigger_index) j["trigger_index"] = *out.trigger_index;
  json pts = json::array();
  for (const auto& p : out.per_point)
    pts.push_back({{"alpha", p.tau.alpha},
                   {"r", p.tau.r},
                   {"beta", p.tau.beta},
                   {"h", p.h},
                   {"t2", p.t2},
                   {"stat", p.stat},
                   {"ratio", p.ratio}});
  j["per_point"] = pts;
  if (out.s_estimate) {
    j["s_hat"] = out.s_estimate->s_hat;
    j["u_n"] = out.s_estimate->u_n;
    j["ecf_mod"] = out.s_estimate->ecf_mod;
  }
  return j;
}

void write_outcome_files(const TestOutcome& out, const ExperimentConfig& cfg) {
  if (cfg.out_dir.empty()) return;
  std::filesystem::create_directories(cfg.out_dir);
  CsvWriter csv(cfg.out_dir + "/test_points.csv",
                {"alpha", "r", "beta", "h", "t2", "stat", "ratio"});
  for (const auto& p : out.per_point)
    csv.row({CsvWriter::num(p.tau.alpha), CsvWriter::num(p.tau.r),
             CsvWriter::num(p.tau.beta), CsvWriter::num(p.h),
             CsvWriter::num(p.t2), CsvWriter::num(p.stat),
             CsvWriter::num(p.ratio)});
  json j = outcome_to_json(out);
  j["seed"] = cfg.seed;
  std::ofstream os(cfg.out_dir + "/test_summary.json");
  os << j.dump(2) << '\n';
}

json s_estimate_to_json(const SIndexEstimate& est) {
  json j;
  j["s_hat"] = est.s_hat;
  j["branch"] = est.branch;
  j["u_n"] = est.u_n;
  j["d_n"] = est.d_raw;
  j["step"] = est.step;
  j["ecf_mod"] = est.ecf_mod;
  j["grid"] = est.grid;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deconvolution toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON config file (flags override it)");
  app.add_option("--seed", g.seed, "RNG seed")->each([&](const std::string&) {
    g.seed_set = true;
  });
  app.add_option("--threads", g.threads, "worker threads for replications")
      ->each([&](const std::string&) { g.threads_set = true; });
  app.add_option("--out", g.out_dir, "output directory")
      ->each([&](const std::string&) { g.out_set = true; });
  app.add_flag("--pretty", g.pretty, "also print a human-readable table on stderr");

  std::string f_spec, f0_spec, noise_spec, in_path;
  std::size_t n = 1000;
  double x_eval = 0.0, c_star = 0.0, beta_bar = 0.0, eps = 0.0;
  int reps = 0;

  auto add_model_opts = [&](CLI::App* sub, bool with_f, bool with_f0) {
    if (with_f) sub->add_option("--f", f_spec, "signal density, e.g. laplace(1)");
    if (with_f0) sub->add_option("--f0", f0_spec, "null density");
    sub->add_option("--noise", noise_spec, "noise, e.g. poly(2,1) or stable(1.5)");
    sub->add_option("--n", n, "sample size");
    sub->add_option("--in", in_path, "read the sample from this file instead");
  };

  auto* sim = app.add_subcommand("simulate", "draw a sample from the convolution model");
  add_model_opts(sim, true, false);

  auto* est_s = app.add_subcommand("estimate-s", "estimate the stable self-similarity index");
  add_model_opts(est_s, true, false);

  auto* est_d = app.add_subcommand("estimate-density", "plug-in density estimate at a point");
  add_model_opts(est_d, true, false);
  est_d->add_option("--x", x_eval, "evaluation point");
  est_d->add_option("--beta-bar", beta_bar, "upper smoothness bound");

  auto* qf = app.add_subcommand("quadfunc", "plug-in estimate of the integrated squared density");
  add_model_opts(qf, true, false);
  qf->add_option("--beta-bar", beta_bar, "upper smoothness bound");

  auto* tp = app.add_subcommand("test-poly", "adaptive goodness-of-fit test, polynomial noise");
  add_model_opts(tp, true, true);
  tp->add_option("--c-star", c_star, "threshold constant")->required();

  auto* ts = app.add_subcommand("test-stable", "goodness-of-fit test, stable noise, unknown index");
  add_model_opts(ts, true, true);
  ts->add_option("--c-star", c_star, "threshold constant")->required();
  ts->add_option("--beta-bar", beta_bar, "upper smoothness bound");

  auto* cal = app.add_subcommand("calibrate", "Monte Carlo calibration of the threshold constant");
  add_model_opts(cal, false, true);
  cal->add_option("--eps", eps, "target level");
  cal->add_option("--reps", reps, "calibration replications");

  auto* exp = app.add_subcommand("experiment", "run a configured Monte Carlo experiment");

  // Global flags may appear after the subcommand name as well.
  for (auto* sub : {sim, est_s, est_d, qf, tp, ts, cal, exp}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = load_config(g);
    if (!f_spec.empty()) cfg.f = f_spec;
    if (!f0_spec.empty()) cfg.f0 = f0_spec;
    if (!noise_spec.empty()) cfg.noise = noise_spec;
    if (beta_bar > 0.0) cfg.beta_bar = beta_bar;
    if (eps > 0.0) cfg.eps = eps;
    if (reps > 0) cfg.calibration_reps = reps;

    if (app.got_subcommand(sim)) {
      Sample s = obtain_sample(cfg, in_path, n);
      std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
      std::filesystem::create_directories(dir);
      std::string path = dir + "/sample.txt";
      write_sample(s, path);
      emit({{"path", path},
            {"n", s.y.size()},
            {"seed", cfg.seed},
            {"f", s.signal_name},
            {"noise", s.noise_name}},
           g);
    } else if (app.got_subcommand(est_s)) {
      Sample s = obtain_sample(cfg, in_path, n);
      auto est = estimate_s(s.y, cfg.stable_index);
      emit(s_estimate_to_json(est), g);
    } else if (app.got_subcommand(est_d)) {
      Sample s = obtain_sample(cfg, in_path, n);
      auto pe = estimate_density_at(s.y, x_eval, cfg.stable_index, cfg.beta_bar,
                                    cfg.quadrature);
      json j = s_estimate_to_json(pe.s_diag);
      j["value"] = pe.value;
      j["h"] = pe.h;
      j["x"] = x_eval;
      j["recipe"] = to_string(pe.recipe);
      emit(j, g);
    } else if (app.got_subcommand(qf)) {
      Sample s = obtain_sample(cfg, in_path, n);
      auto pe = estimate_quadratic_functional(s.y, cfg.stable_index,
                                              cfg.beta_bar, cfg.quadrature);
      json j = s_estimate_to_json(pe.s_diag);
      j["value"] = pe.value;
      j["h"] = pe.h;
      j["recipe"] = to_string(pe.recipe);
      emit(j, g);
    } else if (app.got_subcommand(tp)) {
      Sample s = obtain_sample(cfg, in_path, n);
      auto f0 = densities::parse(cfg.f0);
      auto gn = NoiseSpec::parse(cfg.noise);
      auto grid = build_grid(cfg.grid_regime, static_cast<long long>(s.y.size()),
                             cfg.grid, gn.poly().sigma, cfg.grid_c);
      auto out = run_test_poly(s.y, grid, c_star, f0, gn, cfg.quadrature);
      write_outcome_files(out, cfg);
      emit(outcome_to_json(out), g);
    } else if (app.got_subcommand(ts)) {
      Sample s = obtain_sample(cfg, in_path, n);
      auto f0 = densities::parse(cfg.f0);
      auto out = run_test_stable(s.y, f0, cfg.stable_index, cfg.beta_bar,
                                 c_star, cfg.quadrature);
      write_outcome_files(out, cfg);
      emit(outcome_to_json(out), g);
    } else if (app.got_subcommand(cal)) {
      auto f0 = densities::parse(cfg.f0);
      auto gn = NoiseSpec::parse(cfg.noise);
      auto grid = build_grid(cfg.grid_regime, static_cast<long long>(n),
                             cfg.grid, gn.poly().sigma, cfg.grid_c);
      double cs = calibrate_cstar(f0, gn, static_cast<long long>(n), grid,
                                  cfg.eps, cfg.calibration_reps, cfg.seed,
                                  cfg.quadrature, cfg.threads);
      emit({{"c_star", cs},
            {"eps", cfg.eps},
            {"reps", cfg.calibration_reps},
            {"n", n},
            {"seed", cfg.seed}},
           g);
    } else if (app.got_subcommand(exp)) {
      auto res = run_experiment(cfg);
      json j = json::parse(res.summary_json);
      if (!res.csv_path.empty()) j["results_csv"] = res.csv_path;
      emit(j, g);
    }
  } catch (const ParamError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
