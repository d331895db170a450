// Command-line front end: simulate / transform / verify / bessel / hlam.
// Exit codes: 0 success (all checks pass), 1 statistical failure,
// 2 usage error or numeric fault.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathlaw/checks.hpp"
#include "pathlaw/csv.hpp"
#include "pathlaw/specfun.hpp"
#include "pathlaw/stochastic.hpp"
#include "pathlaw/transforms.hpp"
#include "pathlaw/verify.hpp"

namespace fs = std::filesystem;
using namespace pathlaw;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::string default_outdir() {
  const char* env = std::getenv("PATHLAW_OUTDIR");
  return env ? std::string(env) : std::string(".");
}

DriftSpec drift_from_kind(const std::string& kind, double mu, double lam) {
  if (kind == "bm") return DriftSpec::zero();
  if (kind == "drift") return DriftSpec::constant(mu);
  if (kind == "tanh") return DriftSpec::tanh_drift(mu);
  if (kind == "besselk") return DriftSpec::besselk(mu, lam);
  if (kind == "timeinhom") return DriftSpec::time_inhom();
  throw CLI::ValidationError("--kind", "unknown sampler kind '" + kind + "'");
}

WeightLambda lambda_from_kind(const std::string& kind, double mu, double lam, double t) {
  if (kind == "one") return lambda_one(t);
  if (kind == "expmu") return lambda_exp_mu(mu, t);
  if (kind == "cosh") return lambda_cosh_mu(mu, t);
  if (kind == "besselk") return lambda_besselk(mu, lam, t);
  if (kind == "timeinhom") return lambda_time_inhom(t);
  throw CLI::ValidationError("--lambda-kind", "unknown weight kind '" + kind + "'");
}

int cmd_simulate(const std::string& kind, std::uint64_t seed, std::size_t n, double t,
                 long paths, double mu, double lam, const std::string& outdir,
                 const std::string& long_file) {
  const TimeGrid grid(t, n);
  const RngSpec rng{seed};
  const DriftSpec drift = drift_from_kind(kind, mu, lam);

  if (!long_file.empty()) {
    std::vector<Path> all;
    all.reserve(static_cast<std::size_t>(paths));
    for (long i = 0; i < paths; ++i)
      all.push_back(euler_maruyama(drift, grid, rng, static_cast<std::uint64_t>(i)));
    if (long_file == "-") {
      write_paths_long_csv(std::cout, all);
    } else {
      std::ofstream out(long_file);
      if (!out) throw std::runtime_error("cannot open " + long_file);
      write_paths_long_csv(out, all);
    }
    return 0;
  }

  fs::create_directories(outdir);
  for (long i = 0; i < paths; ++i) {
    const Path p = euler_maruyama(drift, grid, rng, static_cast<std::uint64_t>(i));
    char name[64];
    std::snprintf(name, sizeof(name), "path_%04ld.csv", i);
    write_path_csv_file((fs::path(outdir) / name).string(), p);
  }
  std::fprintf(stderr, "wrote %ld paths to %s\n", paths, outdir.c_str());
  return 0;
}

// A sidecar written by a previous transform carries the induced A profile;
// reusing it keeps chained transforms exact instead of O(ds^2).
std::optional<FunctionalProfile> profile_from_sidecar(const std::string& file,
                                                      const Path& path) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (!j.contains("profile_a") || !j.contains("n_steps") || !j.contains("t_end"))
    return std::nullopt;
  if (j["n_steps"].get<std::size_t>() != path.grid.n_steps) return std::nullopt;
  if (std::abs(j["t_end"].get<double>() - path.grid.t_end) > 1e-12) return std::nullopt;
  if (std::abs(j["endpoint_after"].get<double>() - path.endpoint()) > 1e-9)
    return std::nullopt;
  const auto a = j["profile_a"].get<std::vector<double>>();
  if (a.size() != path.n_nodes()) return std::nullopt;
  FunctionalProfile prof;
  prof.mode = ProfileMode::Induced;
  prof.A = a;
  prof.Z.resize(a.size());
  prof.Z[0] = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k)
    prof.Z[k] = std::exp(-path.values[k]) * a[k];
  return prof;
}

int cmd_transform(const std::string& op, const std::string& in_file,
                  const std::string& out_file, double z, double mu,
                  const std::string& lambda_kind, double lam, double t_override,
                  const std::string& sidecar, const std::string& mode,
                  const std::string& profile_in) {
  const Path input = read_path_csv_file(in_file);

  FunctionalProfile prof;
  if (mode == "quadrature") {
    prof = exp_functional_A(input);
  } else {
    const std::string candidate = profile_in.empty() ? in_file + ".json" : profile_in;
    auto loaded = profile_from_sidecar(candidate, input);
    if (loaded) {
      prof = std::move(*loaded);
    } else if (mode == "induced") {
      throw std::runtime_error("no usable profile sidecar at " + candidate);
    } else {
      prof = exp_functional_A(input);
    }
  }
  const double t = t_override > 0.0 ? t_override : input.grid.t_end;
  const HLambdaSolver solver = verify_solver();

  TransformResult res;
  double z_used = 0.0;
  if (op == "tz") {
    z_used = z;
    res = apply_tz(input, prof, z);
  } else if (op == "c") {
    z_used = 2.0 * input.endpoint();
    res = apply_c(input, prof);
  } else if (op == "clam") {
    res = apply_c_lambda(input, prof, lambda_from_kind(lambda_kind, mu, lam, t), solver);
    z_used = input.endpoint() - res.path.endpoint();
  } else if (op == "smu") {
    res = apply_s_mu(input, prof, mu, solver);
    z_used = input.endpoint() - res.path.endpoint();
  } else {
    throw CLI::ValidationError("--op", "unknown transform op '" + op + "'");
  }

  write_path_csv_file(out_file, res.path);

  nlohmann::json side;
  side["op"] = op;
  side["z_used"] = z_used;
  side["endpoint_before"] = input.endpoint();
  side["endpoint_after"] = res.path.endpoint();
  side["a_end_before"] = prof.a_end();
  side["a_end_after"] = res.profile.a_end();
  side["z_end"] = res.profile.z_end();
  side["n_steps"] = res.path.grid.n_steps;
  side["t_end"] = res.path.grid.t_end;
  side["profile_a"] = res.profile.A;
  const std::string side_path = sidecar.empty() ? out_file + ".json" : sidecar;
  std::ofstream sf(side_path);
  if (!sf) throw std::runtime_error("cannot open " + side_path);
  sf << side.dump(2) << "\n";
  return 0;
}

int run_deterministic_suite(std::uint64_t seed, std::size_t n, double t) {
  const TimeGrid grid(t, n);
  const RngSpec rng{seed};
  bool ok = true;
  auto line = [&ok](const char* name, double defect, double tol) {
    const bool pass = defect <= tol;
    ok = ok && pass;
    std::printf("  %-44s %10.3e (tol %.0e) %s\n", name, defect, tol, pass ? "ok" : "FAIL");
  };

  const std::vector<double> shifts = {0.3, -0.3, 1.5, -1.5};
  const AlgebraDefects alg = transform_algebra_check(grid, rng, 40, shifts);
  std::printf("transform algebra (Induced), 40 paths:\n");
  line("semigroup", alg.semigroup, 1e-10);
  line("inverse", alg.inverse, 1e-10);
  line("endpoint shift", alg.endpoint, 1e-10);
  line("A_t scaling", alg.a_scaling, 1e-10);
  line("Z preservation", alg.z_preserve, 1e-10);
  line("time-reversal compatibility (Quadrature)", alg.time_reversal, 1e-10);

  const HLambdaSolver solver{};  // full-accuracy solver for the algebra checks
  const std::vector<WeightLambda> lambdas = {
      lambda_one(t),          lambda_exp_mu(0.8, t),    lambda_exp_mu(-0.5, t),
      lambda_cosh_mu(0.8, t), lambda_besselk(0.8, 1.0, t), lambda_time_inhom(t)};
  std::printf("involutions, 10 paths:\n");
  for (const auto& item : involution_check(grid, rng, 10, lambdas, 0.8, solver))
    line(item.label.c_str(), item.defect, 1e-8);

  const CompositionSummary comp = composition_check_over_paths(grid, rng, 20, 0.5);
  std::printf("composition equivalences, 20 paths (alpha = 0.5, %d with A_t < 2):\n",
              comp.n_collapse_checked);
  line("extend-after-C", comp.max_extend, 1e-10);
  line("C-after-shrink", comp.max_collapse, 1e-10);

  const double ratio = quadrature_semigroup_ratio(t, 256, 20, rng, 1.0, -0.6);
  const bool rpass = ratio >= 3.0 && ratio <= 5.0;
  ok = ok && rpass;
  std::printf("  %-44s %10.3f (want [3, 5]) %s\n",
              "Quadrature semigroup ratio n=256 vs 512", ratio, rpass ? "ok" : "FAIL");

  return ok ? 0 : 1;
}

int cmd_verify(std::string suite, std::vector<std::string> spec_filters, bool suite_explicit,
               long n_paths, std::size_t n, double t, std::uint64_t seed, int shards,
               int threads, double z_max, bool bias_probe, const std::string& outdir,
               const PresetParams& params) {
  int rc = 0;
  if (!spec_filters.empty() && !suite_explicit) suite = "statistical";
  if (suite == "deterministic" || suite == "all") {
    std::printf("== deterministic suite (n = %zu, t = %g, seed = %llu)\n", n, t,
                static_cast<unsigned long long>(seed));
    rc = std::max(rc, run_deterministic_suite(seed, n, t));
  }
  if (suite == "statistical" || suite == "all" || !spec_filters.empty()) {
    fs::create_directories(outdir);
    const TimeGrid grid(t, n);
    const RngSpec rng{seed};
    EngineConfig cfg;
    cfg.shards = shards;
    cfg.threads = threads;
    cfg.z_max = z_max;

    auto all = preset_identities(t, params);
    std::vector<IdentitySpec> selected;
    for (auto& s : all) {
      if (spec_filters.empty()) {
        selected.push_back(std::move(s));
      } else {
        for (const auto& f : spec_filters)
          if (s.label == f) {
            selected.push_back(std::move(s));
            break;
          }
      }
    }
    if (selected.empty() && !spec_filters.empty())
      throw CLI::ValidationError("--spec", "no preset matches the given label(s)");

    nlohmann::json run_config;
    run_config["command"] = "verify";
    run_config["suite"] = suite;
    run_config["spec"] = spec_filters;
    run_config["N"] = n_paths;
    run_config["n"] = n;
    run_config["t"] = t;
    run_config["seed"] = seed;
    run_config["shards"] = shards;
    run_config["threads"] = threads;
    run_config["z_max"] = z_max;
    run_config["bias_probe"] = bias_probe;
    run_config["out"] = outdir;
    run_config["alpha"] = params.alpha;
    run_config["x"] = params.x;
    run_config["z"] = params.z;
    run_config["mu"] = params.mu;
    run_config["lam"] = params.lambda;

    for (const auto& s : selected) {
      VerificationReport rep = run_identity_with_rerun(s, n_paths, grid, rng, cfg);
      rep.print_table(std::cout);
      nlohmann::json j = nlohmann::json::parse(rep.to_json());
      j["run_config"] = run_config;
      std::ofstream jf((fs::path(outdir) / (s.label + ".json")).string());
      jf << j.dump(2) << "\n";
      if (!rep.pass) rc = std::max(rc, 1);

      if (bias_probe && s.kind != SpecKind::ConditionalLaw) {
        const TimeGrid coarse(t, n / 2);
        const BiasRecord bias = two_grid_bias_probe(s, n_paths, coarse, rng, cfg);
        std::printf("    bias probe n=%zu vs %zu: %s\n", n / 2, n,
                    bias.pass ? "ok" : "FAIL");
        std::ofstream bf((fs::path(outdir) / (s.label + ".bias.json")).string());
        bf << bias.to_json() << "\n";
        if (!bias.pass) rc = std::max(rc, 1);
      }
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anticipative Brownian path transforms and identity-in-law verification"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "sample paths to CSV");
  std::string sim_kind = "bm";
  std::uint64_t sim_seed = kDefaultSeed;
  std::size_t sim_n = 512;
  double sim_t = 1.0, sim_mu = 0.0, sim_lam = 1.0;
  long sim_paths = 1;
  std::string sim_out = default_outdir(), sim_long;
  sim->add_option("--kind", sim_kind, "bm|drift|tanh|besselk|timeinhom");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--n", sim_n, "steps")->check(CLI::Range(std::size_t(2), std::size_t(1) << 24));
  sim->add_option("--t", sim_t, "horizon")->check(CLI::PositiveNumber);
  sim->add_option("--paths", sim_paths, "number of paths")->check(CLI::PositiveNumber);
  sim->add_option("--mu", sim_mu, "drift parameter");
  sim->add_option("--lambda", sim_lam, "Bessel drift scale");
  sim->add_option("--out", sim_out, "output directory (one CSV per path)");
  sim->add_option("--long", sim_long, "write long-format CSV to this file ('-' = stdout)");

  // transform
  auto* tr = app.add_subcommand("transform", "apply a path transform to a CSV path");
  std::string tr_op = "tz", tr_in, tr_out, tr_lambda_kind = "one", tr_sidecar;
  std::string tr_mode = "auto", tr_profile_in;
  double tr_z = 0.0, tr_mu = 0.0, tr_lam = 1.0, tr_t = 0.0;
  tr->add_option("--op", tr_op, "tz|c|clam|smu");
  tr->add_option("--in", tr_in, "input path CSV")->required();
  tr->add_option("--out", tr_out, "output path CSV")->required();
  tr->add_option("--z", tr_z, "shift for --op tz");
  tr->add_option("--mu", tr_mu, "mu for --op smu / weight kinds");
  tr->add_option("--lambda-kind", tr_lambda_kind, "one|expmu|cosh|besselk|timeinhom");
  tr->add_option("--lam", tr_lam, "Bessel weight scale");
  tr->add_option("--t", tr_t, "weight horizon override (default: path horizon)");
  tr->add_option("--sidecar", tr_sidecar, "sidecar JSON path (default: OUT.json)");
  tr->add_option("--mode", tr_mode,
                 "profile source: auto (sidecar if valid) | quadrature | induced");
  tr->add_option("--profile-in", tr_profile_in, "sidecar JSON of the input path");

  // verify
  auto* ver = app.add_subcommand("verify", "run identity verification suites");
  std::string ver_suite = "all", ver_out = default_outdir();
  std::vector<std::string> ver_specs;
  long ver_N = 100000;
  std::size_t ver_n = 512;
  double ver_t = 1.0, ver_zmax = 4.0;
  std::uint64_t ver_seed = kDefaultSeed;
  int ver_shards = 1, ver_threads = 0;
  bool ver_bias = false;
  PresetParams params;
  ver->add_option("--suite", ver_suite, "deterministic|statistical|all");
  ver->add_option("--spec", ver_specs, "run only these preset labels");
  ver->add_option("--N", ver_N, "paths per spec")->check(CLI::Range(100l, 100000000l));
  ver->add_option("--n", ver_n, "steps");
  ver->add_option("--t", ver_t, "horizon")->check(CLI::PositiveNumber);
  ver->add_option("--seed", ver_seed, "master seed");
  ver->add_option("--shards", ver_shards, "accumulation shards")->check(CLI::Range(1, 4096));
  ver->add_option("--threads", ver_threads, "worker threads (0 = hardware)");
  ver->add_option("--z-max", ver_zmax, "per-functional |z| threshold");
  ver->add_flag("--bias-probe", ver_bias, "also run the two-grid bias probe (n/2 vs n)");
  ver->add_option("--out", ver_out, "report directory");
  ver->add_option("--alpha", params.alpha, "family parameter alpha");
  ver->add_option("--x", params.x, "family parameter x");
  ver->add_option("--z", params.z, "family parameter z");
  ver->add_option("--mu", params.mu, "drift/tilt parameter mu");
  ver->add_option("--lam", params.lambda, "Bessel weight scale");

  // bessel
  auto* bes = app.add_subcommand("bessel", "evaluate K_nu");
  double bes_nu = 0.0, bes_x = 1.0;
  bes->add_option("--nu", bes_nu, "order")->required();
  bes->add_option("--x", bes_x, "argument")->required();

  // hlam
  auto* hl = app.add_subcommand("hlam", "tabulate h_Lambda as CSV (xi, zeta, h)");
  std::string hl_kind = "one", hl_out;
  double hl_mu = 0.0, hl_lam = 1.0, hl_t = 1.0, hl_xi_min = -3.0, hl_xi_max = 3.0;
  std::size_t hl_steps = 20;
  std::vector<double> hl_zetas = {0.5, 1.0, 2.0};
  hl->add_option("--lambda-kind", hl_kind, "one|expmu|cosh|besselk|timeinhom");
  hl->add_option("--mu", hl_mu, "weight mu");
  hl->add_option("--lam", hl_lam, "Bessel weight scale");
  hl->add_option("--t", hl_t, "horizon")->check(CLI::PositiveNumber);
  hl->add_option("--xi-min", hl_xi_min, "lower xi");
  hl->add_option("--xi-max", hl_xi_max, "upper xi");
  hl->add_option("--xi-steps", hl_steps, "number of xi probes");
  hl->add_option("--zeta", hl_zetas, "zeta values");
  hl->add_option("--out", hl_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(sim_kind, sim_seed, sim_n, sim_t, sim_paths, sim_mu, sim_lam,
                          sim_out, sim_long);
    if (tr->parsed())
      return cmd_transform(tr_op, tr_in, tr_out, tr_z, tr_mu, tr_lambda_kind, tr_lam, tr_t,
                           tr_sidecar, tr_mode, tr_profile_in);
    if (ver->parsed())
      return cmd_verify(ver_suite, ver_specs, ver->count("--suite") > 0, ver_N, ver_n,
                        ver_t, ver_seed, ver_shards, ver_threads, ver_zmax, ver_bias,
                        ver_out, params);
    if (bes->parsed()) {
      const double lk = bessel_k_log(bes_nu, bes_x);
      std::printf("K_%g(%g)      = %.15g\n", bes_nu, bes_x, std::exp(lk));
      std::printf("log K_%g(%g)  = %.15g\n", bes_nu, bes_x, lk);
      std::printf("K_%g/K_%g(%g) = %.15g\n", bes_nu + 1.0, bes_nu, bes_x,
                  bessel_k_ratio(bes_nu, bes_x));
      return 0;
    }
    if (hl->parsed()) {
      const WeightLambda lam = lambda_from_kind(hl_kind, hl_mu, hl_lam, hl_t);
      const HLambdaSolver solver;
      std::ostream* os = &std::cout;
      std::ofstream file;
      if (!hl_out.empty()) {
        file.open(hl_out);
        if (!file) throw std::runtime_error("cannot open " + hl_out);
        os = &file;
      }
      (*os) << "xi,zeta,h_lambda\n";
      char buf[96];
      for (double zeta : hl_zetas)
        for (std::size_t i = 0; i < hl_steps; ++i) {
          const double xi =
              hl_xi_min + (hl_xi_max - hl_xi_min) * static_cast<double>(i) /
                              static_cast<double>(hl_steps - 1);
          std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", xi, zeta,
                        solve_h_lambda(lam, xi, zeta, solver));
          (*os) << buf;
        }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
