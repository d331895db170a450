#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pathlaw/checks.hpp"
#include "pathlaw/csv.hpp"
#include "pathlaw/specfun.hpp"
#include "pathlaw/stochastic.hpp"
#include "pathlaw/transforms.hpp"
#include "pathlaw/verify.hpp"

namespace py = pybind11;
using namespace pathlaw;

namespace {

Path make_path(double t_end, const std::vector<double>& values) {
  if (values.size() < 3) throw std::invalid_argument("need at least 3 nodes");
  return Path(TimeGrid(t_end, values.size() - 1), values);
}

WeightLambda weight_by_name(const std::string& kind, double mu, double lam, double t) {
  if (kind == "one") return lambda_one(t);
  if (kind == "expmu") return lambda_exp_mu(mu, t);
  if (kind == "cosh") return lambda_cosh_mu(mu, t);
  if (kind == "besselk") return lambda_besselk(mu, lam, t);
  if (kind == "timeinhom") return lambda_time_inhom(t);
  throw std::invalid_argument("unknown weight kind '" + kind + "'");
}

DriftSpec drift_by_name(const std::string& kind, double mu, double lam) {
  if (kind == "bm") return DriftSpec::zero();
  if (kind == "drift") return DriftSpec::constant(mu);
  if (kind == "tanh") return DriftSpec::tanh_drift(mu);
  if (kind == "besselk") return DriftSpec::besselk(mu, lam);
  if (kind == "timeinhom") return DriftSpec::time_inhom();
  throw std::invalid_argument("unknown drift kind '" + kind + "'");
}

py::dict pair_to_dict(const TransformResult& r) {
  py::dict d;
  d["values"] = r.path.values;
  d["t_end"] = r.path.grid.t_end;
  d["A"] = r.profile.A;
  d["Z"] = r.profile.Z;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "anticipative Brownian path transforms and identity-in-law verification";

  m.def("exp_functional", [](double t_end, const std::vector<double>& values) {
    const Path p = make_path(t_end, values);
    const FunctionalProfile prof = exp_functional_A(p);
    py::dict d;
    d["A"] = prof.A;
    d["Z"] = prof.Z;
    return d;
  }, py::arg("t_end"), py::arg("values"));

  m.def("time_reverse", [](double t_end, const std::vector<double>& values) {
    return time_reverse(make_path(t_end, values)).values;
  }, py::arg("t_end"), py::arg("values"));

  m.def("apply_tz", [](double t_end, const std::vector<double>& values, double z) {
    const Path p = make_path(t_end, values);
    return pair_to_dict(apply_tz(p, exp_functional_A(p), z));
  }, py::arg("t_end"), py::arg("values"), py::arg("z"));

  m.def("apply_c", [](double t_end, const std::vector<double>& values) {
    const Path p = make_path(t_end, values);
    return pair_to_dict(apply_c(p, exp_functional_A(p)));
  }, py::arg("t_end"), py::arg("values"));

  m.def("apply_c_lambda",
        [](double t_end, const std::vector<double>& values, const std::string& kind,
           double mu, double lam) {
          const Path p = make_path(t_end, values);
          return pair_to_dict(apply_c_lambda(p, exp_functional_A(p),
                                             weight_by_name(kind, mu, lam, t_end)));
        },
        py::arg("t_end"), py::arg("values"), py::arg("kind") = "one", py::arg("mu") = 0.0,
        py::arg("lam") = 1.0);

  m.def("apply_s_mu", [](double t_end, const std::vector<double>& values, double mu) {
    const Path p = make_path(t_end, values);
    return pair_to_dict(apply_s_mu(p, exp_functional_A(p), mu));
  }, py::arg("t_end"), py::arg("values"), py::arg("mu"));

  m.def("bessel_k", [](double nu, double x) { return bessel_k(nu, x); },
        py::arg("nu"), py::arg("x"));
  m.def("bessel_k_log", [](double nu, double x) { return bessel_k_log(nu, x); },
        py::arg("nu"), py::arg("x"));
  m.def("bessel_k_ratio", [](double mu, double z) { return bessel_k_ratio(mu, z); },
        py::arg("mu"), py::arg("z"));
  m.def("conditional_density", [](double xi, double zeta) {
    return conditional_density(xi, zeta);
  }, py::arg("xi"), py::arg("zeta"));

  m.def("solve_h_lambda",
        [](const std::string& kind, double xi, double zeta, double mu, double lam, double t) {
          return solve_h_lambda(weight_by_name(kind, mu, lam, t), xi, zeta);
        },
        py::arg("kind"), py::arg("xi"), py::arg("zeta"), py::arg("mu") = 0.0,
        py::arg("lam") = 1.0, py::arg("t") = 1.0);
  m.def("k_mu", [](double mu, double xi, double zeta) { return k_mu(mu, xi, zeta); },
        py::arg("mu"), py::arg("xi"), py::arg("zeta"));

  m.def("sample_bm",
        [](double t_end, std::size_t n_steps, std::uint64_t seed, std::uint64_t ordinal) {
          return sample_bm(TimeGrid(t_end, n_steps), RngSpec{seed}, ordinal).values;
        },
        py::arg("t_end"), py::arg("n_steps"), py::arg("seed") = 42, py::arg("ordinal") = 0);
  m.def("sample_bm_drift",
        [](double mu, double t_end, std::size_t n_steps, std::uint64_t seed,
           std::uint64_t ordinal) {
          return sample_bm_drift(mu, TimeGrid(t_end, n_steps), RngSpec{seed}, ordinal).values;
        },
        py::arg("mu"), py::arg("t_end"), py::arg("n_steps"), py::arg("seed") = 42,
        py::arg("ordinal") = 0);
  m.def("euler_maruyama",
        [](const std::string& kind, double t_end, std::size_t n_steps, std::uint64_t seed,
           std::uint64_t ordinal, double mu, double lam) {
          return euler_maruyama(drift_by_name(kind, mu, lam), TimeGrid(t_end, n_steps),
                                RngSpec{seed}, ordinal).values;
        },
        py::arg("kind"), py::arg("t_end"), py::arg("n_steps"), py::arg("seed") = 42,
        py::arg("ordinal") = 0, py::arg("mu") = 0.0, py::arg("lam") = 1.0);

  m.def("preset_labels", [](double t_end) {
    std::vector<std::string> out;
    for (const auto& s : preset_identities(t_end)) out.push_back(s.label);
    return out;
  }, py::arg("t_end") = 1.0);

  m.def("run_identity",
        [](const std::string& label, std::int64_t n_paths, std::size_t n_steps, double t_end,
           std::uint64_t seed, int shards, int threads) {
          for (const auto& s : preset_identities(t_end)) {
            if (s.label != label) continue;
            EngineConfig cfg;
            cfg.shards = shards;
            cfg.threads = threads;
            const auto rep = run_identity(s, n_paths, TimeGrid(t_end, n_steps),
                                          RngSpec{seed}, cfg);
            return rep.to_json();
          }
          throw std::invalid_argument("unknown preset label '" + label + "'");
        },
        py::arg("label"), py::arg("n_paths") = 2000, py::arg("n_steps") = 64,
        py::arg("t_end") = 1.0, py::arg("seed") = 42, py::arg("shards") = 1,
        py::arg("threads") = 0);
}
