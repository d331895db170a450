#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pathlaw/functionals.hpp"
#include "pathlaw/grid.hpp"
#include "pathlaw/stochastic.hpp"
#include "pathlaw/transforms.hpp"
#include "pathlaw/weights.hpp"

namespace pathlaw {

/// Bounded functional of an ordered pair of paths (profiles supplied so
/// functionals can read Z trajectories). |F| <= 1 keeps the paired variance
/// finite and the standard error meaningful.
struct TestFunctional {
  std::string label;
  std::function<double(const Path&, const FunctionalProfile&, const Path&,
                       const FunctionalProfile&)>
      eval;
};

/// The default battery of five pair functionals.
std::vector<TestFunctional> default_battery();
/// Scalar battery reading (phi1_t, phi2_t, Z of phi2 at three times).
std::vector<TestFunctional> scalar_battery();

enum class PairShape { TransformedFirst, TransformedSecond };

/// One side of a declarative identity: which slot the transformed path
/// occupies, the transform shift z(xi, zeta), the log-space weight, and the
/// event indicator. Null weight means 1; null event means always.
struct SideRule {
  PairShape shape = PairShape::TransformedFirst;
  std::function<double(double, double)> shift;
  std::function<double(double, double)> log_weight;
  std::function<bool(double, double)> event;
};

enum class SpecKind { Paired, TwoSample, ConditionalLaw };

/// A declarative "LHS = RHS" identity in law. Paired specs evaluate both
/// sides on the same sampled path; TwoSample compares two independent
/// batches (pooled-variance z); ConditionalLaw pairs an endpoint product
/// against its conditional-density integral.
struct IdentitySpec {
  std::string label;
  std::string anchor;
  SpecKind kind = SpecKind::Paired;
  DriftSpec sampler;
  std::vector<TestFunctional> battery;
  SideRule left, right;
  bool shared_shift = false;  // both sides apply the same transform
  DriftSpec sampler2;         // TwoSample batch 2
  std::function<double(double)> f_scalar, g_scalar;  // ConditionalLaw
};

struct FunctionalRecord {
  std::string label;
  double mean = 0.0, se = 0.0, z = 0.0;
  bool pass = true;
};

struct VerificationReport {
  std::string label, anchor, kind;
  std::uint64_t seed = 0;
  std::int64_t n_paths = 0;
  std::size_t n_steps = 0;
  double t_end = 0.0;
  int shards = 1;
  double z_max = 4.0;
  std::int64_t n_eff_left = 0, n_eff_right = 0, skipped = 0;
  double max_weight_left = 0.0, max_weight_right = 0.0;
  std::vector<FunctionalRecord> functionals;
  bool pass = false;
  double wall_seconds = 0.0;
  bool rerun_used = false;
  std::uint64_t rerun_seed = 0;
  std::vector<FunctionalRecord> first_run;

  std::string to_json() const;
  void print_table(std::ostream& os) const;
};

struct EngineConfig {
  int shards = 1;
  int threads = 0;  // 0 = hardware concurrency
  double z_max = 4.0;
};

/// Paired/two-sample/conditional-law Monte Carlo estimate of the identity
/// defect. Deterministic given (spec, n_paths, grid, seed); the shard count
/// only regroups the compensated accumulation.
VerificationReport run_identity(const IdentitySpec& spec, std::int64_t n_paths,
                                const TimeGrid& grid, const RngSpec& rng,
                                const EngineConfig& cfg = {});

/// run_identity plus the one permitted fresh-seed re-run on a statistical
/// failure; the original records are kept in the report.
VerificationReport run_identity_with_rerun(const IdentitySpec& spec, std::int64_t n_paths,
                                           const TimeGrid& grid, const RngSpec& rng,
                                           const EngineConfig& cfg = {});

/// Lemma-style conditional-law comparison with caller-chosen bounded f, g.
VerificationReport conditional_law_check(std::int64_t n_paths, const TimeGrid& grid,
                                         const RngSpec& rng,
                                         std::function<double(double)> f,
                                         std::function<double(double)> g,
                                         const EngineConfig& cfg = {});

/// Runs the spec at n and 2n steps with the same seed; passes when the fine
/// defect is explained by the coarse defect plus two fine standard errors.
struct BiasRecord {
  VerificationReport coarse, fine;
  bool pass = false;
  std::string to_json() const;
};
BiasRecord two_grid_bias_probe(const IdentitySpec& spec, std::int64_t n_paths,
                               const TimeGrid& grid, const RngSpec& rng,
                               const EngineConfig& cfg = {});

/// Solver profile used inside preset transforms: per-path solves need speed
/// more than the last two digits of mass accuracy.
HLambdaSolver verify_solver();

/// Tunable parameters of the bundled corpus.
struct PresetParams {
  double alpha = 1.0;   // log-affine and A-shift families
  double x = 0.4;       // geometric shift families
  double z = 0.7;       // constant shift
  double mu = 0.5;      // drifted variants and k_mu batches
  double lambda = 1.0;  // Bessel weight scale
};

/// The bundled identity corpus (>= 18 specs) for the given horizon.
std::vector<IdentitySpec> preset_identities(double t_end = 1.0, const PresetParams& p = {});

}  // namespace pathlaw
