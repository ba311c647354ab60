#ifndef JETGEOM_VERIFY_HPP
#define JETGEOM_VERIFY_HPP

#include "jetgeom/zoo.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jetgeom {

struct SampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic rejection sampling inside the chart's axis-aligned box:
/// identical across runs and platforms for a fixed seed. Aborts with a
/// diagnostic when the domain predicate accepts less than 1% of draws.
std::vector<std::vector<double>> sample_points(const MetricField& m, int count,
                                               std::uint64_t seed);

struct Tolerances {
  double metric_inverse = 1e-11;
  double curvature_symmetry = 1e-10;
  double contracted_bianchi = 1e-9;
  double cotton_schouten = 1e-9;
  double div_weyl_identity = 1e-8;
  double fd_oracle = 1e-5;
  double schouten_conformal = 1e-9;
  double cotton_conformal = 1e-8;
  double ricci_conformal = 1e-9;
  double commutation = 1e-8;
  double composition = 1e-10;
  double gqe_conformal = 1e-8;
  double gqe_residual = 1e-10;
  double trace_consistency = 1e-11;
  double fit_roundtrip = 1e-9;
  double flag_check = 1e-10;          // einstein / harmonic-weyl / radial-weyl
  double radial_weyl_threshold = 0.05;  // violation floor for the counterexample
  double eigen_gap = 1e-6;
  double umbilicity = 1e-10;
  double codazzi_mainardi = 1e-8;
  double leaf_constancy = 1e-8;
  double h_sigma = 1e-8;
  double warp_reconstruction = 1e-7;
  double fiber_einstein = 1e-8;
  double classify_residual = 1e-8;
  double classify_constancy = 1e-8;

  static Tolerances from_json(const nlohmann::ordered_json& j);
  nlohmann::ordered_json to_json() const;
};

/// Inline metric description used when no zoo key applies.
struct InlineInstance {
  int dim = 0;
  std::vector<std::vector<std::string>> rows;
  std::string domain;  // optional predicate expression, positive inside
  std::vector<std::pair<double, double>> box;
  std::string f, mu, lambda;  // optional GQE data
};

struct RunConfig {
  std::string instance;  // zoo key, empty when inline_instance is set
  std::optional<InlineInstance> inline_instance;
  std::vector<std::string> suites{"all"};
  int samples = 20;
  std::uint64_t seed = 1;
  Tolerances tol;
  std::string out_path;

  static RunConfig from_json(const nlohmann::ordered_json& j);
};

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;   // scale-aware normalized residual
  double mean_residual = 0.0;
  std::vector<double> worst_point;
  double tolerance = 0.0;
  bool pass = false;
  /// Hypothesis checks that the instance is expected to violate (the
  /// counterexample); pass then records that the violation was observed and
  /// the row never fails a run.
  bool expected_failure = false;
  std::string note;
};

struct SuiteResult {
  std::string name;
  bool skipped = false;
  std::string skip_reason;
  std::vector<IdentityResult> identities;
};

struct VerificationReport {
  std::string instance_name;
  int dim = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string note;  // instance normalization remarks
  Tolerances tol;
  std::vector<SuiteResult> suites;

  bool passed() const;
  /// Deterministic for a fixed config; the timestamp is the only
  /// run-dependent field and can be left out.
  nlohmann::ordered_json to_json(bool with_timestamp = true) const;
};

VerificationReport run(const RunConfig& config);

/// The instance named by the config (zoo key or inline definition).
ZooInstance resolve_instance(const RunConfig& config);

}  // namespace jetgeom

#endif  // JETGEOM_VERIFY_HPP
