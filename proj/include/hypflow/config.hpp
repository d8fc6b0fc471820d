#ifndef HYPFLOW_CONFIG_HPP
#define HYPFLOW_CONFIG_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hypflow/dynamics.hpp"

namespace hypflow {

/// Bad flags/config keys/values; mapped to exit code 64.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExactOpts {
  double lambda = 0.0, mu = 0.0, d = 1.0;
  int dim = 3;
  std::string variant = "paper";  // "paper" | "substitution"
  double dt = 1e-3, t_end = 5.0;
  std::string out_dir;
};

struct SolitonMetricSpec {
  std::string kind = "flat";  // flat | conformal_trig | random_spd
  double amplitude = 0.05;
  std::array<int, 3> modes{1, 0, 0};
  std::uint64_t seed = 1;
};

struct SolitonCandidateSpec {
  // gradient_trig | gradient_constant | gradient_random | vector_trig |
  // vector_constant | vector_zero
  std::string kind = "gradient_trig";
  double amplitude = 0.1;
  int mode = 1;
  double value = 0.0;
  std::array<double, 3> components{};
  std::uint64_t seed = 2;
};

struct SolitonOpts {
  int dim = 3, points = 32;
  double box = 1.0, d = 1.0;
  int difference_order = 2;
  SolitonMetricSpec metric;
  SolitonCandidateSpec candidate;
  std::string out_dir;
  int threads = 0;
};

struct IdentitiesOpts {
  std::string run_dir;
  double d = 1.0;
  int difference_order = 2;
  bool write_residual_fields = false;
  std::string out_dir;
  int threads = 0;
};

struct StabilityOpts {
  RunConfig run;
  double epsilon = 1e-3;
  double d_paired = 0.1;
};

struct ConvergenceOpts {
  RunConfig run;
  std::array<int, 3> refinements{1, 2, 4};
};

/// Default compact bump pair used by the stability experiment: fixed symmetric
/// amplitude matrices (entries bounded by 1), bump radius 1 at the box center.
PerturbationSpec default_perturbation(int dim, double box, double epsilon);

nlohmann::json load_config_file(const std::string& path);

ExactOpts parse_exact(const nlohmann::json& j);
RunConfig parse_evolve(const nlohmann::json& j);
SolitonOpts parse_soliton(const nlohmann::json& j);
IdentitiesOpts parse_identities(const nlohmann::json& j);
StabilityOpts parse_stability(const nlohmann::json& j);
ConvergenceOpts parse_convergence(const nlohmann::json& j);

nlohmann::json to_json(const ExactOpts& o);
nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const SolitonOpts& o);
nlohmann::json to_json(const IdentitiesOpts& o);
nlohmann::json to_json(const StabilityOpts& o);
nlohmann::json to_json(const ConvergenceOpts& o);

/// Experiment drivers shared by the CLI and the acceptance suite. They write
/// the configured artifacts and return the process exit status
/// (0 ok, 2 degeneration, 3 instability).
int run_exact(const ExactOpts& o);
int run_evolve(const RunConfig& c);
int run_soliton(const SolitonOpts& o);
int run_identities(const IdentitiesOpts& o);
int run_stability(const StabilityOpts& o);
int run_convergence(const ConvergenceOpts& o);

}  // namespace hypflow

#endif
