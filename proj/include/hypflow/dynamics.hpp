#ifndef HYPFLOW_DYNAMICS_HPP
#define HYPFLOW_DYNAMICS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hypflow/flow.hpp"
#include "hypflow/initial_data.hpp"

namespace hypflow {

enum class RhsVariant { Full, GaugeFixed };
enum class Experiment { Generic, Homothetic, Stability, Convergence };

std::string to_string(RhsVariant v);
std::string to_string(Experiment e);

struct RunConfig {
  int dim = 3;
  int points = 32;
  double box = 1.0;
  double d = 1.0;
  double cfl = 0.5;
  double t_end = 1.0;
  int difference_order = 2;
  RhsVariant rhs_variant = RhsVariant::Full;
  Experiment experiment = Experiment::Generic;
  InitialDataSpec initial;
  int cadence = 1;              // energy record every this many steps
  int snapshot_cadence = 0;     // write state to disk every this many steps (0 = off)
  bool keep_trajectory = false; // keep every state in memory (small runs only)
  std::string out_dir;          // destination for CSV/snapshots ("" = no files)
  std::uint64_t seed = 0;
  int threads = 0;              // 0 = leave OpenMP defaults / HYPFLOW_THREADS
  double dt_fixed = 0.0;        // explicit time step (0 = derive from CFL)

  void validate() const;
};

/// One diagnostics row; the column set and order matches the CSV schema.
struct EnergyRecord {
  double t = 0, dt = 0;
  double u_min = 0, u_max = 0, v_max = 0, w_max = 0;
  double R_min = 0, R_max = 0;
  double min_eig_g = 0;
  double gamma_sup = 0, gamma_l2 = 0;
  double energy = 0, sup_h = 0;
  std::string event;
};

struct EvolveResult {
  std::vector<EnergyRecord> records;
  std::vector<FlowState> trajectory;  // filled when keep_trajectory
  int exit_code = 0;                  // 0 ok, 2 degeneration, 3 instability
  std::string event;
  double event_time = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
  double wall_seconds = 0.0;
};

/// dt = cfl * h / (sqrt(n) * max characteristic speed), speeds from the
/// largest eigenvalue of the inverse metric.
double cfl_dt(const MetricField& g, double cfl_factor);

/// One classical 4th-order step of d(g,k)/dt = (k, F(g,k)).
FlowState step(const FlowState& s, double dt, RhsVariant variant, const FlowParams& params,
               int order = 2);

EvolveResult evolve(const RunConfig& config);

/// Flat-background wave energy of the perturbation h = g - delta:
/// sum over i<=j of the integral of (dt h)^2 + |grad h|^2 + h^2.
double wave_energy(const FlowState& s, int order = 2);

struct StabilityReport {
  EvolveResult run;
  double epsilon = 0.0;
  double e0 = 0.0, e_end = 0.0, decay_ratio = 0.0;
  double sup_h_max = 0.0, overshoot = 0.0;  // overshoot = sup_h_max / epsilon
  bool completed = false;
  // paired run at a weaker dissipation
  double d_paired = 0.0, e_end_paired = 0.0;
  bool dissipation_monotone = false;
};

StabilityReport stability_experiment(const PerturbationSpec& spec, const RunConfig& base,
                                     double d_paired);

struct ConvergenceReport {
  std::vector<int> resolutions;
  std::vector<double> dts;
  std::vector<double> field_errors;     // successive-resolution sup differences
  std::vector<double> field_orders;
  std::vector<double> u_residual_sups;  // per resolution, at the matched center triple
  std::vector<double> v_residual_sups;
  std::vector<double> wave_residual_sups;
  std::vector<double> u_residual_orders;
  std::vector<double> v_residual_orders;
  std::vector<double> wave_residual_orders;
  std::vector<std::string> warnings;
};

ConvergenceReport convergence_study(const RunConfig& config,
                                    const std::array<int, 3>& refinements);

/// Identity-residual norms along a stored trajectory (one row per interior
/// snapshot with uniform neighbors).
struct ResidualNorms {
  double t = 0;
  double u_sup = 0, u_l2 = 0;
  double v_sup = 0, v_l2 = 0;
  double wave_sup = 0, wave_l2 = 0;
};

std::vector<ResidualNorms> identity_residual_norms(const std::vector<FlowState>& trajectory,
                                                   const FlowParams& params, int order = 2);

}  // namespace hypflow

#endif
