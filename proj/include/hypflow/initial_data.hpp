#ifndef HYPFLOW_INITIAL_DATA_HPP
#define HYPFLOW_INITIAL_DATA_HPP

#include <array>
#include <cstdint>
#include <random>

#include "hypflow/flow.hpp"

namespace hypflow {

/// Compactly supported smooth symmetric bump: amplitude matrix times a
/// C-infinity cutoff profile of the distance from `center`.
struct TensorBumpSpec {
  std::array<double, 6> amplitude{};  // packed symmetric, entries bounded by 1
  std::array<double, 3> center{};
  double radius = 1.0;
};

struct PerturbationSpec {
  double epsilon = 1e-3;
  TensorBumpSpec g0;  // metric perturbation
  TensorBumpSpec g1;  // velocity perturbation
};

struct InitialDataSpec {
  enum class Kind { Flat, Homothetic, ConformalTrig, Bump };
  Kind kind = Kind::Flat;
  double mu = 0.0;         // homothetic rate; also k = mu * g for ConformalTrig
  double amplitude = 0.0;  // conformal amplitude
  std::array<int, 3> modes{1, 0, 0};
  PerturbationSpec bump;
};

/// exp(1 - 1/(1 - s^2)) for s = r/radius < 1, zero outside; C-infinity.
double bump_profile(double r, double radius);

ScalarField conformal_phi(const Grid& grid, double amplitude, const std::array<int, 3>& modes);
MetricField conformal_metric(const ScalarField& phi);

FlowState build_initial_data(const Grid& grid, const InitialDataSpec& spec);

/// Seeded low-mode trigonometric fields for property tests.
ScalarField random_smooth_scalar(const Grid& grid, std::uint64_t seed, double amplitude = 1.0);
SymTensorField random_smooth_sym(const Grid& grid, std::uint64_t seed, double amplitude);
/// SPD by construction (conformal factor plus a small symmetric perturbation),
/// verified before returning.
MetricField random_spd_metric_field(const Grid& grid, std::uint64_t seed,
                                    double amplitude = 0.05);

/// One random SPD matrix, packed (A A^T + 0.1 I from standard normals).
void random_spd_point(int n, std::mt19937_64& rng, double* packed_out);

}  // namespace hypflow

#endif
