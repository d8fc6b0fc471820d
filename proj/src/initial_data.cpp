#include "hypflow/initial_data.hpp"

#include <cmath>
#include <stdexcept>

#include "hypflow/parallel.hpp"

namespace hypflow {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

template <class F>
void fill_pointwise(const Grid& g, F&& f) {
  // f(p, x[3])
  const int N = g.n_axis;
  const double h = g.spacing();
  if (g.dim == 2) {
    par::parallel_for(static_cast<std::size_t>(N), [&](std::size_t ix) {
      double x[3] = {h * static_cast<double>(ix), 0.0, 0.0};
      for (int iy = 0; iy < N; ++iy) {
        x[1] = h * iy;
        f(ix * N + iy, x);
      }
    });
  } else {
    par::parallel_for(static_cast<std::size_t>(N), [&](std::size_t ix) {
      double x[3] = {h * static_cast<double>(ix), 0.0, 0.0};
      for (int iy = 0; iy < N; ++iy) {
        x[1] = h * iy;
        for (int iz = 0; iz < N; ++iz) {
          x[2] = h * iz;
          f((ix * N + iy) * N + iz, x);
        }
      }
    });
  }
}

}  // namespace

double bump_profile(double r, double radius) {
  double s = r / radius;
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

ScalarField conformal_phi(const Grid& grid, double amplitude, const std::array<int, 3>& modes) {
  ScalarField phi(grid);
  const double L = grid.box;
  fill_pointwise(grid, [&](std::size_t p, const double* x) {
    double v = amplitude;
    if (modes[0] != 0) v *= std::sin(kTwoPi * modes[0] * x[0] / L);
    if (grid.dim >= 2 && modes[1] != 0) v *= std::cos(kTwoPi * modes[1] * x[1] / L);
    if (grid.dim >= 3 && modes[2] != 0) v *= std::cos(kTwoPi * modes[2] * x[2] / L);
    phi[p] = v;
  });
  return phi;
}

MetricField conformal_metric(const ScalarField& phi) {
  const Grid& grid = phi.grid();
  const int n = grid.dim;
  MetricField g(grid);
  par::parallel_for(grid.npts(), [&](std::size_t p) {
    double e = std::exp(2.0 * phi[p]);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g.comp(sym_at(n, i, j))[p] = (i == j) ? e : 0.0;
  });
  return g;
}

FlowState build_initial_data(const Grid& grid, const InitialDataSpec& spec) {
  const int n = grid.dim;
  SymTensorField g(grid), k(grid);
  switch (spec.kind) {
    case InitialDataSpec::Kind::Flat:
    case InitialDataSpec::Kind::Homothetic: {
      double mu = spec.kind == InitialDataSpec::Kind::Flat ? 0.0 : spec.mu;
      par::parallel_for(grid.npts(), [&](std::size_t p) {
        for (int i = 0; i < n; ++i) {
          g.comp(sym_at(n, i, i))[p] = 1.0;
          k.comp(sym_at(n, i, i))[p] = mu;
        }
      });
      break;
    }
    case InitialDataSpec::Kind::ConformalTrig: {
      ScalarField phi = conformal_phi(grid, spec.amplitude, spec.modes);
      g = conformal_metric(phi);
      if (spec.mu != 0.0) {
        for (int c = 0; c < g.ncomp(); ++c) {
          const double* gc = g.comp(c);
          double* kc = k.comp(c);
          par::parallel_for(grid.npts(), [&](std::size_t p) { kc[p] = spec.mu * gc[p]; });
        }
      }
      break;
    }
    case InitialDataSpec::Kind::Bump: {
      const PerturbationSpec& ps = spec.bump;
      if (!(ps.epsilon > 0.0))
        throw std::invalid_argument("PerturbationSpec: epsilon must be positive");
      for (const TensorBumpSpec* b : {&ps.g0, &ps.g1}) {
        for (int a = 0; a < n; ++a) {
          if (b->center[a] - b->radius <= 0.0 || b->center[a] + b->radius >= grid.box)
            throw std::invalid_argument("bump support must lie strictly inside the box");
        }
        for (int c = 0; c < sym_count(n); ++c)
          if (std::abs(b->amplitude[c]) > 1.0)
            throw std::invalid_argument("bump amplitudes must be bounded by 1");
      }
      fill_pointwise(grid, [&](std::size_t p, const double* x) {
        double r0 = 0.0, r1 = 0.0;
        for (int a = 0; a < n; ++a) {
          r0 += (x[a] - ps.g0.center[a]) * (x[a] - ps.g0.center[a]);
          r1 += (x[a] - ps.g1.center[a]) * (x[a] - ps.g1.center[a]);
        }
        double psi0 = bump_profile(std::sqrt(r0), ps.g0.radius);
        double psi1 = bump_profile(std::sqrt(r1), ps.g1.radius);
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            int s = sym_at(n, i, j);
            g.comp(s)[p] = (i == j ? 1.0 : 0.0) + ps.epsilon * ps.g0.amplitude[s] * psi0;
            k.comp(s)[p] = ps.epsilon * ps.g1.amplitude[s] * psi1;
          }
      });
      break;
    }
  }
  return FlowState(0.0, std::move(g), std::move(k));
}

namespace {

struct TrigMode {
  int m[3];
  double amp;
  double phase[3];
};

std::vector<TrigMode> draw_modes(const Grid& grid, std::mt19937_64& rng, double amplitude,
                                 int count) {
  std::uniform_int_distribution<int> mode_dist(-2, 2);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<TrigMode> modes;
  while (static_cast<int>(modes.size()) < count) {
    TrigMode tm{};
    int norm2 = 0;
    for (int a = 0; a < grid.dim; ++a) {
      tm.m[a] = mode_dist(rng);
      norm2 += tm.m[a] * tm.m[a];
      tm.phase[a] = angle(rng);
    }
    if (norm2 == 0) continue;
    tm.amp = amplitude * unit(rng) / (1.0 + norm2);
    modes.push_back(tm);
  }
  return modes;
}

ScalarField eval_modes(const Grid& grid, const std::vector<TrigMode>& modes) {
  ScalarField f(grid);
  const double L = grid.box;
  fill_pointwise(grid, [&](std::size_t p, const double* x) {
    double v = 0.0;
    for (const TrigMode& tm : modes) {
      double term = tm.amp;
      for (int a = 0; a < grid.dim; ++a)
        term *= std::cos(kTwoPi * tm.m[a] * x[a] / L + tm.phase[a]);
      v += term;
    }
    f[p] = v;
  });
  return f;
}

}  // namespace

ScalarField random_smooth_scalar(const Grid& grid, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  return eval_modes(grid, draw_modes(grid, rng, amplitude, 6));
}

SymTensorField random_smooth_sym(const Grid& grid, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  const int n = grid.dim;
  SymTensorField out(grid);
  for (int c = 0; c < sym_count(n); ++c) {
    ScalarField f = eval_modes(grid, draw_modes(grid, rng, amplitude, 4));
    double* o = out.comp(c);
    par::parallel_for(grid.npts(), [&](std::size_t p) { o[p] = f[p]; });
  }
  return out;
}

MetricField random_spd_metric_field(const Grid& grid, std::uint64_t seed, double amplitude) {
  const int n = grid.dim;
  ScalarField phi = random_smooth_scalar(grid, seed, amplitude);
  MetricField g = conformal_metric(phi);
  SymTensorField bump = random_smooth_sym(grid, seed + 1, 0.5 * amplitude);
  for (int c = 0; c < g.ncomp(); ++c) {
    double* gc = g.comp(c);
    const double* bc = bump.comp(c);
    par::parallel_for(grid.npts(), [&](std::size_t p) { gc[p] += bc[p]; });
  }
  invert_metric(g);  // throws if the perturbation broke positivity
  return g;
}

void random_spd_point(int n, std::mt19937_64& rng, double* packed_out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double A[3][3];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i][j] = normal(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = (i == j) ? 0.1 : 0.0;
      for (int q = 0; q < n; ++q) v += A[i][q] * A[j][q];
      packed_out[sym_at(n, i, j)] = v;
    }
}

}  // namespace hypflow
