#ifndef HYPFLOW_TESTS_SUPPORT_HPP
#define HYPFLOW_TESTS_SUPPORT_HPP

#include <cmath>
#include <functional>

#include "hypflow/field.hpp"
#include "hypflow/grid.hpp"
#include "hypflow/initial_data.hpp"
#include "hypflow/parallel.hpp"

namespace hftest {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline hypflow::MetricField flat_metric(const hypflow::Grid& g) {
  hypflow::InitialDataSpec spec;
  return hypflow::build_initial_data(g, spec).g;
}

inline hypflow::SymTensorField scaled_identity(const hypflow::Grid& g, double c) {
  hypflow::SymTensorField out(g);
  for (int i = 0; i < g.dim; ++i) {
    double* v = out.comp(hypflow::sym_index(g.dim, i, i));
    for (std::size_t p = 0; p < g.npts(); ++p) v[p] = c;
  }
  return out;
}

// fill a scalar field from x -> f(x)
inline hypflow::ScalarField scalar_from(const hypflow::Grid& g,
                                        const std::function<double(const double*)>& f) {
  hypflow::ScalarField out(g);
  const int N = g.n_axis;
  const double h = g.spacing();
  if (g.dim == 2) {
    for (int ix = 0; ix < N; ++ix)
      for (int iy = 0; iy < N; ++iy) {
        double x[3] = {h * ix, h * iy, 0};
        out[static_cast<std::size_t>(ix) * N + iy] = f(x);
      }
  } else {
    for (int ix = 0; ix < N; ++ix)
      for (int iy = 0; iy < N; ++iy)
        for (int iz = 0; iz < N; ++iz) {
          double x[3] = {h * ix, h * iy, h * iz};
          out[(static_cast<std::size_t>(ix) * N + iy) * N + iz] = f(x);
        }
  }
  return out;
}

inline double sup_abs(const hypflow::FieldStorage& f) {
  double m = 0.0;
  for (int c = 0; c < f.ncomp(); ++c)
    for (std::size_t p = 0; p < f.npts(); ++p) m = std::max(m, std::abs(f.comp(c)[p]));
  return m;
}

inline double sup_diff(const hypflow::FieldStorage& a, const hypflow::FieldStorage& b) {
  double m = 0.0;
  for (int c = 0; c < a.ncomp(); ++c)
    for (std::size_t p = 0; p < a.npts(); ++p)
      m = std::max(m, std::abs(a.comp(c)[p] - b.comp(c)[p]));
  return m;
}

inline bool bit_equal(const hypflow::FieldStorage& a, const hypflow::FieldStorage& b) {
  return a.raw() == b.raw();
}

}  // namespace hftest

#endif
