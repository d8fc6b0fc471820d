#ifndef HYPFLOW_FD_HPP
#define HYPFLOW_FD_HPP

#include "hypflow/field.hpp"
#include "hypflow/grid.hpp"

namespace hypflow {

/// Centered periodic first difference along `axis` (0-based), order 2 or 4.
void diff1(const Grid& g, const double* in, double* out, int axis, int order);

/// Second difference along (a,b) as the exact composition of two centered
/// first differences (wide stencil on the diagonal). The first-order
/// reduction applies one centered difference to a stored derivative field,
/// so this choice makes both code paths algebraically identical.
void diff2(const Grid& g, const double* in, double* out, int a, int b, int order);

template <class FieldT>
FieldT partial(const FieldT& f, int axis, int order = 2) {
  FieldT out = f;
  for (int c = 0; c < f.ncomp(); ++c) diff1(f.grid(), f.comp(c), out.comp(c), axis, order);
  return out;
}

template <class FieldT>
FieldT second_partial(const FieldT& f, int a, int b, int order = 2) {
  FieldT out = f;
  for (int c = 0; c < f.ncomp(); ++c) diff2(f.grid(), f.comp(c), out.comp(c), a, b, order);
  return out;
}

}  // namespace hypflow

#endif
