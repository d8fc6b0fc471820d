#include "hypflow/fd.hpp"

#include <stdexcept>
#include <vector>

#include "hypflow/parallel.hpp"
#include "hypflow/wrap.hpp"

namespace hypflow {

namespace {

template <class Stencil>
void for_axis(const Grid& g, int axis, Stencil&& st) {
  const int N = g.n_axis;
  const WrapTable w(N, static_cast<long long>(g.stride(axis)));
  if (g.dim == 2) {
    par::parallel_for(static_cast<std::size_t>(N), [&](std::size_t ix) {
      for (int iy = 0; iy < N; ++iy) {
        std::size_t p = ix * N + iy;
        int c = axis == 0 ? static_cast<int>(ix) : iy;
        st(p, w.p1[c], w.m1[c], w.p2[c], w.m2[c]);
      }
    });
  } else {
    par::parallel_for(static_cast<std::size_t>(N), [&](std::size_t ix) {
      for (int iy = 0; iy < N; ++iy)
        for (int iz = 0; iz < N; ++iz) {
          std::size_t p = (ix * N + iy) * N + iz;
          int c = axis == 0 ? static_cast<int>(ix) : (axis == 1 ? iy : iz);
          st(p, w.p1[c], w.m1[c], w.p2[c], w.m2[c]);
        }
    });
  }
}

}  // namespace

void diff1(const Grid& g, const double* in, double* out, int axis, int order) {
  const double h = g.spacing();
  if (order == 2) {
    const double c = 1.0 / (2.0 * h);
    for_axis(g, axis, [&](std::size_t p, long long p1, long long m1, long long, long long) {
      out[p] = c * (in[p + p1] - in[p + m1]);
    });
  } else if (order == 4) {
    const double c = 1.0 / (12.0 * h);
    for_axis(g, axis, [&](std::size_t p, long long p1, long long m1, long long p2, long long m2) {
      out[p] = c * (-in[p + p2] + 8.0 * in[p + p1] - 8.0 * in[p + m1] + in[p + m2]);
    });
  } else {
    throw std::invalid_argument("diff1: order must be 2 or 4");
  }
}

void diff2(const Grid& g, const double* in, double* out, int a, int b, int order) {
  const double h = g.spacing();
  if (order == 2) {
    const double c = 1.0 / (4.0 * h * h);
    if (a == b) {
      for_axis(g, a, [&](std::size_t p, long long, long long, long long p2, long long m2) {
        out[p] = c * (in[p + p2] - 2.0 * in[p] + in[p + m2]);
      });
    } else {
      // mixed: difference along b of the difference along a, fused
      const int N = g.n_axis;
      const WrapTable wa(N, static_cast<long long>(g.stride(a)));
      const WrapTable wb(N, static_cast<long long>(g.stride(b)));
      auto coord = [N](std::size_t p, const Grid& gr, int axis) {
        long long s = static_cast<long long>(gr.stride(axis));
        return static_cast<int>((static_cast<long long>(p) / s) % N);
      };
      par::parallel_for(g.npts(), [&](std::size_t p) {
        int ca = coord(p, g, a), cb = coord(p, g, b);
        long long ap = wa.p1[ca], am = wa.m1[ca], bp = wb.p1[cb], bm = wb.m1[cb];
        out[p] = c * (in[p + ap + bp] - in[p + ap + bm] - in[p + am + bp] + in[p + am + bm]);
      });
    }
  } else {
    std::vector<double> tmp(g.npts());
    diff1(g, in, tmp.data(), a, order);
    diff1(g, tmp.data(), out, b, order);
  }
}

}  // namespace hypflow
