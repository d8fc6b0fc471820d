#ifndef HYPFLOW_PARALLEL_HPP
#define HYPFLOW_PARALLEL_HPP

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hypflow::par {

/// Set the worker thread count (0 keeps the current/default setting).
void set_threads(int t);
int thread_count();

/// Chunk length for deterministic reductions. Results are combined in fixed
/// chunk order, so sums are bit-identical for every thread count.
inline constexpr std::size_t kChunk = 8192;

template <class F>
inline void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    body(static_cast<std::size_t>(i));
}

/// Deterministic sum of term(i) for i in [0,n).
template <class F>
inline double chunked_sum(std::size_t n, F&& term) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    std::size_t b = static_cast<std::size_t>(c) * kChunk;
    std::size_t e = b + kChunk < n ? b + kChunk : n;
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

/// Deterministic max of term(i); n must be positive.
template <class F>
inline double chunked_max(std::size_t n, F&& term) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    std::size_t b = static_cast<std::size_t>(c) * kChunk;
    std::size_t e = b + kChunk < n ? b + kChunk : n;
    double m = term(b);
    for (std::size_t i = b + 1; i < e; ++i) {
      double v = term(i);
      if (v > m) m = v;
    }
    partial[static_cast<std::size_t>(c)] = m;
  }
  double total = partial[0];
  for (double m : partial)
    if (m > total) total = m;
  return total;
}

template <class F>
inline double chunked_min(std::size_t n, F&& term) {
  return -chunked_max(n, [&](std::size_t i) { return -term(i); });
}

}  // namespace hypflow::par

#endif
