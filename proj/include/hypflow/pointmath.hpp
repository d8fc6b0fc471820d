#ifndef HYPFLOW_POINTMATH_HPP
#define HYPFLOW_POINTMATH_HPP

#include <cmath>

#include "hypflow/grid.hpp"

namespace hypflow {

// Packed symmetric index tables for n <= 3 (i,j unrestricted).
inline constexpr int kSym2[2][2] = {{0, 1}, {1, 2}};
inline constexpr int kSym3[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
inline constexpr int kPair3[3][3] = {{-1, 0, 1}, {0, -1, 2}, {1, 2, -1}};

inline int sym_at(int n, int i, int j) { return n == 2 ? kSym2[i][j] : kSym3[i][j]; }

inline void sym_to_full(int n, const double* s, double m[3][3]) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = s[sym_at(n, i, j)];
}

inline double sym_max_diag(int n, const double* s) {
  double m = s[sym_at(n, 0, 0)];
  for (int i = 1; i < n; ++i) {
    double v = s[sym_at(n, i, i)];
    if (v > m) m = v;
  }
  return m;
}

/// Closed-form inverse of a packed symmetric 2x2 or 3x3 matrix.
inline void sym_inverse(int n, const double* s, double* out, double* det_out) {
  if (n == 2) {
    double a = s[0], b = s[1], c = s[2];
    double det = a * c - b * b;
    out[0] = c / det;
    out[1] = -b / det;
    out[2] = a / det;
    if (det_out) *det_out = det;
  } else {
    double a = s[0], b = s[1], c = s[2], d = s[3], e = s[4], f = s[5];
    // [[a,b,c],[b,d,e],[c,e,f]]
    double A = d * f - e * e;
    double B = c * e - b * f;
    double C = b * e - c * d;
    double det = a * A + b * B + c * C;
    out[0] = A / det;
    out[1] = B / det;
    out[2] = C / det;
    out[3] = (a * f - c * c) / det;
    out[4] = (b * c - a * e) / det;
    out[5] = (a * d - b * b) / det;
    if (det_out) *det_out = det;
  }
}

inline double sym_det(int n, const double* s) {
  if (n == 2) return s[0] * s[2] - s[1] * s[1];
  double a = s[0], b = s[1], c = s[2], d = s[3], e = s[4], f = s[5];
  return a * (d * f - e * e) + b * (c * e - b * f) + c * (b * e - c * d);
}

/// True iff all eigenvalues of the packed symmetric matrix exceed `shift`
/// (Cholesky of M - shift*I succeeds with strictly positive pivots).
inline bool sym_positive_beyond(int n, const double* s, double shift) {
  double m[3][3];
  sym_to_full(n, s, m);
  for (int i = 0; i < n; ++i) m[i][i] -= shift;
  double L[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = m[i][j];
      for (int k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        L[i][i] = std::sqrt(sum);
      } else {
        L[i][j] = sum / L[j][j];
      }
    }
  }
  return true;
}

/// Cholesky factor of a packed symmetric positive definite matrix.
/// Returns false when the matrix is not positive definite.
inline bool sym_cholesky(int n, const double* s, double L[3][3]) {
  double m[3][3];
  sym_to_full(n, s, m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) L[i][j] = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = m[i][j];
      for (int k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        L[i][i] = std::sqrt(sum);
      } else {
        L[i][j] = sum / L[j][j];
      }
    }
  }
  return true;
}

/// Smallest eigenvalue of a packed symmetric 2x2 or 3x3 matrix (analytic).
double sym_min_eig(int n, const double* s);

/// SPD guard threshold at one point: 1e-10 times the largest diagonal entry.
inline double spd_threshold(int n, const double* s) {
  return 1e-10 * sym_max_diag(n, s);
}

}  // namespace hypflow

#endif
