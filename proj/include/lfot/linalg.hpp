#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "lfot/dual.hpp"

namespace lfot {

// Dense row-major matrix over an arbitrary scalar (double or nested duals).
// Sizes here are tiny (chart dimension or atom counts), no blocking needed.
template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> d;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), d(static_cast<size_t>(r) * c, T(0.0)) {}
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }
  T& operator()(int i, int j) { return d[static_cast<size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return d[static_cast<size_t>(i) * cols + j]; }
};

using Matd = Mat<double>;

template <class T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows, a.cols);
  for (size_t i = 0; i < a.d.size(); ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

template <class T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows, a.cols);
  for (size_t i = 0; i < a.d.size(); ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

template <class T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      T aik = a(i, k);
      for (int j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

template <class T>
Mat<T> operator*(double c, const Mat<T>& a) {
  Mat<T> r(a.rows, a.cols);
  for (size_t i = 0; i < a.d.size(); ++i) r.d[i] = c * a.d[i];
  return r;
}

template <class T>
std::vector<T> matvec(const Mat<T>& a, std::span<const T> x) {
  std::vector<T> y(a.rows, T(0.0));
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) y[i] += a(i, j) * x[j];
  return y;
}

template <class T>
Mat<T> transpose(const Mat<T>& a) {
  Mat<T> r(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) r(j, i) = a(i, j);
  return r;
}

template <class T>
T trace(const Mat<T>& a) {
  T s(0.0);
  for (int i = 0; i < a.rows; ++i) s += a(i, i);
  return s;
}

// In-place LU factorization with partial pivoting (pivot choice on value
// parts so the same code runs on dual scalars). Returns false on a
// numerically singular matrix.
template <class T>
bool lu_factor(Mat<T>& a, std::vector<int>& piv, double* det_sign = nullptr) {
  int n = a.rows;
  piv.resize(n);
  double sign = 1.0;
  for (int i = 0; i < n; ++i) piv[i] = i;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(value(a(k, k)));
    for (int i = k + 1; i < n; ++i) {
      double m = std::fabs(value(a(i, k)));
      if (m > best) { best = m; p = i; }
    }
    if (best == 0.0) return false;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(piv[k], piv[p]);
      sign = -sign;
    }
    T inv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) {
      T f = a(i, k) * inv;
      a(i, k) = f;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  if (det_sign) *det_sign = sign;
  return true;
}

template <class T>
std::vector<T> lu_solve(const Mat<T>& lu, const std::vector<int>& piv, std::span<const T> b) {
  int n = lu.rows;
  std::vector<T> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[piv[i]];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
    x[i] = x[i] / lu(i, i);
  }
  return x;
}

template <class T>
std::vector<T> solve(Mat<T> a, std::vector<T> b) {
  std::vector<int> piv;
  if (!lu_factor(a, piv)) throw std::runtime_error("lfot: singular linear system");
  return lu_solve(a, piv, std::span<const T>(b));
}

template <class T>
Mat<T> inverse(Mat<T> a) {
  int n = a.rows;
  std::vector<int> piv;
  if (!lu_factor(a, piv)) throw std::runtime_error("lfot: singular matrix");
  Mat<T> inv(n, n);
  std::vector<T> e(n, T(0.0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) e[i] = (i == j) ? T(1.0) : T(0.0);
    auto col = lu_solve(a, piv, std::span<const T>(e));
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

template <class T>
T determinant(Mat<T> a) {
  std::vector<int> piv;
  double sign = 1.0;
  if (!lu_factor(a, piv, &sign)) return T(0.0);
  T det(sign);
  for (int i = 0; i < a.rows; ++i) det *= a(i, i);
  return det;
}

// Eigenvalues of a small symmetric matrix by cyclic Jacobi sweeps.
inline std::vector<double> symmetric_eigenvalues(Matd a) {
  int n = a.rows;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  return ev;
}

// Deterministic pairwise tree sum; reduction order is independent of any
// threading so reports stay bit-stable.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() == 0) return 0.0;
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  size_t h = x.size() / 2;
  return pairwise_sum(x.subspan(0, h)) + pairwise_sum(x.subspan(h));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace lfot
