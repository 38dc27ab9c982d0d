#pragma once

// Small fixed-capacity vectors and matrices for spatial dimensions 2..4.
// Everything is by value; dimension is a runtime quantity bounded by kMaxDim.

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>

#include "qcflow/core/errors.hpp"

namespace qcflow {

inline constexpr int kMaxDim = 4;

struct Vec {
  int n = 0;
  std::array<double, kMaxDim> a{};

  Vec() = default;
  explicit Vec(int dim) : n(dim) { assert(dim >= 1 && dim <= kMaxDim); }
  Vec(double x, double y) : n(2), a{x, y} {}
  Vec(double x, double y, double z) : n(3), a{x, y, z} {}

  double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n; ++i) a[i] += o.a[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n; ++i) a[i] -= o.a[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n; ++i) a[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec l, const Vec& r) { return l += r; }
  friend Vec operator-(Vec l, const Vec& r) { return l -= r; }
  friend Vec operator*(Vec v, double s) { return v *= s; }
  friend Vec operator*(double s, Vec v) { return v *= s; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += a[i] * o.a[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double norm_inf() const {
    double m = 0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
    return m;
  }
  bool finite() const {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(a[i])) return false;
    return true;
  }

  static Vec zero(int dim) { return Vec(dim); }
};

struct Mat {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> a{};

  Mat() = default;
  explicit Mat(int dim) : n(dim) { assert(dim >= 1 && dim <= kMaxDim); }

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat zero(int dim) { return Mat(dim); }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < n * n; ++i) a[i] += o.a[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (int i = 0; i < n * n; ++i) a[i] -= o.a[i];
    return *this;
  }
  Mat& operator*=(double s) {
    for (int i = 0; i < n * n; ++i) a[i] *= s;
    return *this;
  }
  friend Mat operator+(Mat l, const Mat& r) { return l += r; }
  friend Mat operator-(Mat l, const Mat& r) { return l -= r; }
  friend Mat operator*(Mat m, double s) { return m *= s; }
  friend Mat operator*(double s, Mat m) { return m *= s; }

  Vec operator*(const Vec& v) const {
    Vec r(n);
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  Mat operator*(const Mat& o) const {
    Mat r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const double lik = (*this)(i, k);
        for (int j = 0; j < n; ++j) r(i, j) += lik * o(k, j);
      }
    return r;
  }

  Mat transpose() const {
    Mat r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  double trace() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += (*this)(i, i);
    return s;
  }

  double max_abs() const {
    double m = 0;
    for (int i = 0; i < n * n; ++i) m = std::max(m, std::abs(a[i]));
    return m;
  }

  bool finite() const {
    for (int i = 0; i < n * n; ++i)
      if (!std::isfinite(a[i])) return false;
    return true;
  }

  // Determinant by partial-pivot elimination; exact formulas for n <= 2.
  double det() const {
    if (n == 1) return a[0];
    if (n == 2) return a[0] * a[3] - a[1] * a[2];
    Mat m = *this;
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int r = c + 1; r < n; ++r)
        if (std::abs(m(r, c)) > std::abs(m(p, c))) p = r;
      if (m(p, c) == 0.0) return 0.0;
      if (p != c) {
        for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
        d = -d;
      }
      d *= m(c, c);
      for (int r = c + 1; r < n; ++r) {
        const double f = m(r, c) / m(c, c);
        for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
      }
    }
    return d;
  }
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps.
inline Vec symmetric_eigenvalues(Mat m) {
  const int n = m.n;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (off < 1e-30 * (1.0 + m.max_abs() * m.max_abs())) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (m(p, q) == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
  }
  Vec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  return ev;
}

// Spectral (operator) norm: largest singular value.
inline double operator_norm(const Mat& m) {
  const Mat g = m.transpose() * m;
  const Vec ev = symmetric_eigenvalues(g);
  double lmax = 0;
  for (int i = 0; i < m.n; ++i) lmax = std::max(lmax, ev[i]);
  return std::sqrt(std::max(0.0, lmax));
}

// Axis-aligned box in R^n.
struct Box {
  Vec lo, hi;

  Box() = default;
  Box(const Vec& lo, const Vec& hi) : lo(lo), hi(hi) {
    if (lo.n != hi.n) throw ArgumentError("box corners have mismatched dimension");
    for (int i = 0; i < lo.n; ++i)
      if (!(lo[i] < hi[i])) throw ArgumentError("box is empty along an axis");
  }
  static Box cube(int dim, double lo, double hi) {
    Vec l(dim), h(dim);
    for (int i = 0; i < dim; ++i) {
      l[i] = lo;
      h[i] = hi;
    }
    return Box(l, h);
  }

  int dim() const { return lo.n; }
  double extent(int axis) const { return hi[axis] - lo[axis]; }
  double diameter() const {
    double s = 0;
    for (int i = 0; i < dim(); ++i) s += extent(i) * extent(i);
    return std::sqrt(s);
  }
  double volume() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= extent(i);
    return v;
  }
  bool contains(const Vec& x, double slack = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    return true;
  }
  Box shrunk(double margin) const {
    Vec l = lo, h = hi;
    for (int i = 0; i < dim(); ++i) {
      l[i] += margin;
      h[i] -= margin;
      if (!(l[i] < h[i])) throw ArgumentError("box shrink margin exceeds half extent");
    }
    return Box(l, h);
  }
};

}  // namespace qcflow
