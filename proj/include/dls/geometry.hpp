// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace dls {

using cplx = std::complex<double>;
inline constexpr cplx I_UNIT{0.0, 1.0};

// Point / vector in physical space. The z component stays at zero in 2D so
// distances, dot products and cross products work unchanged in either
// dimension.
struct Vec {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  bool operator==(const Vec&) const = default;

  Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec& operator+=(const Vec& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

// Complex-valued vector field value (gradients, flux variables).
struct CVec {
  cplx x{0.0}, y{0.0}, z{0.0};

  cplx& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  cplx operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  CVec operator+(const CVec& o) const { return {x + o.x, y + o.y, z + o.z}; }
  CVec operator-(const CVec& o) const { return {x - o.x, y - o.y, z - o.z}; }
  CVec operator*(cplx s) const { return {x * s, y * s, z * s}; }
};

inline CVec operator*(cplx s, const CVec& v) { return v * s; }

// n·v for a real normal and a complex field.
inline cplx dot(const Vec& n, const CVec& v) { return n.x * v.x + n.y * v.y + n.z * v.z; }
inline double norm2(const CVec& v) { return std::norm(v.x) + std::norm(v.y) + std::norm(v.z); }

// Binomial coefficient; small arguments only (basis dimensions, quadrature).
inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace dls
