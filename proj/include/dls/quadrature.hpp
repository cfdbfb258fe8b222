// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "dls/geometry.hpp"

namespace dls {

// Quadrature rule on the reference simplex of the given dimension
// (segment [0,1], unit triangle, unit tetrahedron). Points are stored in
// barycentric coordinates (dim+1 entries, first one is 1 - sum of the rest);
// weights sum to the reference measure (1, 1/2, 1/6).
struct QuadratureRule {
  int dim = 0;
  int exactness = 0;
  std::vector<std::array<double, 4>> points;  // barycentric, unused entries zero
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }

  // Reference Cartesian coordinates of point q (drops the leading barycentric).
  Vec ref_point(std::size_t q) const {
    return {points[q][1], dim > 1 ? points[q][2] : 0.0, dim > 2 ? points[q][3] : 0.0};
  }

  static double reference_measure(int dim) {
    return dim == 1 ? 1.0 : (dim == 2 ? 0.5 : 1.0 / 6.0);
  }
};

namespace detail {

// Gauss-Legendre nodes/weights on [0,1], by Newton iteration on P_n.
inline void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess on [-1,1].
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {  // recurrence up to P_n(t)
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x[i] = 0.5 * (1.0 + t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // already normalized for [0,1]
  }
}

}  // namespace detail

inline constexpr int kMaxQuadratureExactness = 20;

// Rule exact for all polynomials of total degree <= exactness on the reference
// simplex. Built as a collapsed (Duffy) tensor product of Gauss-Legendre rules;
// the coordinate-map Jacobian is a polynomial absorbed by raising the 1D order,
// so exactness is exact, all weights are positive, and they sum to the
// reference measure.
inline QuadratureRule volume_rule(int dim, int exactness) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("volume_rule: dim must be 1, 2 or 3");
  if (exactness < 0 || exactness > kMaxQuadratureExactness)
    throw std::invalid_argument("volume_rule: exactness out of shipped range [0, 20]");

  static std::map<std::pair<int, int>, QuadratureRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({dim, exactness});
  if (it != cache.end()) return it->second;

  const int d = exactness;
  QuadratureRule rule;
  rule.dim = dim;
  rule.exactness = exactness;

  std::vector<double> gx[3], gw[3];
  // The collapsed-coordinate Jacobian raises the polynomial degree by j in
  // the j-th direction (0 = xi, innermost), so the 1D orders grow outward.
  for (int j = 0; j < dim; ++j) {
    int need = d + j;
    int npts = need / 2 + 1;
    detail::gauss_legendre_01(npts, gx[j], gw[j]);
  }

  if (dim == 1) {
    for (std::size_t i = 0; i < gx[0].size(); ++i) {
      rule.points.push_back({1.0 - gx[0][i], gx[0][i], 0.0, 0.0});
      rule.weights.push_back(gw[0][i]);
    }
  } else if (dim == 2) {
    // x = xi (1-eta), y = eta; Jacobian (1-eta).
    for (std::size_t a = 0; a < gx[0].size(); ++a)
      for (std::size_t b = 0; b < gx[1].size(); ++b) {
        double xi = gx[0][a], eta = gx[1][b];
        double x = xi * (1.0 - eta), y = eta;
        rule.points.push_back({1.0 - x - y, x, y, 0.0});
        rule.weights.push_back(gw[0][a] * gw[1][b] * (1.0 - eta));
      }
  } else {
    // x = xi (1-eta)(1-zeta), y = eta (1-zeta), z = zeta;
    // Jacobian (1-eta)(1-zeta)^2.
    for (std::size_t a = 0; a < gx[0].size(); ++a)
      for (std::size_t b = 0; b < gx[1].size(); ++b)
        for (std::size_t c = 0; c < gx[2].size(); ++c) {
          double xi = gx[0][a], eta = gx[1][b], zeta = gx[2][c];
          double x = xi * (1.0 - eta) * (1.0 - zeta);
          double y = eta * (1.0 - zeta);
          double z = zeta;
          rule.points.push_back({1.0 - x - y - z, x, y, z});
          rule.weights.push_back(gw[0][a] * gw[1][b] * gw[2][c] * (1.0 - eta) * (1.0 - zeta) *
                                 (1.0 - zeta));
        }
  }
  cache[{dim, exactness}] = rule;
  return rule;
}

// Rule on a face of a dim-dimensional simplex, i.e. a simplex of dimension
// face_dim = dim - 1 (segment in 2D, triangle in 3D).
inline QuadratureRule face_rule(int face_dim, int exactness) { return volume_rule(face_dim, exactness); }

}  // namespace dls
