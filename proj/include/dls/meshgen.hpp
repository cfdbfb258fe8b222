// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

#include "dls/mesh.hpp"

namespace dls {

// Structured triangulation of an axis-aligned rectangle with n x n cells, each
// split by the diagonal from its lower-left to its upper-right corner.
inline SimplicialMesh square_mesh(const Vec& lo, const Vec& hi, int n,
                                  BoundaryTag tag = BoundaryTag::robin) {
  if (n < 1) throw std::invalid_argument("square_mesh: n must be >= 1");
  std::vector<Vec> verts;
  verts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.push_back({lo.x + (hi.x - lo.x) * i / n, lo.y + (hi.y - lo.y) * j / n, 0.0});
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 4>> elems;
  elems.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int p00 = id(i, j), p10 = id(i + 1, j), p01 = id(i, j + 1), p11 = id(i + 1, j + 1);
      elems.push_back({p00, p10, p11, -1});
      elems.push_back({p00, p11, p01, -1});
    }
  return SimplicialMesh(2, std::move(verts), std::move(elems), [tag](const Vec&) { return tag; });
}

inline SimplicialMesh unit_square_mesh(int n) { return square_mesh({0, 0, 0}, {1, 1, 0}, n); }

// Kuhn split of an axis-aligned box into n^3 cells of 6 tetrahedra each; all
// cells share the main-diagonal direction, so cell interfaces match.
inline SimplicialMesh box_mesh(const Vec& lo, const Vec& hi, int n,
                               BoundaryTag tag = BoundaryTag::robin) {
  if (n < 1) throw std::invalid_argument("box_mesh: n must be >= 1");
  std::vector<Vec> verts;
  verts.reserve((n + 1) * (n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        verts.push_back({lo.x + (hi.x - lo.x) * i / n, lo.y + (hi.y - lo.y) * j / n,
                         lo.z + (hi.z - lo.z) * k / n});
  auto id = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<int, 4>> elems;
  elems.reserve(6 * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          int c[3] = {i, j, k};
          std::array<int, 4> tet;
          tet[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            c[p[s]] += 1;
            tet[s + 1] = id(c[0], c[1], c[2]);
          }
          elems.push_back(tet);
        }
  return SimplicialMesh(3, std::move(verts), std::move(elems), [tag](const Vec&) { return tag; });
}

inline SimplicialMesh cube_mesh(int n) { return box_mesh({-1, -1, -1}, {1, 1, 1}, n); }

// L-shaped domain (-1,1)^2 minus the closed quadrant [0,1) x (-1,0]: three
// unit squares meshed identically with n x n cells each.
inline SimplicialMesh l_shape_mesh(int n) {
  if (n < 1) throw std::invalid_argument("l_shape_mesh: n must be >= 1");
  const int N = 2 * n;
  std::vector<Vec> grid;
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i) grid.push_back({-1.0 + 2.0 * i / N, -1.0 + 2.0 * j / N, 0.0});
  auto id = [N](int i, int j) { return j * (N + 1) + i; };
  std::vector<std::array<int, 4>> elems;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      if (i >= n && j < n) continue;  // removed quadrant
      int p00 = id(i, j), p10 = id(i + 1, j), p01 = id(i, j + 1), p11 = id(i + 1, j + 1);
      elems.push_back({p00, p10, p11, -1});
      elems.push_back({p00, p11, p01, -1});
    }
  // Compact away the unused grid vertices.
  std::vector<int> remap(grid.size(), -1);
  std::vector<Vec> verts;
  for (auto& el : elems)
    for (int d = 0; d < 3; ++d) {
      int& v = el[d];
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(verts.size());
        verts.push_back(grid[v]);
      }
      v = remap[v];
    }
  return SimplicialMesh(2, std::move(verts), std::move(elems),
                        [](const Vec&) { return BoundaryTag::robin; });
}

// Polygonal approximation of the ring a < r < 2a: `segments` chords per circle
// and n_layers radial layers. Inner ring is tagged Dirichlet, outer ring Robin.
inline SimplicialMesh annulus_mesh(double a, int segments, int n_layers) {
  if (!(a > 0.0)) throw std::invalid_argument("annulus_mesh: a must be positive");
  if (segments < 16) throw std::invalid_argument("annulus_mesh: segments must be >= 16");
  if (n_layers < 1) throw std::invalid_argument("annulus_mesh: n_layers must be >= 1");
  std::vector<Vec> verts;
  for (int j = 0; j <= n_layers; ++j) {
    double r = a * (1.0 + double(j) / n_layers);
    for (int i = 0; i < segments; ++i) {
      double t = 2.0 * M_PI * i / segments;
      verts.push_back({r * std::cos(t), r * std::sin(t), 0.0});
    }
  }
  auto id = [segments](int i, int j) { return j * segments + (i % segments); };
  std::vector<std::array<int, 4>> elems;
  for (int j = 0; j < n_layers; ++j)
    for (int i = 0; i < segments; ++i) {
      int p00 = id(i, j), p10 = id(i + 1, j), p01 = id(i, j + 1), p11 = id(i + 1, j + 1);
      elems.push_back({p00, p10, p11, -1});
      elems.push_back({p00, p11, p01, -1});
    }
  const double split = 1.5 * a;
  return SimplicialMesh(2, std::move(verts), std::move(elems), [split](const Vec& c) {
    return std::hypot(c.x, c.y) < split ? BoundaryTag::dirichlet : BoundaryTag::robin;
  });
}

struct DomainSpec {
  enum class Kind { unit_square, square, cube, l_shape, annulus };
  Kind kind = Kind::unit_square;
  Vec lo{0, 0, 0}, hi{1, 1, 0};  // for square
  double a = 1.0;                // annulus inner radius
  int segments = 64;
};

// generate_structured(domain, n): n is the cell count per axis (layer count
// for the annulus); the nominal mesh-size label is 1/n.
inline SimplicialMesh generate_structured(const DomainSpec& dom, int n) {
  switch (dom.kind) {
    case DomainSpec::Kind::unit_square:
      return unit_square_mesh(n);
    case DomainSpec::Kind::square:
      return square_mesh(dom.lo, dom.hi, n);
    case DomainSpec::Kind::cube:
      return cube_mesh(n);
    case DomainSpec::Kind::l_shape:
      return l_shape_mesh(n);
    case DomainSpec::Kind::annulus:
      return annulus_mesh(dom.a, dom.segments, n);
  }
  throw std::logic_error("generate_structured: unknown domain");
}

}  // namespace dls
