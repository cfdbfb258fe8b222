// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dls/geometry.hpp"

namespace dls {

enum class BoundaryTag { none, dirichlet, robin };

// Key identifying a face by its sorted vertex indices.
using FaceKey = std::array<int, 3>;  // third entry -1 in 2D

inline FaceKey make_face_key(std::array<int, 3> v, int face_dim) {
  if (face_dim == 1) {
    v[2] = -1;
    if (v[0] > v[1]) std::swap(v[0], v[1]);
  } else {
    std::sort(v.begin(), v.end());
  }
  return v;
}

struct Face {
  std::array<int, 3> verts{{-1, -1, -1}};  // sorted
  int owner = -1;                          // element with the lower index
  int neighbor = -1;                       // -1 on boundary faces
  BoundaryTag tag = BoundaryTag::none;     // set on boundary faces only
};

// Per-face geometric data; the normal is oriented from owner to neighbor
// (outward on boundary faces).
struct FaceGeometry {
  double diameter = 0.0;  // h_e: max pairwise vertex distance
  double measure = 0.0;   // length (2D) or area (3D)
  Vec normal;
  Vec centroid;
};

struct ElementGeometry {
  Vec v0;
  double jac[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};      // columns v_i - v0
  double inv_jac[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};  // padded identity in 2D
  double det_jac = 1.0;
  double volume = 0.0;
  double diameter = 0.0;  // h_K
  Vec centroid;
};

// Conforming simplicial mesh (triangles in 2D, tetrahedra in 3D) with a face
// list built once at construction for O(1) neighbor lookup. Instances are
// immutable after construction; refinement returns a new mesh.
class SimplicialMesh {
 public:
  int dim = 2;
  std::vector<Vec> vertices;
  std::vector<std::array<int, 4>> elements;       // 4th entry -1 in 2D
  std::vector<Face> faces;
  std::vector<std::array<int, 4>> element_faces;  // face index opposite local vertex i
  std::vector<ElementGeometry> elem_geom;
  std::vector<FaceGeometry> face_geom;

  SimplicialMesh() = default;

  // Builds adjacency and geometry. boundary_tags maps sorted boundary-face
  // vertex tuples to their tag; every boundary face must be covered.
  SimplicialMesh(int dim_, std::vector<Vec> verts, std::vector<std::array<int, 4>> elems,
                 const std::map<FaceKey, BoundaryTag>& boundary_tags)
      : dim(dim_), vertices(std::move(verts)), elements(std::move(elems)) {
    if (dim < 2 || dim > 3) throw std::invalid_argument("SimplicialMesh: dim must be 2 or 3");
    fix_orientation();
    build_faces();
    assign_tags([&](const Face& f) {
      auto it = boundary_tags.find(make_face_key(f.verts, dim - 1));
      if (it == boundary_tags.end())
        throw std::runtime_error("SimplicialMesh: boundary face without tag (non-conforming input?)");
      return it->second;
    });
    build_geometry();
  }

  // Same, with tags resolved by a predicate on the face centroid.
  SimplicialMesh(int dim_, std::vector<Vec> verts, std::vector<std::array<int, 4>> elems,
                 const std::function<BoundaryTag(const Vec&)>& tagger)
      : dim(dim_), vertices(std::move(verts)), elements(std::move(elems)) {
    if (dim < 2 || dim > 3) throw std::invalid_argument("SimplicialMesh: dim must be 2 or 3");
    fix_orientation();
    build_faces();
    assign_tags([&](const Face& f) { return tagger(face_centroid(f)); });
    build_geometry();
  }

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  int verts_per_element() const { return dim + 1; }
  int verts_per_face() const { return dim; }

  double total_volume() const {
    double v = 0.0;
    for (const auto& g : elem_geom) v += g.volume;
    return v;
  }
  double max_diameter() const {
    double h = 0.0;
    for (const auto& g : elem_geom) h = std::max(h, g.diameter);
    return h;
  }
  double min_diameter() const {
    double h = elem_geom.empty() ? 0.0 : elem_geom[0].diameter;
    for (const auto& g : elem_geom) h = std::min(h, g.diameter);
    return h;
  }

  // h_K / rho_K over all elements; rho_K is the inscribed ball diameter.
  double worst_shape_ratio() const {
    double worst = 0.0;
    for (int e = 0; e < n_elements(); ++e) worst = std::max(worst, shape_ratio(e));
    return worst;
  }

  double shape_ratio(int e) const {
    const auto& g = elem_geom[e];
    double rho;
    if (dim == 2) {
      double per = 0.0;
      for (int i = 0; i < 3; ++i)
        per += distance(vertices[elements[e][i]], vertices[elements[e][(i + 1) % 3]]);
      rho = 4.0 * g.volume / per;
    } else {
      double area = 0.0;
      for (int f = 0; f < 4; ++f) area += face_geom[element_faces[e][f]].measure;
      rho = 6.0 * g.volume / area;
    }
    return g.diameter / rho;
  }

  // Re-derives face sharing from scratch: every face must belong to one
  // (boundary) or two (interior) elements, matching the stored adjacency.
  bool conforming() const {
    std::map<FaceKey, int> count;
    for (int e = 0; e < n_elements(); ++e)
      for (int lf = 0; lf < verts_per_element(); ++lf) count[make_face_key(local_face_verts(e, lf), dim - 1)]++;
    for (const auto& [key, c] : count)
      if (c != 1 && c != 2) return false;
    for (const auto& f : faces) {
      int c = count[make_face_key(f.verts, dim - 1)];
      if ((f.neighbor >= 0) != (c == 2)) return false;
      if (f.neighbor < 0 && f.tag == BoundaryTag::none) return false;
    }
    return true;
  }

  std::array<int, 3> local_face_verts(int e, int local_face) const {
    std::array<int, 3> v{{-1, -1, -1}};
    int k = 0;
    for (int i = 0; i < verts_per_element(); ++i)
      if (i != local_face) v[k++] = elements[e][i];
    return v;
  }

  Vec face_centroid(const Face& f) const {
    Vec c;
    for (int i = 0; i < verts_per_face(); ++i) c += vertices[f.verts[i]];
    return c * (1.0 / verts_per_face());
  }

  // Physical point of reference coordinates r inside element e.
  Vec map_to_physical(int e, const Vec& r) const {
    const auto& g = elem_geom[e];
    Vec p = g.v0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < dim; ++j) p[i] += g.jac[i][j] * r[j];
    return p;
  }

  // Reference coordinates of physical point p w.r.t. element e.
  Vec map_to_reference(int e, const Vec& p) const {
    const auto& g = elem_geom[e];
    Vec d = p - g.v0, r;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) r[i] += g.inv_jac[i][j] * d[j];
    return r;
  }

  // Physical gradient from a reference gradient: J^{-T} grad_ref.
  Vec physical_gradient(int e, const Vec& ref_grad) const {
    const auto& g = elem_geom[e];
    Vec out;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) out[i] += g.inv_jac[j][i] * ref_grad[j];
    return out;
  }

 private:
  void fix_orientation() {
    for (auto& el : elements) {
      if (dim == 2) {
        if (el[3] != -1) throw std::invalid_argument("SimplicialMesh: 2D element with 4 vertices");
        if (signed_volume(el) < 0.0) std::swap(el[1], el[2]);
      } else {
        if (el[3] < 0) throw std::invalid_argument("SimplicialMesh: 3D element with 3 vertices");
        if (signed_volume(el) < 0.0) std::swap(el[2], el[3]);
      }
      if (signed_volume(el) <= 0.0) throw std::invalid_argument("SimplicialMesh: degenerate element");
    }
  }

  double signed_volume(const std::array<int, 4>& el) const {
    const Vec& a = vertices[el[0]];
    if (dim == 2) {
      Vec u = vertices[el[1]] - a, v = vertices[el[2]] - a;
      return 0.5 * (u.x * v.y - u.y * v.x);
    }
    Vec u = vertices[el[1]] - a, v = vertices[el[2]] - a, w = vertices[el[3]] - a;
    return dot(u, cross(v, w)) / 6.0;
  }

  void build_faces() {
    faces.clear();
    element_faces.assign(elements.size(), {{-1, -1, -1, -1}});
    std::map<FaceKey, int> index;
    for (int e = 0; e < n_elements(); ++e) {
      for (int lf = 0; lf < verts_per_element(); ++lf) {
        FaceKey key = make_face_key(local_face_verts(e, lf), dim - 1);
        auto it = index.find(key);
        if (it == index.end()) {
          Face f;
          f.verts = key;
          f.owner = e;
          index.emplace(key, n_faces());
          element_faces[e][lf] = n_faces();
          faces.push_back(f);
        } else {
          Face& f = faces[it->second];
          if (f.neighbor >= 0) throw std::runtime_error("SimplicialMesh: face shared by more than two elements");
          f.neighbor = e;
          element_faces[e][lf] = it->second;
        }
      }
    }
  }

  void assign_tags(const std::function<BoundaryTag(const Face&)>& resolve) {
    for (auto& f : faces) {
      if (f.neighbor >= 0) continue;
      f.tag = resolve(f);
      if (f.tag == BoundaryTag::none)
        throw std::runtime_error("SimplicialMesh: boundary face resolved to no tag");
    }
  }

  void build_geometry() {
    elem_geom.resize(elements.size());
    for (int e = 0; e < n_elements(); ++e) {
      ElementGeometry& g = elem_geom[e];
      const auto& el = elements[e];
      g.v0 = vertices[el[0]];
      for (int j = 0; j < dim; ++j) {
        Vec col = vertices[el[j + 1]] - g.v0;
        for (int i = 0; i < 3; ++i) g.jac[i][j] = col[i];
      }
      if (dim == 2) {
        g.jac[2][2] = 1.0;
        g.det_jac = g.jac[0][0] * g.jac[1][1] - g.jac[0][1] * g.jac[1][0];
        double inv = 1.0 / g.det_jac;
        g.inv_jac[0][0] = g.jac[1][1] * inv;
        g.inv_jac[0][1] = -g.jac[0][1] * inv;
        g.inv_jac[1][0] = -g.jac[1][0] * inv;
        g.inv_jac[1][1] = g.jac[0][0] * inv;
      } else {
        const auto& J = g.jac;
        g.det_jac = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                    J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                    J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        double inv = 1.0 / g.det_jac;
        g.inv_jac[0][0] = (J[1][1] * J[2][2] - J[1][2] * J[2][1]) * inv;
        g.inv_jac[0][1] = (J[0][2] * J[2][1] - J[0][1] * J[2][2]) * inv;
        g.inv_jac[0][2] = (J[0][1] * J[1][2] - J[0][2] * J[1][1]) * inv;
        g.inv_jac[1][0] = (J[1][2] * J[2][0] - J[1][0] * J[2][2]) * inv;
        g.inv_jac[1][1] = (J[0][0] * J[2][2] - J[0][2] * J[2][0]) * inv;
        g.inv_jac[1][2] = (J[0][2] * J[1][0] - J[0][0] * J[1][2]) * inv;
        g.inv_jac[2][0] = (J[1][0] * J[2][1] - J[1][1] * J[2][0]) * inv;
        g.inv_jac[2][1] = (J[0][1] * J[2][0] - J[0][0] * J[2][1]) * inv;
        g.inv_jac[2][2] = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) * inv;
      }
      g.volume = std::abs(g.det_jac) * (dim == 2 ? 0.5 : 1.0 / 6.0);
      g.diameter = 0.0;
      g.centroid = Vec{};
      for (int i = 0; i <= dim; ++i) {
        g.centroid += vertices[el[i]];
        for (int j = i + 1; j <= dim; ++j)
          g.diameter = std::max(g.diameter, distance(vertices[el[i]], vertices[el[j]]));
      }
      g.centroid = g.centroid * (1.0 / (dim + 1));
    }

    face_geom.resize(faces.size());
    for (int fi = 0; fi < n_faces(); ++fi) {
      const Face& f = faces[fi];
      FaceGeometry& fg = face_geom[fi];
      const Vec& a = vertices[f.verts[0]];
      const Vec& b = vertices[f.verts[1]];
      if (dim == 2) {
        fg.diameter = distance(a, b);
        fg.measure = fg.diameter;
        fg.centroid = (a + b) * 0.5;
        fg.normal = Vec{b.y - a.y, a.x - b.x, 0.0};
      } else {
        const Vec& c = vertices[f.verts[2]];
        fg.diameter = std::max({distance(a, b), distance(a, c), distance(b, c)});
        Vec n = cross(b - a, c - a);
        fg.measure = 0.5 * norm(n);
        fg.centroid = (a + b + c) * (1.0 / 3.0);
        fg.normal = n;
      }
      double len = norm(fg.normal);
      if (!(fg.measure > 1e-300) || !(len > 0.0))
        throw std::runtime_error("SimplicialMesh: degenerate face");
      fg.normal = fg.normal * (1.0 / len);
      if (dot(fg.normal, fg.centroid - elem_geom[f.owner].centroid) < 0.0) fg.normal = fg.normal * (-1.0);
    }
  }
};

// Spec'd accessor; throws on an invalid index. Degenerate faces are rejected
// at mesh construction already.
inline FaceGeometry face_quadrature_geometry(const SimplicialMesh& mesh, int face) {
  if (face < 0 || face >= mesh.n_faces())
    throw std::out_of_range("face_quadrature_geometry: face index out of range");
  return mesh.face_geom[face];
}

namespace detail {

// Union of original-mesh vertices a refinement vertex was generated from
// (midpoint chains expanded recursively).
inline void vertex_support(int v, int n_original, const std::vector<std::array<int, 2>>& gen,
                           std::set<int>& out) {
  if (v < n_original) {
    out.insert(v);
    return;
  }
  vertex_support(gen[v - n_original][0], n_original, gen, out);
  vertex_support(gen[v - n_original][1], n_original, gen, out);
}

// Resolves boundary tags for a refined mesh: a child boundary face lies on the
// unique parent boundary face whose vertex set contains the supports of all
// its vertices.
inline std::map<FaceKey, BoundaryTag> resolve_child_boundary(
    const SimplicialMesh& parent, const std::vector<std::array<int, 4>>& child_elements,
    const std::vector<int>& child_origin, int n_original_verts,
    const std::vector<std::array<int, 2>>& vertex_gen, int dim) {
  // Collect owner-only child faces.
  std::map<FaceKey, std::pair<int, int>> first_seen;  // key -> (element, count)
  const int vpe = dim + 1;
  for (int e = 0; e < static_cast<int>(child_elements.size()); ++e) {
    for (int lf = 0; lf < vpe; ++lf) {
      std::array<int, 3> fv{{-1, -1, -1}};
      int k = 0;
      for (int i = 0; i < vpe; ++i)
        if (i != lf) fv[k++] = child_elements[e][i];
      FaceKey key = make_face_key(fv, dim - 1);
      auto [it, inserted] = first_seen.emplace(key, std::make_pair(e, 1));
      if (!inserted) it->second.second++;
    }
  }
  std::map<FaceKey, BoundaryTag> tags;
  for (const auto& [key, rec] : first_seen) {
    if (rec.second != 1) continue;  // interior
    const int origin = child_origin[rec.first];
    std::set<int> support;
    for (int i = 0; i < dim; ++i) vertex_support(key[i], n_original_verts, vertex_gen, support);
    BoundaryTag tag = BoundaryTag::none;
    for (int lf = 0; lf <= dim; ++lf) {
      const Face& pf = parent.faces[parent.element_faces[origin][lf]];
      if (pf.tag == BoundaryTag::none) continue;
      std::set<int> pfv(pf.verts.begin(), pf.verts.begin() + dim);
      if (std::includes(pfv.begin(), pfv.end(), support.begin(), support.end())) {
        tag = pf.tag;
        break;
      }
    }
    if (tag == BoundaryTag::none)
      throw std::runtime_error("refinement: could not inherit a boundary tag");
    tags[key] = tag;
  }
  return tags;
}

}  // namespace detail

// Uniform refinement: every triangle into 4 similar children via edge
// midpoints; every tetrahedron into 8 (red refinement with the consistent
// octahedron diagonal, Bey's rule). Boundary tags are inherited; h halves.
inline SimplicialMesh refine_uniform(const SimplicialMesh& mesh) {
  const int n0 = mesh.n_vertices();
  std::vector<Vec> verts = mesh.vertices;
  std::vector<std::array<int, 2>> vertex_gen;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int id = static_cast<int>(verts.size());
    verts.push_back((mesh.vertices[a] + mesh.vertices[b]) * 0.5);
    vertex_gen.push_back({key.first, key.second});
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 4>> children;
  std::vector<int> origin;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    if (mesh.dim == 2) {
      int m01 = mid(el[0], el[1]), m12 = mid(el[1], el[2]), m02 = mid(el[0], el[2]);
      children.push_back({el[0], m01, m02, -1});
      children.push_back({m01, el[1], m12, -1});
      children.push_back({m02, m12, el[2], -1});
      children.push_back({m01, m12, m02, -1});
      for (int i = 0; i < 4; ++i) origin.push_back(e);
    } else {
      int m01 = mid(el[0], el[1]), m02 = mid(el[0], el[2]), m03 = mid(el[0], el[3]);
      int m12 = mid(el[1], el[2]), m13 = mid(el[1], el[3]), m23 = mid(el[2], el[3]);
      children.push_back({el[0], m01, m02, m03});
      children.push_back({m01, el[1], m12, m13});
      children.push_back({m02, m12, el[2], m23});
      children.push_back({m03, m13, m23, el[3]});
      // Interior octahedron, cut along its shortest diagonal (keeps Kuhn
      // meshes exactly self-similar; ties resolved in a fixed order).
      auto d2 = [&](int a, int b) { return dot(verts[a] - verts[b], verts[a] - verts[b]); };
      const int diags[3][2] = {{m01, m23}, {m02, m13}, {m03, m12}};
      const int equators[3][4] = {{m02, m03, m13, m12}, {m01, m03, m23, m12}, {m01, m02, m23, m13}};
      int pick = 0;
      for (int c = 1; c < 3; ++c)
        if (d2(diags[c][0], diags[c][1]) < d2(diags[pick][0], diags[pick][1])) pick = c;
      for (int i = 0; i < 4; ++i)
        children.push_back(
            {diags[pick][0], diags[pick][1], equators[pick][i], equators[pick][(i + 1) % 4]});
      for (int i = 0; i < 8; ++i) origin.push_back(e);
    }
  }
  auto tags = detail::resolve_child_boundary(mesh, children, origin, n0, vertex_gen, mesh.dim);
  return SimplicialMesh(mesh.dim, std::move(verts), std::move(children), tags);
}

namespace detail {

struct BisectionNode {
  std::array<int, 4> verts;
  int origin;                        // element index in the input mesh
  std::array<int, 2> children{{-1, -1}};
  bool is_leaf() const { return children[0] < 0; }
};

}  // namespace detail

// Longest-edge bisection of the marked elements, with closure bisections until
// the mesh is conforming. Ties between equally long edges are broken by the
// smallest opposite-vertex index (then by the lexicographically smallest edge).
// Untouched elements are carried over bit-identically; an empty marked set
// returns an equal mesh.
inline SimplicialMesh refine_bisection(const SimplicialMesh& mesh, const std::set<int>& marked) {
  for (int e : marked)
    if (e < 0 || e >= mesh.n_elements())
      throw std::out_of_range("refine_bisection: marked element index out of range");

  const int n0 = mesh.n_vertices();
  std::vector<Vec> verts = mesh.vertices;
  std::vector<std::array<int, 2>> vertex_gen;
  std::map<std::pair<int, int>, int> midpoint;  // refined edges
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int id = static_cast<int>(verts.size());
    verts.push_back((verts[a] + verts[b]) * 0.5);
    vertex_gen.push_back({key.first, key.second});
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<detail::BisectionNode> nodes;
  nodes.reserve(mesh.n_elements() * 2);
  for (int e = 0; e < mesh.n_elements(); ++e) nodes.push_back({mesh.elements[e], e, {{-1, -1}}});

  const int vpe = mesh.verts_per_element();
  auto refinement_edge = [&](const detail::BisectionNode& n) {
    double best_len = -1.0;
    int best_a = -1, best_b = -1, best_opp = -1;
    for (int i = 0; i < vpe; ++i)
      for (int j = i + 1; j < vpe; ++j) {
        int a = n.verts[i], b = n.verts[j];
        double len = dot(verts[a] - verts[b], verts[a] - verts[b]);
        int opp = mesh.n_vertices();  // smallest vertex of the element not on the edge
        for (int k = 0; k < vpe; ++k)
          if (k != i && k != j) opp = std::min(opp, n.verts[k]);
        auto lo = std::min(a, b), hi = std::max(a, b);
        auto cur = std::make_tuple(opp, lo, hi);
        auto best = std::make_tuple(best_opp, std::min(best_a, best_b), std::max(best_a, best_b));
        if (len > best_len || (len == best_len && cur < best)) {
          best_len = len;
          best_a = a;
          best_b = b;
          best_opp = opp;
        }
      }
    return std::make_pair(best_a, best_b);
  };

  auto bisect = [&](int ni) {
    auto [a, b] = refinement_edge(nodes[ni]);
    int m = mid(a, b);
    detail::BisectionNode child_a = nodes[ni], child_b = nodes[ni];
    for (int i = 0; i < vpe; ++i) {
      if (child_a.verts[i] == b) child_a.verts[i] = m;  // keeps endpoint a
      if (child_b.verts[i] == a) child_b.verts[i] = m;  // keeps endpoint b
    }
    int ia = static_cast<int>(nodes.size());
    // Child containing the smaller endpoint comes first.
    if (a < b) {
      nodes.push_back(child_a);
      nodes.push_back(child_b);
    } else {
      nodes.push_back(child_b);
      nodes.push_back(child_a);
    }
    nodes[ni].children = {ia, ia + 1};
  };

  std::vector<int> queue(marked.begin(), marked.end());
  int guard = 0;
  while (!queue.empty()) {
    if (++guard > 10000) throw std::runtime_error("refine_bisection: closure did not terminate");
    for (int ni : queue)
      if (nodes[ni].is_leaf()) bisect(ni);
    // Closure: any leaf with a refined edge must itself be bisected.
    queue.clear();
    for (int ni = 0; ni < static_cast<int>(nodes.size()); ++ni) {
      if (!nodes[ni].is_leaf()) continue;
      bool hanging = false;
      for (int i = 0; i < vpe && !hanging; ++i)
        for (int j = i + 1; j < vpe && !hanging; ++j)
          if (midpoint.count(std::minmax(nodes[ni].verts[i], nodes[ni].verts[j]))) hanging = true;
      if (hanging) queue.push_back(ni);
    }
  }

  // Emit leaves in parent order (depth-first), so untouched elements keep
  // their relative order and content.
  std::vector<std::array<int, 4>> out_elements;
  std::vector<int> out_origin;
  std::vector<int> stack;
  for (int e = mesh.n_elements() - 1; e >= 0; --e) stack.push_back(e);
  while (!stack.empty()) {
    int ni = stack.back();
    stack.pop_back();
    if (nodes[ni].is_leaf()) {
      out_elements.push_back(nodes[ni].verts);
      out_origin.push_back(nodes[ni].origin);
    } else {
      stack.push_back(nodes[ni].children[1]);
      stack.push_back(nodes[ni].children[0]);
    }
  }

  auto tags = detail::resolve_child_boundary(mesh, out_elements, out_origin, n0, vertex_gen, mesh.dim);
  return SimplicialMesh(mesh.dim, std::move(verts), std::move(out_elements), tags);
}

// ---- Text mesh format ------------------------------------------------------
//
//   DIM d
//   VERTICES n      (n coordinate lines)
//   ELEMENTS m      (m lines of dim+1 0-based vertex indices)
//   BOUNDARY b      (b lines of dim vertex indices plus `dirichlet` | `robin`)
//
// Whitespace-separated; `#` starts a comment.

inline SimplicialMesh read_mesh(std::istream& in) {
  auto next_token = [&](std::string& tok) -> bool {
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      return true;
    }
    return false;
  };
  auto expect = [&](const std::string& kw) {
    std::string tok;
    if (!next_token(tok) || tok != kw) throw std::runtime_error("mesh file: expected keyword " + kw);
  };
  auto read_int = [&]() {
    std::string tok;
    if (!next_token(tok)) throw std::runtime_error("mesh file: unexpected end of file");
    return std::stoi(tok);
  };
  auto read_double = [&]() {
    std::string tok;
    if (!next_token(tok)) throw std::runtime_error("mesh file: unexpected end of file");
    return std::stod(tok);
  };

  expect("DIM");
  int dim = read_int();
  if (dim < 2 || dim > 3) throw std::runtime_error("mesh file: DIM must be 2 or 3");
  expect("VERTICES");
  int nv = read_int();
  std::vector<Vec> verts(nv);
  for (int i = 0; i < nv; ++i)
    for (int d = 0; d < dim; ++d) verts[i][d] = read_double();
  expect("ELEMENTS");
  int ne = read_int();
  std::vector<std::array<int, 4>> elems(ne, {{-1, -1, -1, -1}});
  for (int i = 0; i < ne; ++i)
    for (int d = 0; d <= dim; ++d) elems[i][d] = read_int();
  expect("BOUNDARY");
  int nb = read_int();
  std::map<FaceKey, BoundaryTag> tags;
  for (int i = 0; i < nb; ++i) {
    std::array<int, 3> fv{{-1, -1, -1}};
    for (int d = 0; d < dim; ++d) fv[d] = read_int();
    std::string word;
    if (!next_token(word)) throw std::runtime_error("mesh file: missing boundary tag");
    BoundaryTag tag;
    if (word == "dirichlet")
      tag = BoundaryTag::dirichlet;
    else if (word == "robin")
      tag = BoundaryTag::robin;
    else
      throw std::runtime_error("mesh file: unknown boundary tag '" + word + "'");
    tags[make_face_key(fv, dim - 1)] = tag;
  }
  return SimplicialMesh(dim, std::move(verts), std::move(elems), tags);
}

inline SimplicialMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return read_mesh(in);
}

inline void write_mesh(const SimplicialMesh& mesh, std::ostream& out) {
  out << "DIM " << mesh.dim << "\n";
  out << "VERTICES " << mesh.n_vertices() << "\n";
  char buf[96];
  for (const auto& v : mesh.vertices) {
    for (int d = 0; d < mesh.dim; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", v[d]);
      out << (d ? " " : "") << buf;
    }
    out << "\n";
  }
  out << "ELEMENTS " << mesh.n_elements() << "\n";
  for (const auto& el : mesh.elements) {
    for (int d = 0; d <= mesh.dim; ++d) out << (d ? " " : "") << el[d];
    out << "\n";
  }
  int nb = 0;
  for (const auto& f : mesh.faces)
    if (f.neighbor < 0) nb++;
  out << "BOUNDARY " << nb << "\n";
  for (const auto& f : mesh.faces) {
    if (f.neighbor >= 0) continue;
    for (int d = 0; d < mesh.dim; ++d) out << f.verts[d] << " ";
    out << (f.tag == BoundaryTag::dirichlet ? "dirichlet" : "robin") << "\n";
  }
}

inline void write_mesh_file(const SimplicialMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_mesh(mesh, out);
}

}  // namespace dls
