// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <sstream>

#include "dls/mesh.hpp"
#include "dls/meshgen.hpp"

using namespace dls;

namespace {

int count_boundary(const SimplicialMesh& m, BoundaryTag tag) {
  int n = 0;
  for (const auto& f : m.faces)
    if (f.neighbor < 0 && f.tag == tag) n++;
  return n;
}

int count_interior(const SimplicialMesh& m) {
  int n = 0;
  for (const auto& f : m.faces)
    if (f.neighbor >= 0) n++;
  return n;
}

double min_angle(const SimplicialMesh& m) {
  double best = M_PI;
  for (const auto& el : m.elements) {
    for (int i = 0; i < 3; ++i) {
      Vec a = m.vertices[el[i]];
      Vec b = m.vertices[el[(i + 1) % 3]] - a;
      Vec c = m.vertices[el[(i + 2) % 3]] - a;
      best = std::min(best, std::acos(dot(b, c) / (norm(b) * norm(c))));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("unit square counts") {
  auto m = unit_square_mesh(5);
  CHECK(m.n_vertices() == 36);
  CHECK(m.n_elements() == 50);
  CHECK(m.n_faces() == 85);
  CHECK(count_interior(m) == 65);
  CHECK(count_boundary(m, BoundaryTag::robin) == 20);
  CHECK(count_boundary(m, BoundaryTag::dirichlet) == 0);
  CHECK(m.conforming());
  CHECK_THAT(m.total_volume(), Catch::Matchers::WithinAbs(1.0, 1e-10));
  CHECK_THAT(m.max_diameter(), Catch::Matchers::WithinRel(std::sqrt(2.0) / 5.0, 1e-12));
}

TEST_CASE("L-shape counts and measure") {
  auto m = l_shape_mesh(4);
  CHECK(m.n_elements() == 96);
  CHECK_THAT(m.total_volume(), Catch::Matchers::WithinAbs(3.0, 1e-10));
  CHECK_THAT(m.max_diameter(), Catch::Matchers::WithinRel(std::sqrt(2.0) / 4.0, 1e-12));
  CHECK(m.conforming());
}

TEST_CASE("cube counts and measure") {
  auto m = cube_mesh(4);
  CHECK(m.n_elements() == 6 * 4 * 4 * 4);
  CHECK(count_boundary(m, BoundaryTag::dirichlet) == 0);
  CHECK(count_boundary(m, BoundaryTag::robin) == 2 * 4 * 4 * 6);  // 2 triangles per cell face
  CHECK_THAT(m.total_volume(), Catch::Matchers::WithinAbs(8.0, 1e-10));
  CHECK(m.conforming());
}

TEST_CASE("annulus tags and measure") {
  auto m = annulus_mesh(1.0, 64, 4);
  CHECK(m.n_elements() == 2 * 64 * 4);
  CHECK(count_boundary(m, BoundaryTag::dirichlet) == 64);
  CHECK(count_boundary(m, BoundaryTag::robin) == 64);
  // polygon ring area: regular 64-gons of radii 1 and 2
  double ring = 0.5 * 64 * std::sin(2.0 * M_PI / 64) * (4.0 - 1.0);
  CHECK_THAT(m.total_volume(), Catch::Matchers::WithinRel(ring, 1e-12));
  CHECK(m.conforming());
}

TEST_CASE("invalid generator parameters") {
  CHECK_THROWS_AS(unit_square_mesh(0), std::invalid_argument);
  CHECK_THROWS_AS(annulus_mesh(-1.0, 64, 2), std::invalid_argument);
  CHECK_THROWS_AS(annulus_mesh(1.0, 8, 2), std::invalid_argument);
}

TEST_CASE("uniform refinement quadruples (2D) and octuples (3D)") {
  auto m = unit_square_mesh(5);
  auto r = refine_uniform(m);
  CHECK(r.n_elements() == 200);
  CHECK_THAT(r.max_diameter(), Catch::Matchers::WithinRel(0.5 * m.max_diameter(), 1e-12));
  auto r2 = refine_uniform(r);
  CHECK(r2.n_elements() == 800);
  CHECK(r2.conforming());
  CHECK_THAT(r2.total_volume(), Catch::Matchers::WithinAbs(1.0, 1e-10));

  auto c = cube_mesh(2);
  REQUIRE(c.n_elements() == 48);
  auto cr = refine_uniform(c);
  CHECK(cr.n_elements() == 384);
  CHECK(cr.conforming());
  CHECK_THAT(cr.total_volume(), Catch::Matchers::WithinAbs(8.0, 1e-10));
  CHECK_THAT(cr.max_diameter(), Catch::Matchers::WithinRel(0.5 * c.max_diameter(), 1e-12));
  // h really halves again, and the similarity classes stabilize
  auto cr2 = refine_uniform(cr);
  CHECK_THAT(cr2.max_diameter(), Catch::Matchers::WithinRel(0.25 * c.max_diameter(), 1e-12));
  CHECK_THAT(cr2.worst_shape_ratio(), Catch::Matchers::WithinRel(cr.worst_shape_ratio(), 1e-12));
}

TEST_CASE("uniform refinement preserves the minimum angle") {
  auto m = l_shape_mesh(2);
  auto r = refine_uniform(m);
  CHECK_THAT(min_angle(r), Catch::Matchers::WithinAbs(min_angle(m), 1e-12));
}

TEST_CASE("uniform refinement preserves boundary tags") {
  auto m = annulus_mesh(1.0, 64, 2);
  auto r = refine_uniform(m);
  CHECK(count_boundary(r, BoundaryTag::dirichlet) == 128);
  CHECK(count_boundary(r, BoundaryTag::robin) == 128);
  for (const auto& f : r.faces) {
    if (f.neighbor >= 0) continue;
    double rad = std::hypot(r.face_geom[&f - r.faces.data()].centroid.x,
                            r.face_geom[&f - r.faces.data()].centroid.y);
    CHECK(((f.tag == BoundaryTag::dirichlet) == (rad < 1.5)));
  }
}

TEST_CASE("bisection with empty marked set returns an equal mesh") {
  auto m = unit_square_mesh(3);
  auto r = refine_bisection(m, {});
  CHECK(r.n_vertices() == m.n_vertices());
  CHECK((r.vertices == m.vertices));
  CHECK((r.elements == m.elements));
}

TEST_CASE("bisecting across a shared diagonal forces the neighbor to split") {
  auto m = square_mesh({0, 0, 0}, {1, 1, 0}, 1);
  REQUIRE(m.n_elements() == 2);
  auto r = refine_bisection(m, {0});
  CHECK(r.n_elements() == 4);
  CHECK(r.conforming());
  CHECK_THAT(r.total_volume(), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("repeated full marking matches uniform-refinement counts") {
  auto m = unit_square_mesh(2);
  std::set<int> all;
  for (int e = 0; e < m.n_elements(); ++e) all.insert(e);
  auto r1 = refine_bisection(m, all);
  std::set<int> all1;
  for (int e = 0; e < r1.n_elements(); ++e) all1.insert(e);
  auto r2 = refine_bisection(r1, all1);
  CHECK(r2.n_elements() == 4 * m.n_elements());
  CHECK(r2.conforming());
}

TEST_CASE("bisection keeps the mesh conforming for random marks") {
  std::mt19937 rng(99);
  auto m = l_shape_mesh(2);
  for (int round = 0; round < 5; ++round) {
    std::set<int> marked;
    std::uniform_int_distribution<int> pick(0, m.n_elements() - 1);
    for (int i = 0; i < std::max(1, m.n_elements() / 8); ++i) marked.insert(pick(rng));
    m = refine_bisection(m, marked);
    REQUIRE(m.conforming());
    REQUIRE_THAT(m.total_volume(), Catch::Matchers::WithinAbs(3.0, 1e-10));
    int dir = count_boundary(m, BoundaryTag::dirichlet);
    CHECK(dir == 0);
  }
  CHECK(m.n_elements() > l_shape_mesh(2).n_elements());
}

TEST_CASE("bisection keeps a 3D mesh conforming") {
  auto m = cube_mesh(1);
  std::set<int> marked = {0, 3};
  auto r = refine_bisection(m, marked);
  CHECK(r.conforming());
  CHECK_THAT(r.total_volume(), Catch::Matchers::WithinAbs(8.0, 1e-10));
  CHECK(r.n_elements() > m.n_elements());
}

TEST_CASE("untouched elements survive bisection bit-identically") {
  auto m = unit_square_mesh(4);
  auto r = refine_bisection(m, {0});
  int found = 0;
  for (const auto& el : r.elements)
    if (el == m.elements[7]) found++;
  CHECK(found == 1);
}

TEST_CASE("face geometry examples") {
  // single unit right triangle, all edges tagged
  std::vector<Vec> verts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  std::vector<std::array<int, 4>> elems = {{0, 1, 2, -1}};
  SimplicialMesh tri(2, verts, elems, [](const Vec&) { return BoundaryTag::robin; });
  bool saw_hyp = false;
  for (int fi = 0; fi < tri.n_faces(); ++fi) {
    auto fg = face_quadrature_geometry(tri, fi);
    if (tri.faces[fi].verts[0] == 1 && tri.faces[fi].verts[1] == 2) {
      saw_hyp = true;
      CHECK_THAT(fg.diameter, Catch::Matchers::WithinRel(std::sqrt(2.0), 1e-14));
      CHECK_THAT(fg.normal.x, Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 1e-13));
      CHECK_THAT(fg.normal.y, Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 1e-13));
    }
  }
  CHECK(saw_hyp);
  CHECK_THROWS_AS(face_quadrature_geometry(tri, 19), std::out_of_range);

  // axis-aligned edge from (0,0) to (0,0.5) with owner on the x>0 side
  std::vector<Vec> v2 = {{0, 0, 0}, {0, 0.5, 0}, {0.4, 0.25, 0}};
  std::vector<std::array<int, 4>> e2 = {{0, 1, 2, -1}};
  SimplicialMesh t2(2, v2, e2, [](const Vec&) { return BoundaryTag::robin; });
  for (int fi = 0; fi < t2.n_faces(); ++fi) {
    if (t2.faces[fi].verts[0] == 0 && t2.faces[fi].verts[1] == 1) {
      auto fg = face_quadrature_geometry(t2, fi);
      CHECK_THAT(fg.diameter, Catch::Matchers::WithinRel(0.5, 1e-14));
      CHECK_THAT(fg.normal.x, Catch::Matchers::WithinAbs(-1.0, 1e-13));
      CHECK_THAT(fg.normal.y, Catch::Matchers::WithinAbs(0.0, 1e-13));
    }
  }

  // interior faces: normal points from owner to neighbor
  auto m = unit_square_mesh(3);
  for (int fi = 0; fi < m.n_faces(); ++fi) {
    const auto& f = m.faces[fi];
    if (f.neighbor < 0) continue;
    Vec d = m.elem_geom[f.neighbor].centroid - m.elem_geom[f.owner].centroid;
    CHECK(dot(m.face_geom[fi].normal, d) > 0.0);
    CHECK_THAT(norm(m.face_geom[fi].normal), Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("degenerate elements are rejected") {
  std::vector<Vec> verts = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  std::vector<std::array<int, 4>> elems = {{0, 1, 2, -1}};
  CHECK_THROWS(SimplicialMesh(2, verts, elems, [](const Vec&) { return BoundaryTag::robin; }));
}

TEST_CASE("mesh text format round-trips") {
  auto m = annulus_mesh(0.7, 16, 2);
  std::ostringstream s1;
  write_mesh(m, s1);
  std::istringstream in(s1.str());
  auto m2 = read_mesh(in);
  std::ostringstream s2;
  write_mesh(m2, s2);
  CHECK(s1.str() == s2.str());
  CHECK(m2.n_elements() == m.n_elements());

  std::istringstream bad("DIM 2\nVERTICES 1\n0 0\nELEMENTS 0\nBOUNDARY 0\n# comment\n");
  CHECK_NOTHROW(read_mesh(bad));
  std::istringstream broken("DIM 2\nVERTICES x\n");
  CHECK_THROWS(read_mesh(broken));
}

TEST_CASE("shape regularity stays moderate under bisection") {
  auto m = unit_square_mesh(2);
  std::set<int> marked = {0};
  for (int i = 0; i < 6; ++i) {
    m = refine_bisection(m, marked);
    marked = {0};
  }
  CHECK(m.worst_shape_ratio() < 20.0);
}
