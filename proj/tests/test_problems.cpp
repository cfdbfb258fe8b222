// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "dls/problems.hpp"

using namespace dls;

TEST_CASE("every cataloged problem passes the first-order-system check") {
  for (const char* name : {"plane_wave_2d", "plane_wave_3d", "bessel_square", "lshape_singular",
                           "cylinder_radiation", "manufactured_poly"}) {
    ProblemParams par;
    par.k = name == std::string("cylinder_radiation") ? M_PI : 1.0;
    par.poly_degree = 3;
    CHECK_NOTHROW(make_problem(name, par));
  }
  ProblemParams p8;
  p8.k = 8.0;
  CHECK(verify_exact_solution(make_problem("plane_wave_2d", p8)) <= 1e-8);
  ProblemParams p2;
  p2.k = 5.0;
  CHECK(verify_exact_solution(make_problem("bessel_square", p2)) <= 1e-8);
}

TEST_CASE("plane wave has unit modulus and zero source") {
  auto spec = make_problem("plane_wave_2d", {.k = 8.0});
  for (const Vec& x : {Vec{0.1, 0.9, 0}, Vec{0.5, 0.5, 0}, Vec{0.99, 0.01, 0}}) {
    CHECK_THAT(std::abs(spec.exact->u(x)), Catch::Matchers::WithinAbs(1.0, 1e-14));
    CHECK(std::abs(spec.f_tilde(x)) == 0.0);
  }
}

TEST_CASE("bessel_square is finite at the origin with the expected value") {
  auto spec = make_problem("bessel_square", {.k = 1.0});
  // u(0) = 1/k - e^{ik} J0(0) / (k (J0(k) + i J1(k))) at k = 1
  cplx expected = 1.0 - std::exp(I_UNIT * 1.0) / (cplx(bessel_j(0, 1.0), bessel_j(1, 1.0)));
  cplx got = spec.exact->u({0.0, 0.0, 0.0});
  CHECK(std::abs(got - expected) < 1e-12);
  cplx near = spec.exact->u({1e-9, -1e-9, 0.0});
  CHECK(std::abs(near - expected) < 1e-9);
  CHECK(std::isfinite(norm2(spec.exact->grad_u({1e-9, -1e-9, 0.0}))));
}

TEST_CASE("manufactured polynomial data satisfies the PDE residual") {
  ProblemParams par;
  par.k = 2.0;
  par.poly_degree = 3;
  auto spec = make_problem("manufactured_poly", par);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Vec x{u01(rng), u01(rng), 0.0};
    cplx res = -spec.exact->div_p(x) - spec.k * spec.exact->u(x) - spec.f_tilde(x);
    CHECK(std::abs(res) <= 1e-10);
  }
}

TEST_CASE("L-shape solution vanishes along theta = 3 pi / 4") {
  ProblemParams par;
  par.alpha = 2.0 / 3.0;
  auto spec = make_problem("lshape_singular", par);
  for (double t : {0.1, 0.4, 0.8}) {
    Vec x{-t / std::sqrt(2.0), t / std::sqrt(2.0), 0.0};  // ray at 3 pi / 4
    CHECK_THAT(std::abs(spec.exact->u(x)), Catch::Matchers::WithinAbs(0.0, 1e-13));
  }
}

TEST_CASE("Robin data equals du/dn + i k u, scaled by 1/k") {
  auto spec = make_problem("cylinder_radiation", {.k = M_PI});
  const auto& ex = *spec.exact;
  Vec x{1.7, 0.6, 0.0};
  Vec n{0.6, -0.8, 0.0};
  cplx lhs = spec.g_tilde(x, n);
  cplx rhs = (dot(n, ex.grad_u(x)) + I_UNIT * spec.k * ex.u(x)) / spec.k;
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("dirichlet data is the boundary trace") {
  auto spec = make_problem("cylinder_radiation", {.k = M_PI});
  Vec x{std::cos(0.3), std::sin(0.3), 0.0};  // on the inner circle r = a = 1
  CHECK(std::abs(spec.g0(x) - std::cos(4 * 0.3)) < 1e-10);
}

TEST_CASE("unknown names and bad parameters are rejected") {
  CHECK_THROWS_AS(make_problem("nope"), std::invalid_argument);
  CHECK_THROWS_AS(make_problem("plane_wave_2d", {.k = -1.0}), std::invalid_argument);
  ProblemParams bad;
  bad.alpha = 5.0;
  CHECK_THROWS_AS(make_problem("lshape_singular", bad), std::invalid_argument);
  ProblemParams tiny;
  tiny.k = 0.1;  // k a below the validated Hankel range
  CHECK_THROWS_AS(make_problem("cylinder_radiation", tiny), std::invalid_argument);
}

TEST_CASE("default meshes match the problem domains") {
  auto spec = make_problem("bessel_square", {.k = 1.0});
  auto mesh = spec.initial_mesh(5);
  CHECK(mesh.n_elements() == 50);
  CHECK_THAT(mesh.total_volume(), Catch::Matchers::WithinAbs(1.0, 1e-12));
  auto lspec = make_problem("lshape_singular", {.k = 1.0});
  CHECK_THAT(lspec.initial_mesh(4).total_volume(), Catch::Matchers::WithinAbs(3.0, 1e-12));
}
