// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "dls/analysis.hpp"
#include "dls/meshgen.hpp"
#include "dls/solver.hpp"
#include "support/dense_oracle.hpp"

using namespace dls;

namespace {

// dense -> CSR with a full pattern (small synthetic systems)
AssembledSystem from_dense(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
  AssembledSystem sys;
  const std::int64_t n = A.rows();
  sys.matrix.rows = sys.matrix.cols = n;
  sys.matrix.row_ptr.assign(n + 1, 0);
  for (std::int64_t r = 0; r < n; ++r) sys.matrix.row_ptr[r + 1] = (r + 1) * n;
  sys.matrix.col.resize(n * n);
  sys.matrix.val.resize(n * n);
  for (std::int64_t r = 0; r < n; ++r)
    for (std::int64_t c = 0; c < n; ++c) {
      sys.matrix.col[r * n + c] = static_cast<std::int32_t>(c);
      sys.matrix.val[r * n + c] = A(r, c);
    }
  sys.rhs.assign(b.data(), b.data() + n);
  return sys;
}

}  // namespace

TEST_CASE("identity system converges in one iteration") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(5, 5);
  Eigen::VectorXcd b(5);
  b << cplx{1, 2}, cplx{-3, 0}, cplx{0, 1}, cplx{4, -4}, cplx{0.5, 0};
  auto sys = from_dense(A, b);
  SolverConfig cfg;
  cfg.preconditioner = SolverConfig::Preconditioner::none;
  auto [x, rep] = solve(sys, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 1);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(x[i] - b(i)) < 1e-12);
}

TEST_CASE("2x2 Hermitian system has the analytic solution") {
  Eigen::MatrixXcd A(2, 2);
  A << cplx{2, 0}, cplx{0, 1}, cplx{0, -1}, cplx{2, 0};
  Eigen::VectorXcd b(2);
  b << cplx{1, 0}, cplx{0, 0};
  auto sys = from_dense(A, b);
  SolverConfig cfg;
  cfg.preconditioner = SolverConfig::Preconditioner::jacobi;
  cfg.rel_tolerance = 1e-14;
  auto [x, rep] = solve(sys, cfg);
  CHECK(rep.converged);
  CHECK(std::abs(x[0] - cplx(2.0 / 3.0, 0.0)) < 1e-12);
  CHECK(std::abs(x[1] - cplx(0.0, 1.0 / 3.0)) < 1e-12);
}

TEST_CASE("zero right-hand side returns zero in zero iterations") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(4, 4) * 3.0;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(4);
  auto sys = from_dense(A, b);
  auto [x, rep] = solve(sys, {.preconditioner = SolverConfig::Preconditioner::none});
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(vec_norm(x) == 0.0);
}

TEST_CASE("assembled system matches a dense LU solve in the energy norm") {
  auto mesh = unit_square_mesh(5);
  auto prob = make_problem("plane_wave_2d", {.k = 1.0});
  auto sys = assemble(mesh, 1, prob);
  SolverConfig cfg;
  cfg.rel_tolerance = 1e-12;
  cfg.debug_checks = true;
  auto [x, rep] = solve(sys, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.monotonicity_violations == 0);

  auto dense = dls_test::densify(sys.matrix);
  Eigen::VectorXcd b(sys.matrix.rows);
  for (std::int64_t i = 0; i < sys.matrix.rows; ++i) b(i) = sys.rhs[i];
  Eigen::VectorXcd xd = Eigen::PartialPivLU<Eigen::MatrixXcd>(dense).solve(b);
  CoefficientVector diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - xd(i);
  std::vector<cplx> adiff, ax;
  sys.matrix.multiply(diff, adiff);
  sys.matrix.multiply(x, ax);
  double err_energy = std::sqrt(std::abs(std::real(cdot(diff, adiff))));
  double sol_energy = std::sqrt(std::real(cdot(x, ax)));
  CHECK(err_energy <= 1e-8 * sol_energy);
}

TEST_CASE("cg and bicgstab agree") {
  auto mesh = l_shape_mesh(2);
  auto prob = make_problem("lshape_singular", {.k = 1.0});
  auto sys = assemble(mesh, 1, prob);
  SolverConfig cg;
  cg.rel_tolerance = 1e-11;
  SolverConfig bi = cg;
  bi.method = SolverConfig::Method::bicgstab;
  auto [xc, rc] = solve(sys, cg);
  auto [xb, rb] = solve(sys, bi);
  REQUIRE(rc.converged);
  REQUIRE(rb.converged);
  CoefficientVector diff(xc.size());
  for (std::size_t i = 0; i < xc.size(); ++i) diff[i] = xc[i] - xb[i];
  CHECK(vec_norm(diff) <= 10 * cg.rel_tolerance * vec_norm(sys.rhs) / 1e-3);  // loose scale guard
  // the two solutions agree to far better than the discretization scale
  CHECK(vec_norm(diff) / vec_norm(xc) < 1e-7);
}

TEST_CASE("iteration cap reports non-convergence with the best iterate") {
  auto mesh = unit_square_mesh(4);
  auto prob = make_problem("plane_wave_2d", {.k = 1.0});
  auto sys = assemble(mesh, 1, prob);
  SolverConfig cfg;
  cfg.max_iterations = 3;
  auto [x, rep] = solve(sys, cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 3);
  CHECK(rep.final_residual > cfg.rel_tolerance);
  CHECK(vec_norm(x) > 0.0);
}

TEST_CASE("solver configuration is validated") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::VectorXcd b = Eigen::VectorXcd::Ones(2);
  auto sys = from_dense(A, b);
  SolverConfig cfg;
  cfg.rel_tolerance = 0.0;
  CHECK_THROWS_AS(solve(sys, cfg), std::invalid_argument);
  cfg.rel_tolerance = 2.0;
  CHECK_THROWS_AS(solve(sys, cfg), std::invalid_argument);
}

TEST_CASE("deterministic across thread counts") {
  auto mesh = unit_square_mesh(4);
  auto prob = make_problem("plane_wave_2d", {.k = 2.0});
  set_thread_count(1);
  auto s1 = assemble(mesh, 2, prob);
  auto [x1, r1] = solve(s1);
  set_thread_count(2);
  auto s2 = assemble(mesh, 2, prob);
  auto [x2, r2] = solve(s2);
  set_thread_count(1);
  REQUIRE(s1.matrix.val.size() == s2.matrix.val.size());
  for (std::size_t i = 0; i < s1.matrix.val.size(); ++i) REQUIRE(s1.matrix.val[i] == s2.matrix.val[i]);
  REQUIRE(x1.size() == x2.size());
  for (std::size_t i = 0; i < x1.size(); ++i) REQUIRE(x1[i] == x2[i]);
  CHECK(r1.iterations == r2.iterations);
}
