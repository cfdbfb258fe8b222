// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "dls/quadrature.hpp"

using namespace dls;

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Exact integral of x^a y^b (z^c) over the reference simplex.
double exact_monomial_integral(int dim, int a, int b, int c) {
  if (dim == 2) return factorial(a) * factorial(b) / factorial(a + b + 2);
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

}  // namespace

TEST_CASE("reference measures") {
  CHECK(volume_rule(2, 0).size() >= 1);
  double tri = 0.0, tet = 0.0, seg = 0.0;
  for (double w : volume_rule(2, 4).weights) tri += w;
  for (double w : volume_rule(3, 4).weights) tet += w;
  for (double w : face_rule(1, 4).weights) seg += w;
  CHECK_THAT(tri, Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(tet, Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-15));
  CHECK_THAT(seg, Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("first moment on the triangle") {
  auto rule = volume_rule(2, 3);
  double ix = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) ix += rule.weights[q] * rule.ref_point(q).x;
  CHECK_THAT(ix, Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-15));
}

TEST_CASE("random polynomials are integrated exactly") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int dim = 1; dim <= 3; ++dim) {
    for (int deg : {1, 2, 4, 7, 10, 13}) {
      auto rule = volume_rule(dim, deg);
      for (double w : rule.weights) CHECK(w > 0.0);
      double quad = 0.0, exact = 0.0;
      std::vector<std::array<int, 3>> exps;
      std::vector<double> cs;
      for (int a = 0; a <= deg; ++a)
        for (int b = 0; b <= (dim >= 2 ? deg - a : 0); ++b)
          for (int c = 0; c <= (dim >= 3 ? deg - a - b : 0); ++c) {
            exps.push_back({a, b, c});
            cs.push_back(coeff(rng));
          }
      for (std::size_t q = 0; q < rule.size(); ++q) {
        Vec p = rule.ref_point(q);
        double val = 0.0;
        for (std::size_t t = 0; t < exps.size(); ++t)
          val += cs[t] * std::pow(p.x, exps[t][0]) * std::pow(p.y, exps[t][1]) * std::pow(p.z, exps[t][2]);
        quad += rule.weights[q] * val;
      }
      for (std::size_t t = 0; t < exps.size(); ++t) {
        int a = exps[t][0], b = exps[t][1], c = exps[t][2];
        double mono = dim == 1 ? factorial(a) / factorial(a + 1) : exact_monomial_integral(dim, a, b, c);
        exact += cs[t] * mono;
      }
      CHECK_THAT(quad, Catch::Matchers::WithinAbs(exact, 1e-13));
    }
  }
}

TEST_CASE("exactness beyond the shipped maximum is rejected") {
  CHECK_THROWS_AS(volume_rule(2, 21), std::invalid_argument);
  CHECK_THROWS_AS(volume_rule(2, -1), std::invalid_argument);
  CHECK_THROWS_AS(volume_rule(4, 2), std::invalid_argument);
}
