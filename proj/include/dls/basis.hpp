// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "dls/geometry.hpp"

namespace dls {

// Descriptor of the broken (fully discontinuous) polynomial space of degree m.
// No DOF is shared between elements; within one field the global index of a
// local DOF is element_index * dofs_per_element + local_index.
struct DGSpace {
  enum class Kind { scalar, vector };

  int dim = 2;
  int degree = 1;
  Kind kind = Kind::scalar;

  DGSpace() = default;
  DGSpace(int dim_, int degree_, Kind kind_ = Kind::scalar) : dim(dim_), degree(degree_), kind(kind_) {
    if (dim < 2 || dim > 3) throw std::invalid_argument("DGSpace: dim must be 2 or 3");
    if (degree < 1 || degree > 4) throw std::invalid_argument("DGSpace: degree must be in [1, 4]");
  }

  // Scalar basis functions per element: C(m+dim, dim).
  int scalar_dofs() const { return static_cast<int>(binomial(degree + dim, dim)); }
  int dofs_per_element() const { return scalar_dofs() * (kind == Kind::vector ? dim : 1); }
  long global_dofs(long n_elements) const { return n_elements * dofs_per_element(); }
};

// Nodal Lagrange basis on the uniform point lattice of the reference simplex.
// Stored as coefficients over the monomial basis; shared read-only once built.
class ReferenceBasis {
 public:
  int dim = 2;
  int degree = 1;
  std::vector<std::array<int, 3>> exponents;  // monomial exponents, by total degree then lex
  std::vector<Vec> nodes;                     // Lagrange nodes, reference coordinates
  Eigen::MatrixXd coeff;                      // basis_i = sum_j coeff(i,j) * mono_j

  int size() const { return static_cast<int>(nodes.size()); }

  static const ReferenceBasis& get(int dim, int degree) {
    static std::map<std::pair<int, int>, ReferenceBasis> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(dim, degree);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, ReferenceBasis(dim, degree)).first;
    return it->second;
  }

  // Values and reference gradients of all basis functions at a reference point.
  void eval(const Vec& p, std::vector<double>& values, std::vector<Vec>& ref_grads) const {
    const int n = size();
    values.assign(n, 0.0);
    ref_grads.assign(n, Vec{});
    for (int j = 0; j < n; ++j) {
      const auto& e = exponents[j];
      double mv;
      Vec mg;
      mono_eval(p, e, mv, mg);
      for (int i = 0; i < n; ++i) {
        const double c = coeff(i, j);
        if (c == 0.0) continue;
        values[i] += c * mv;
        ref_grads[i] += c * mg;
      }
    }
  }

 private:
  ReferenceBasis(int dim_, int degree_) : dim(dim_), degree(degree_) {
    if (dim < 2 || dim > 3) throw std::invalid_argument("ReferenceBasis: dim must be 2 or 3");
    if (degree < 1 || degree > 4) throw std::invalid_argument("ReferenceBasis: degree must be in [1, 4]");
    for (int total = 0; total <= degree; ++total)
      for (int a = total; a >= 0; --a)
        for (int b = total - a; b >= 0; --b) {
          int c = total - a - b;
          if (dim == 2 && c > 0) continue;
          exponents.push_back({a, b, c});
          nodes.push_back({double(a) / degree, double(b) / degree, double(c) / degree});
        }
    // exponents are enumerated to align node k with monomial k for the lattice
    // (i1,...,id)/m; only the node positions matter below.
    const int n = size();
    Eigen::MatrixXd vand(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double mv;
        Vec mg;
        mono_eval(nodes[i], exponents[j], mv, mg);
        vand(i, j) = mv;
      }
    coeff = vand.inverse().transpose();
  }

  void mono_eval(const Vec& p, const std::array<int, 3>& e, double& value, Vec& grad) const {
    auto ipow = [](double x, int k) {
      double r = 1.0;
      for (int i = 0; i < k; ++i) r *= x;
      return r;
    };
    const double px = ipow(p.x, e[0]), py = ipow(p.y, e[1]), pz = ipow(p.z, e[2]);
    value = px * py * pz;
    grad.x = e[0] > 0 ? e[0] * ipow(p.x, e[0] - 1) * py * pz : 0.0;
    grad.y = e[1] > 0 ? e[1] * px * ipow(p.y, e[1] - 1) * pz : 0.0;
    grad.z = e[2] > 0 ? e[2] * px * py * ipow(p.z, e[2] - 1) : 0.0;
  }
};

}  // namespace dls
