// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "dls/basis.hpp"
#include "dls/mesh.hpp"
#include "dls/problems.hpp"
#include "dls/quadrature.hpp"
#include "dls/sparse.hpp"

namespace dls {

using CoefficientVector = std::vector<cplx>;

// Global DOF layout of the product space V_h^m x Sigma_h^m: all scalar DOFs
// first (element-major), then all vector DOFs (element-major, direction-major
// within the element).
struct DofLayout {
  int dim = 2;
  int degree = 1;
  int nu = 3;  // scalar basis functions per element
  std::int64_t n_elements = 0;

  DofLayout() = default;
  DofLayout(int dim_, int degree_, std::int64_t n_elements_)
      : dim(dim_), degree(degree_), nu(DGSpace(dim_, degree_).scalar_dofs()), n_elements(n_elements_) {}

  std::int64_t n_scalar() const { return n_elements * nu; }
  std::int64_t n_vector() const { return n_elements * nu * dim; }
  std::int64_t n_total() const { return n_scalar() + n_vector(); }
  int dofs_per_element() const { return nu * (1 + dim); }

  std::int64_t u_dof(std::int64_t e, int i) const { return e * nu + i; }
  std::int64_t p_dof(std::int64_t e, int dir, int i) const {
    return n_scalar() + (e * dim + dir) * static_cast<std::int64_t>(nu) + i;
  }
  // local index within an element block: u DOFs, then p by direction
  std::int64_t dof(std::int64_t e, int local, bool p_field) const {
    return p_field ? p_dof(e, local / nu, local % nu) : u_dof(e, local);
  }
};

struct AssembledSystem {
  DofLayout layout;
  CsrMatrix matrix;
  CoefficientVector rhs;
};

// Discrete fields of one element at one reference point.
struct LocalFields {
  cplx u{0.0};
  CVec grad_u;
  CVec p;
  cplx div_p{0.0};
};

namespace detail {

// basis values and physical gradients at a reference point of an element
inline void basis_at(const SimplicialMesh& mesh, const ReferenceBasis& rb, int e, const Vec& ref,
                     std::vector<double>& vals, std::vector<Vec>& grads) {
  static thread_local std::vector<Vec> ref_grads;
  rb.eval(ref, vals, ref_grads);
  grads.resize(ref_grads.size());
  for (std::size_t i = 0; i < ref_grads.size(); ++i) grads[i] = mesh.physical_gradient(e, ref_grads[i]);
}

inline LocalFields eval_local_fields(const DofLayout& lay, const CoefficientVector& coeffs, int e,
                                     const std::vector<double>& vals, const std::vector<Vec>& grads) {
  LocalFields f;
  for (int i = 0; i < lay.nu; ++i) {
    cplx cu = coeffs[lay.u_dof(e, i)];
    f.u += cu * vals[i];
    for (int d = 0; d < lay.dim; ++d) f.grad_u[d] += cu * grads[i][d];
    for (int d = 0; d < lay.dim; ++d) {
      cplx cp = coeffs[lay.p_dof(e, d, i)];
      f.p[d] += cp * vals[i];
      f.div_p += cp * grads[i][d];
    }
  }
  return f;
}

// Quadrature points of a physical face (barycentric combination of its
// vertices) and the physical weight factor.
struct FaceQuadrature {
  std::vector<Vec> points;
  std::vector<double> weights;  // physical, sum to the face measure
};

inline FaceQuadrature face_quadrature(const SimplicialMesh& mesh, int fi, const QuadratureRule& rule) {
  FaceQuadrature fq;
  const Face& f = mesh.faces[fi];
  const double scale = mesh.face_geom[fi].measure / QuadratureRule::reference_measure(mesh.dim - 1);
  fq.points.resize(rule.size());
  fq.weights.resize(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Vec p;
    for (int i = 0; i < mesh.verts_per_face(); ++i) p += rule.points[q][i] * mesh.vertices[f.verts[i]];
    fq.points[q] = p;
    fq.weights[q] = rule.weights[q] * scale;
  }
  return fq;
}

}  // namespace detail

// Assembles the Hermitian positive-definite system of the least-squares
// Euler-Lagrange equation. The penalty coefficient on every face term is
// penalty_scale / h_e.
inline AssembledSystem assemble(const SimplicialMesh& mesh, int degree, const ProblemSpec& problem,
                                double penalty_scale = 1.0) {
  if (mesh.dim != problem.dim) throw std::invalid_argument("assemble: mesh/problem dimension mismatch");
  for (const auto& g : mesh.elem_geom)
    if (!(g.volume > 0.0)) throw std::invalid_argument("assemble: element with non-positive volume");

  AssembledSystem sys;
  sys.layout = DofLayout(mesh.dim, degree, mesh.n_elements());
  const DofLayout& lay = sys.layout;
  const int nu = lay.nu, dim = lay.dim;
  const int nloc = lay.dofs_per_element();
  const double k = problem.k;
  const std::int64_t N = lay.n_total();
  sys.rhs.assign(N, cplx{0.0});

  // ---- sparsity pattern -----------------------------------------------------
  // u rows couple to the u blocks of the element and its face neighbors plus
  // the element's own p block; p rows symmetrically.
  std::vector<std::vector<int>> nbrs(mesh.n_elements());
  for (const auto& f : mesh.faces) {
    if (f.neighbor < 0) continue;
    nbrs[f.owner].push_back(f.neighbor);
    nbrs[f.neighbor].push_back(f.owner);
  }
  for (auto& v : nbrs) std::sort(v.begin(), v.end());

  CsrMatrix& A = sys.matrix;
  A.rows = A.cols = N;
  A.row_ptr.assign(N + 1, 0);
  for (std::int64_t e = 0; e < lay.n_elements; ++e) {
    std::int64_t u_cols = (1 + nbrs[e].size()) * nu + static_cast<std::int64_t>(nu) * dim;
    std::int64_t p_cols = nu + (1 + nbrs[e].size()) * static_cast<std::int64_t>(nu) * dim;
    for (int i = 0; i < nu; ++i) A.row_ptr[lay.u_dof(e, i) + 1] = u_cols;
    for (int d = 0; d < dim; ++d)
      for (int i = 0; i < nu; ++i) A.row_ptr[lay.p_dof(e, d, i) + 1] = p_cols;
  }
  for (std::int64_t r = 0; r < N; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
  A.col.resize(A.row_ptr[N]);
  A.val.assign(A.row_ptr[N], cplx{0.0});
  parallel_for(0, static_cast<std::size_t>(lay.n_elements), [&](std::size_t e) {
    std::vector<std::int64_t> ucols, pcols;
    auto push_u = [&](std::int64_t el) {
      for (int i = 0; i < nu; ++i) ucols.push_back(lay.u_dof(el, i));
    };
    auto push_p = [&](std::int64_t el) {
      for (int d = 0; d < dim; ++d)
        for (int i = 0; i < nu; ++i) pcols.push_back(lay.p_dof(el, d, i));
    };
    bool self_done = false;
    for (int nb : nbrs[e]) {
      if (!self_done && static_cast<std::int64_t>(e) < nb) {
        push_u(e);
        push_p(e);
        self_done = true;
      }
      push_u(nb);
      push_p(nb);
    }
    if (!self_done) {
      push_u(e);
      push_p(e);
    }
    // u rows: all u columns (ascending), then own p block
    std::int64_t base = A.row_ptr[lay.u_dof(e, 0)];
    std::int64_t nucols = ucols.size();
    for (int i = 0; i < nu; ++i) {
      std::int64_t off = base + i * (nucols + static_cast<std::int64_t>(nu) * dim);
      for (std::int64_t j = 0; j < nucols; ++j) A.col[off + j] = static_cast<std::int32_t>(ucols[j]);
      for (int d = 0; d < dim; ++d)
        for (int jj = 0; jj < nu; ++jj)
          A.col[off + nucols + d * nu + jj] = static_cast<std::int32_t>(lay.p_dof(e, d, jj));
    }
    // p rows: own u block, then all p columns (ascending)
    std::int64_t npcols = pcols.size();
    for (int d = 0; d < dim; ++d)
      for (int i = 0; i < nu; ++i) {
        std::int64_t off = A.row_ptr[lay.p_dof(e, d, i)];
        for (int jj = 0; jj < nu; ++jj) A.col[off + jj] = static_cast<std::int32_t>(lay.u_dof(e, jj));
        for (std::int64_t j = 0; j < npcols; ++j)
          A.col[off + nu + j] = static_cast<std::int32_t>(pcols[j]);
      }
  });

  // ---- volume terms -----------------------------------------------------
  const auto& rb = ReferenceBasis::get(dim, degree);
  const auto vrule = volume_rule(dim, 2 * degree + 2);
  const std::size_t nq = vrule.size();
  std::vector<std::vector<double>> vals_q(nq);
  std::vector<std::vector<Vec>> rgrads_q(nq);
  for (std::size_t q = 0; q < nq; ++q) rb.eval(vrule.ref_point(q), vals_q[q], rgrads_q[q]);

  struct ElementLocal {
    std::vector<double> mat;  // nloc x nloc, real contributions
    std::vector<cplx> rhs;    // nloc
  };

  // local index convention: [0, nu) = u, [nu + dir*nu + i] = p
  auto scatter_element = [&](std::int64_t e, const ElementLocal& loc) {
    for (int a = 0; a < nloc; ++a) {
      std::int64_t ga = lay.dof(e, a < nu ? a : a - nu, a >= nu);
      sys.rhs[ga] += loc.rhs[a];
      for (int b = 0; b < nloc; ++b) {
        double v = loc.mat[a * nloc + b];
        if (v != 0.0) A.add(ga, lay.dof(e, b < nu ? b : b - nu, b >= nu), v);
      }
    }
  };

  const std::size_t chunk = 512;
  std::vector<ElementLocal> locals(std::min<std::size_t>(chunk, mesh.n_elements()));
  for (std::size_t base = 0; base < static_cast<std::size_t>(mesh.n_elements()); base += chunk) {
    const std::size_t end = std::min(base + chunk, static_cast<std::size_t>(mesh.n_elements()));
    parallel_for(base, end, [&](std::size_t e) {
      ElementLocal& loc = locals[e - base];
      loc.mat.assign(static_cast<std::size_t>(nloc) * nloc, 0.0);
      loc.rhs.assign(nloc, cplx{0.0});
      std::vector<double> L1(nloc);
      std::vector<Vec> V2(nloc);
      std::vector<Vec> grads(nu);
      const double jac = std::abs(mesh.elem_geom[e].det_jac);
      for (std::size_t q = 0; q < nq; ++q) {
        const auto& vals = vals_q[q];
        for (int i = 0; i < nu; ++i) grads[i] = mesh.physical_gradient(e, rgrads_q[q][i]);
        for (int i = 0; i < nu; ++i) {
          L1[i] = k * vals[i];
          V2[i] = grads[i];
          for (int d = 0; d < dim; ++d) {
            L1[nu + d * nu + i] = grads[i][d];
            Vec v{};
            v[d] = -k * vals[i];
            V2[nu + d * nu + i] = v;
          }
        }
        const double w = vrule.weights[q] * jac;
        for (int a = 0; a < nloc; ++a)
          for (int b = 0; b < nloc; ++b)
            loc.mat[a * nloc + b] += w * (L1[a] * L1[b] + dot(V2[a], V2[b]));
        const cplx fw = problem.f_tilde(mesh.map_to_physical(e, vrule.ref_point(q))) * w;
        if (fw != cplx{0.0})
          for (int a = 0; a < nloc; ++a) loc.rhs[a] -= fw * L1[a];
      }
    });
    for (std::size_t e = base; e < end; ++e) scatter_element(e, locals[e - base]);
  }

  // ---- face terms -----------------------------------------------------
  const auto frule = face_rule(dim - 1, 2 * degree + 2);
  struct FaceLocal {
    // interior: jump blocks over (owner, neighbor) u and p traces
    std::vector<double> uu;  // (2nu)^2
    std::vector<double> pp;  // (2*nu*dim)^2
    // boundary: full complex block over the owner element + rhs
    std::vector<cplx> bmat;
    std::vector<cplx> brhs;
  };
  std::vector<FaceLocal> flocals(std::min<std::size_t>(chunk, mesh.n_faces()));

  auto scatter_face = [&](int fi, const FaceLocal& loc) {
    const Face& f = mesh.faces[fi];
    if (f.neighbor >= 0) {
      const std::int64_t els[2] = {f.owner, f.neighbor};
      for (int sa = 0; sa < 2; ++sa)
        for (int ia = 0; ia < nu; ++ia)
          for (int sb = 0; sb < 2; ++sb)
            for (int ib = 0; ib < nu; ++ib) {
              double v = loc.uu[(sa * nu + ia) * 2 * nu + (sb * nu + ib)];
              if (v != 0.0) A.add(lay.u_dof(els[sa], ia), lay.u_dof(els[sb], ib), v);
            }
      const int np = nu * dim;
      for (int sa = 0; sa < 2; ++sa)
        for (int ia = 0; ia < np; ++ia)
          for (int sb = 0; sb < 2; ++sb)
            for (int ib = 0; ib < np; ++ib) {
              double v = loc.pp[(sa * np + ia) * 2 * np + (sb * np + ib)];
              if (v != 0.0)
                A.add(lay.p_dof(els[sa], ia / nu, ia % nu), lay.p_dof(els[sb], ib / nu, ib % nu), v);
            }
    } else {
      for (int a = 0; a < nloc; ++a) {
        std::int64_t ga = lay.dof(f.owner, a < nu ? a : a - nu, a >= nu);
        sys.rhs[ga] += loc.brhs[a];
        for (int b = 0; b < nloc; ++b) {
          cplx v = loc.bmat[a * nloc + b];
          if (v != cplx{0.0}) A.add(ga, lay.dof(f.owner, b < nu ? b : b - nu, b >= nu), v);
        }
      }
    }
  };

  for (std::size_t base = 0; base < static_cast<std::size_t>(mesh.n_faces()); base += chunk) {
    const std::size_t end = std::min(base + chunk, static_cast<std::size_t>(mesh.n_faces()));
    parallel_for(base, end, [&](std::size_t fi) {
      FaceLocal& loc = flocals[fi - base];
      const Face& f = mesh.faces[static_cast<int>(fi)];
      const double pen = penalty_scale / mesh.face_geom[fi].diameter;
      const Vec n = mesh.face_geom[fi].normal;
      auto fq = detail::face_quadrature(mesh, static_cast<int>(fi), frule);
      std::vector<double> vo, vn;
      std::vector<Vec> go;
      if (f.neighbor >= 0) {
        loc.uu.assign(4 * nu * nu, 0.0);
        const int np = nu * dim;
        loc.pp.assign(4 * np * np, 0.0);
        std::vector<double> ju(2 * nu), jp(2 * np);
        for (std::size_t q = 0; q < fq.points.size(); ++q) {
          detail::basis_at(mesh, rb, f.owner, mesh.map_to_reference(f.owner, fq.points[q]), vo, go);
          detail::basis_at(mesh, rb, f.neighbor, mesh.map_to_reference(f.neighbor, fq.points[q]), vn, go);
          for (int i = 0; i < nu; ++i) {
            ju[i] = vo[i];
            ju[nu + i] = -vn[i];
            for (int d = 0; d < dim; ++d) {
              jp[d * nu + i] = n[d] * vo[i];
              jp[np + d * nu + i] = -n[d] * vn[i];
            }
          }
          const double w = pen * fq.weights[q];
          for (int a = 0; a < 2 * nu; ++a)
            for (int b = 0; b < 2 * nu; ++b) loc.uu[a * 2 * nu + b] += w * ju[a] * ju[b];
          for (int a = 0; a < 2 * np; ++a)
            for (int b = 0; b < 2 * np; ++b) loc.pp[a * 2 * np + b] += w * jp[a] * jp[b];
        }
      } else {
        loc.bmat.assign(static_cast<std::size_t>(nloc) * nloc, cplx{0.0});
        loc.brhs.assign(nloc, cplx{0.0});
        std::vector<cplx> S(nloc);
        for (std::size_t q = 0; q < fq.points.size(); ++q) {
          detail::basis_at(mesh, rb, f.owner, mesh.map_to_reference(f.owner, fq.points[q]), vo, go);
          const double w = pen * fq.weights[q];
          if (f.tag == BoundaryTag::dirichlet) {
            for (int a = 0; a < nu; ++a)
              for (int b = 0; b < nu; ++b) loc.bmat[a * nloc + b] += w * vo[a] * vo[b];
            const cplx gw = problem.g0(fq.points[q]) * w;
            for (int a = 0; a < nu; ++a) loc.brhs[a] += gw * vo[a];
          } else {
            // Robin trace operator n.q + i v on the element's dofs
            for (int i = 0; i < nu; ++i) {
              S[i] = I_UNIT * vo[i];
              for (int d = 0; d < dim; ++d) S[nu + d * nu + i] = n[d] * vo[i];
            }
            for (int a = 0; a < nloc; ++a)
              for (int b = 0; b < nloc; ++b) loc.bmat[a * nloc + b] += w * S[b] * std::conj(S[a]);
            const cplx gw = problem.g_tilde(fq.points[q], n) * w;
            for (int a = 0; a < nloc; ++a) loc.brhs[a] += gw * std::conj(S[a]);
          }
        }
      }
    });
    for (std::size_t fi = base; fi < end; ++fi) scatter_face(static_cast<int>(fi), flocals[fi - base]);
  }

  return sys;
}

// ---- functional and field evaluation ----------------------------------------

// J_h by direct quadrature of every residual term, including the data terms.
inline double evaluate_functional(const SimplicialMesh& mesh, int degree, const ProblemSpec& problem,
                                  const CoefficientVector& coeffs, double penalty_scale = 1.0) {
  const DofLayout lay(mesh.dim, degree, mesh.n_elements());
  if (static_cast<std::int64_t>(coeffs.size()) != lay.n_total())
    throw std::invalid_argument("evaluate_functional: coefficient vector length mismatch");
  const auto& rb = ReferenceBasis::get(lay.dim, degree);
  const auto vrule = volume_rule(lay.dim, 2 * degree + 2);
  const double k = problem.k;

  std::vector<double> per_element(mesh.n_elements());
  parallel_for(0, static_cast<std::size_t>(mesh.n_elements()), [&](std::size_t e) {
    std::vector<double> vals;
    std::vector<Vec> grads;
    double acc = 0.0;
    const double jac = std::abs(mesh.elem_geom[e].det_jac);
    for (std::size_t q = 0; q < vrule.size(); ++q) {
      detail::basis_at(mesh, rb, static_cast<int>(e), vrule.ref_point(q), vals, grads);
      LocalFields f = detail::eval_local_fields(lay, coeffs, static_cast<int>(e), vals, grads);
      Vec x = mesh.map_to_physical(static_cast<int>(e), vrule.ref_point(q));
      cplx r1 = f.div_p + k * f.u + problem.f_tilde(x);
      CVec r2 = f.grad_u - f.p * cplx{k};
      acc += vrule.weights[q] * jac * (std::norm(r1) + norm2(r2));
    }
    per_element[e] = acc;
  });

  const auto frule = face_rule(lay.dim - 1, 2 * degree + 2);
  std::vector<double> per_face(mesh.n_faces());
  parallel_for(0, static_cast<std::size_t>(mesh.n_faces()), [&](std::size_t fi) {
    const Face& f = mesh.faces[fi];
    const double pen = penalty_scale / mesh.face_geom[fi].diameter;
    const Vec n = mesh.face_geom[fi].normal;
    auto fq = detail::face_quadrature(mesh, static_cast<int>(fi), frule);
    std::vector<double> vals;
    std::vector<Vec> grads;
    double acc = 0.0;
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      detail::basis_at(mesh, rb, f.owner, mesh.map_to_reference(f.owner, fq.points[q]), vals, grads);
      LocalFields fo = detail::eval_local_fields(lay, coeffs, f.owner, vals, grads);
      if (f.neighbor >= 0) {
        detail::basis_at(mesh, rb, f.neighbor, mesh.map_to_reference(f.neighbor, fq.points[q]), vals, grads);
        LocalFields fn = detail::eval_local_fields(lay, coeffs, f.neighbor, vals, grads);
        acc += fq.weights[q] * pen *
               (std::norm(fo.u - fn.u) + std::norm(dot(n, fo.p) - dot(n, fn.p)));
      } else if (f.tag == BoundaryTag::dirichlet) {
        acc += fq.weights[q] * pen * std::norm(fo.u - problem.g0(fq.points[q]));
      } else {
        acc += fq.weights[q] * pen *
               std::norm(dot(n, fo.p) + I_UNIT * fo.u - problem.g_tilde(fq.points[q], n));
      }
    }
    per_face[fi] = acc;
  });

  double total = 0.0;
  for (double v : per_element) total += v;
  for (double v : per_face) total += v;
  return total;
}

// The data-dependent constant of the quadratic form: J_h(x) = x*Ax - 2Re(x*b) + c.
inline double data_norm_constant(const SimplicialMesh& mesh, int degree, const ProblemSpec& problem,
                                 double penalty_scale = 1.0) {
  const auto vrule = volume_rule(mesh.dim, 2 * degree + 2);
  double c = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double jac = std::abs(mesh.elem_geom[e].det_jac);
    for (std::size_t q = 0; q < vrule.size(); ++q)
      c += vrule.weights[q] * jac * std::norm(problem.f_tilde(mesh.map_to_physical(e, vrule.ref_point(q))));
  }
  const auto frule = face_rule(mesh.dim - 1, 2 * degree + 2);
  for (int fi = 0; fi < mesh.n_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.neighbor >= 0) continue;
    const double pen = penalty_scale / mesh.face_geom[fi].diameter;
    auto fq = detail::face_quadrature(mesh, fi, frule);
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      cplx g = f.tag == BoundaryTag::dirichlet ? problem.g0(fq.points[q])
                                               : problem.g_tilde(fq.points[q], mesh.face_geom[fi].normal);
      c += fq.weights[q] * pen * std::norm(g);
    }
  }
  return c;
}

// Fields of the discrete solution at a physical point of a given element.
inline LocalFields evaluate_solution(const SimplicialMesh& mesh, int degree,
                                     const CoefficientVector& coeffs, int element, const Vec& point) {
  const DofLayout lay(mesh.dim, degree, mesh.n_elements());
  if (static_cast<std::int64_t>(coeffs.size()) != lay.n_total())
    throw std::invalid_argument("evaluate_solution: coefficient vector length mismatch");
  if (element < 0 || element >= mesh.n_elements())
    throw std::out_of_range("evaluate_solution: element index out of range");
  Vec ref = mesh.map_to_reference(element, point);
  double b0 = 1.0 - ref.x - ref.y - ref.z;
  const double tol = 1e-10;
  if (ref.x < -tol || ref.y < -tol || ref.z < -tol || b0 < -tol)
    throw std::domain_error("evaluate_solution: point outside element");
  const auto& rb = ReferenceBasis::get(mesh.dim, degree);
  std::vector<double> vals;
  std::vector<Vec> grads;
  detail::basis_at(mesh, rb, element, ref, vals, grads);
  return detail::eval_local_fields(lay, coeffs, element, vals, grads);
}

// Nodal interpolant of an exact solution (u at the Lagrange nodes, p = grad/k
// componentwise). The workhorse behind the polynomial-exactness oracles.
inline CoefficientVector interpolate(const SimplicialMesh& mesh, int degree, const ExactSolution& ex) {
  const DofLayout lay(mesh.dim, degree, mesh.n_elements());
  const auto& rb = ReferenceBasis::get(mesh.dim, degree);
  CoefficientVector coeffs(lay.n_total());
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int i = 0; i < lay.nu; ++i) {
      Vec x = mesh.map_to_physical(e, rb.nodes[i]);
      coeffs[lay.u_dof(e, i)] = ex.u(x);
      CVec p = ex.p(x);
      for (int d = 0; d < lay.dim; ++d) coeffs[lay.p_dof(e, d, i)] = p[d];
    }
  return coeffs;
}

// Coordinate-format text dump (row, col, re, im), one entry per line.
inline void dump_matrix(const AssembledSystem& sys, std::ostream& out) {
  char buf[128];
  for (std::int64_t r = 0; r < sys.matrix.rows; ++r)
    for (std::int64_t kk = sys.matrix.row_ptr[r]; kk < sys.matrix.row_ptr[r + 1]; ++kk) {
      std::snprintf(buf, sizeof(buf), "%lld %d %.17g %.17g\n", static_cast<long long>(r),
                    sys.matrix.col[kk], sys.matrix.val[kk].real(), sys.matrix.val[kk].imag());
      out << buf;
    }
}

}  // namespace dls
