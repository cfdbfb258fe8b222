// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numeric>
#include <set>

#include "dls/assembly.hpp"
#include "dls/solver.hpp"

namespace dls {

// Error measures of a discrete solution against the exact one, plus the
// a-posteriori bookkeeping. per_element_eta follows the paper convention in
// which an interior face contributes its full term to both adjacent elements;
// interior_face_total holds each such term once, so that
//   eta_sq_total - interior_face_total == functional_value.
struct ErrorReport {
  double energy_error = 0.0;
  double l2_u = 0.0;
  double l2_p = 0.0;
  double functional_value = 0.0;
  std::vector<double> per_element_eta;
  double eta_sq_total = 0.0;
  double interior_face_total = 0.0;
  std::int64_t n_dofs = 0;
  double h_max = 0.0;
};

struct IndicatorReport {
  std::vector<double> eta;  // per element
  double eta_sq_total = 0.0;
  double functional_value = 0.0;
  double interior_face_total = 0.0;
};

namespace detail {

// Per-element volume residual and per-face penalty terms of J_h.
struct FunctionalPieces {
  std::vector<double> element_terms;
  std::vector<double> face_terms;
};

inline FunctionalPieces functional_pieces(const SimplicialMesh& mesh, int degree,
                                          const ProblemSpec& problem, const CoefficientVector& coeffs,
                                          double penalty_scale) {
  const DofLayout lay(mesh.dim, degree, mesh.n_elements());
  if (static_cast<std::int64_t>(coeffs.size()) != lay.n_total())
    throw std::invalid_argument("indicators: coefficient vector length mismatch");
  const auto& rb = ReferenceBasis::get(lay.dim, degree);
  const auto vrule = volume_rule(lay.dim, 2 * degree + 2);
  const auto frule = face_rule(lay.dim - 1, 2 * degree + 2);
  const double k = problem.k;

  FunctionalPieces out;
  out.element_terms.resize(mesh.n_elements());
  out.face_terms.resize(mesh.n_faces());

  parallel_for(0, static_cast<std::size_t>(mesh.n_elements()), [&](std::size_t e) {
    std::vector<double> vals;
    std::vector<Vec> grads;
    double acc = 0.0;
    const double jac = std::abs(mesh.elem_geom[e].det_jac);
    for (std::size_t q = 0; q < vrule.size(); ++q) {
      basis_at(mesh, rb, static_cast<int>(e), vrule.ref_point(q), vals, grads);
      LocalFields f = eval_local_fields(lay, coeffs, static_cast<int>(e), vals, grads);
      Vec x = mesh.map_to_physical(static_cast<int>(e), vrule.ref_point(q));
      cplx r1 = f.div_p + k * f.u + problem.f_tilde(x);
      CVec r2 = f.grad_u - f.p * cplx{k};
      acc += vrule.weights[q] * jac * (std::norm(r1) + norm2(r2));
    }
    out.element_terms[e] = acc;
  });

  parallel_for(0, static_cast<std::size_t>(mesh.n_faces()), [&](std::size_t fi) {
    const Face& f = mesh.faces[fi];
    const double pen = penalty_scale / mesh.face_geom[fi].diameter;
    const Vec n = mesh.face_geom[fi].normal;
    auto fq = face_quadrature(mesh, static_cast<int>(fi), frule);
    std::vector<double> vals;
    std::vector<Vec> grads;
    double acc = 0.0;
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      basis_at(mesh, rb, f.owner, mesh.map_to_reference(f.owner, fq.points[q]), vals, grads);
      LocalFields fo = eval_local_fields(lay, coeffs, f.owner, vals, grads);
      if (f.neighbor >= 0) {
        basis_at(mesh, rb, f.neighbor, mesh.map_to_reference(f.neighbor, fq.points[q]), vals, grads);
        LocalFields fn = eval_local_fields(lay, coeffs, f.neighbor, vals, grads);
        acc += fq.weights[q] * pen * (std::norm(fo.u - fn.u) + std::norm(dot(n, fo.p) - dot(n, fn.p)));
      } else if (f.tag == BoundaryTag::dirichlet) {
        acc += fq.weights[q] * pen * std::norm(fo.u - problem.g0(fq.points[q]));
      } else {
        acc += fq.weights[q] * pen *
               std::norm(dot(n, fo.p) + I_UNIT * fo.u - problem.g_tilde(fq.points[q], n));
      }
    }
    out.face_terms[fi] = acc;
  });
  return out;
}

}  // namespace detail

// Refinement indicators eta_K: the element residual plus the penalty terms of
// every face of K (interior faces count toward both adjacent elements).
inline IndicatorReport compute_indicators(const SimplicialMesh& mesh, int degree,
                                          const ProblemSpec& problem, const CoefficientVector& coeffs,
                                          double penalty_scale = 1.0) {
  auto pieces = detail::functional_pieces(mesh, degree, problem, coeffs, penalty_scale);
  IndicatorReport rep;
  std::vector<double> eta_sq = pieces.element_terms;
  for (int fi = 0; fi < mesh.n_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    eta_sq[f.owner] += pieces.face_terms[fi];
    if (f.neighbor >= 0) {
      eta_sq[f.neighbor] += pieces.face_terms[fi];
      rep.interior_face_total += pieces.face_terms[fi];
    }
  }
  rep.eta.resize(eta_sq.size());
  for (std::size_t e = 0; e < eta_sq.size(); ++e) {
    rep.eta_sq_total += eta_sq[e];
    rep.eta[e] = std::sqrt(std::max(0.0, eta_sq[e]));
  }
  rep.functional_value = std::accumulate(pieces.element_terms.begin(), pieces.element_terms.end(), 0.0) +
                         std::accumulate(pieces.face_terms.begin(), pieces.face_terms.end(), 0.0);
  return rep;
}

// Energy norm of the error, broken L2 errors, J_h, and the indicators.
// The exact solution has no interior jumps, so the face terms of the error
// reduce to the discrete jumps and the boundary-data mismatches.
inline ErrorReport compute_errors(const SimplicialMesh& mesh, int degree, const CoefficientVector& coeffs,
                                  const ProblemSpec& problem, double penalty_scale = 1.0) {
  if (!problem.exact) throw std::invalid_argument("compute_errors: problem has no exact solution");
  const ExactSolution& ex = *problem.exact;
  const DofLayout lay(mesh.dim, degree, mesh.n_elements());
  if (static_cast<std::int64_t>(coeffs.size()) != lay.n_total())
    throw std::invalid_argument("compute_errors: coefficient vector length mismatch");
  const auto& rb = ReferenceBasis::get(lay.dim, degree);
  const auto vrule = volume_rule(lay.dim, 2 * degree + 2);
  const auto frule = face_rule(lay.dim - 1, 2 * degree + 2);
  const double k = problem.k;

  struct Acc {
    double vol = 0.0, l2u = 0.0, l2p = 0.0;
  };
  std::vector<Acc> per_element(mesh.n_elements());
  parallel_for(0, static_cast<std::size_t>(mesh.n_elements()), [&](std::size_t e) {
    std::vector<double> vals;
    std::vector<Vec> grads;
    Acc acc;
    const double jac = std::abs(mesh.elem_geom[e].det_jac);
    for (std::size_t q = 0; q < vrule.size(); ++q) {
      detail::basis_at(mesh, rb, static_cast<int>(e), vrule.ref_point(q), vals, grads);
      LocalFields f = detail::eval_local_fields(lay, coeffs, static_cast<int>(e), vals, grads);
      Vec x = mesh.map_to_physical(static_cast<int>(e), vrule.ref_point(q));
      const double w = vrule.weights[q] * jac;
      cplx du = ex.u(x) - f.u;
      CVec dgrad = ex.grad_u(x) - f.grad_u;
      CVec dp = ex.p(x) - f.p;
      cplx ddiv = ex.div_p(x) - f.div_p;
      acc.l2u += w * std::norm(du);
      acc.l2p += w * norm2(dp);
      acc.vol += w * (k * k * std::norm(du) + norm2(dgrad) + k * k * norm2(dp) + std::norm(ddiv));
    }
    per_element[e] = acc;
  });

  std::vector<double> face_err(mesh.n_faces());
  parallel_for(0, static_cast<std::size_t>(mesh.n_faces()), [&](std::size_t fi) {
    const Face& f = mesh.faces[fi];
    const double pen = 1.0 / mesh.face_geom[fi].diameter;  // energy norm weight
    const Vec n = mesh.face_geom[fi].normal;
    auto fq = detail::face_quadrature(mesh, static_cast<int>(fi), frule);
    std::vector<double> vals;
    std::vector<Vec> grads;
    double acc = 0.0;
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      detail::basis_at(mesh, rb, f.owner, mesh.map_to_reference(f.owner, fq.points[q]), vals, grads);
      LocalFields fo = detail::eval_local_fields(lay, coeffs, f.owner, vals, grads);
      const Vec& x = fq.points[q];
      if (f.neighbor >= 0) {
        detail::basis_at(mesh, rb, f.neighbor, mesh.map_to_reference(f.neighbor, fq.points[q]), vals, grads);
        LocalFields fn = detail::eval_local_fields(lay, coeffs, f.neighbor, vals, grads);
        acc += fq.weights[q] * pen * (std::norm(fo.u - fn.u) + std::norm(dot(n, fo.p) - dot(n, fn.p)));
      } else if (f.tag == BoundaryTag::dirichlet) {
        acc += fq.weights[q] * pen * std::norm(ex.u(x) - fo.u);
      } else {
        cplx robin_err = dot(n, ex.p(x) - fo.p) + I_UNIT * (ex.u(x) - fo.u);
        acc += fq.weights[q] * pen * std::norm(robin_err);
      }
    }
    face_err[fi] = acc;
  });

  ErrorReport rep;
  double energy_sq = 0.0, l2u_sq = 0.0, l2p_sq = 0.0;
  for (const Acc& a : per_element) {
    energy_sq += a.vol;
    l2u_sq += a.l2u;
    l2p_sq += a.l2p;
  }
  for (double v : face_err) energy_sq += v;
  rep.energy_error = std::sqrt(energy_sq);
  rep.l2_u = std::sqrt(l2u_sq);
  rep.l2_p = std::sqrt(l2p_sq);
  rep.n_dofs = lay.n_total();
  rep.h_max = mesh.max_diameter();

  auto ind = compute_indicators(mesh, degree, problem, coeffs, penalty_scale);
  rep.per_element_eta = std::move(ind.eta);
  rep.eta_sq_total = ind.eta_sq_total;
  rep.functional_value = ind.functional_value;
  rep.interior_face_total = ind.interior_face_total;
  return rep;
}

// Energy norm of the exact solution (for relative errors): volume terms plus
// the Robin boundary trace term; the exact solution has no jumps and the
// Dirichlet term is the boundary trace of u itself.
inline double exact_energy_norm(const SimplicialMesh& mesh, int degree, const ProblemSpec& problem) {
  if (!problem.exact) throw std::invalid_argument("exact_energy_norm: no exact solution");
  const ExactSolution& ex = *problem.exact;
  const auto vrule = volume_rule(mesh.dim, 2 * degree + 2);
  const auto frule = face_rule(mesh.dim - 1, 2 * degree + 2);
  const double k = problem.k;
  double total = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double jac = std::abs(mesh.elem_geom[e].det_jac);
    for (std::size_t q = 0; q < vrule.size(); ++q) {
      Vec x = mesh.map_to_physical(e, vrule.ref_point(q));
      total += vrule.weights[q] * jac *
               (k * k * std::norm(ex.u(x)) + norm2(ex.grad_u(x)) + k * k * norm2(ex.p(x)) +
                std::norm(ex.div_p(x)));
    }
  }
  for (int fi = 0; fi < mesh.n_faces(); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.neighbor >= 0) continue;
    const double pen = 1.0 / mesh.face_geom[fi].diameter;
    const Vec n = mesh.face_geom[fi].normal;
    auto fq = detail::face_quadrature(mesh, fi, frule);
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      const Vec& x = fq.points[q];
      if (f.tag == BoundaryTag::dirichlet)
        total += fq.weights[q] * pen * std::norm(ex.u(x));
      else
        total += fq.weights[q] * pen * std::norm(dot(n, ex.p(x)) + I_UNIT * ex.u(x));
    }
  }
  return std::sqrt(total);
}

// ---- marking and the adaptive loop ------------------------------------------

struct MarkSet {
  std::set<int> marked;
  double lambda = 0.0;
  double achieved_fraction = 0.0;
  bool all_zero = false;
};

// Greedy Doerfler marking: smallest set (by decreasing eta, ties by lower
// element index) whose squared indicators reach the fraction lambda.
inline MarkSet mark_dorfler(const std::vector<double>& etas, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0 + 1e-15))
    throw std::invalid_argument("mark_dorfler: lambda must lie in (0, 1]");
  MarkSet out;
  out.lambda = lambda;
  std::vector<int> order(etas.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (etas[a] != etas[b]) return etas[a] > etas[b];
    return a < b;
  });
  // Total computed in the same (sorted) order, so the greedy accumulation can
  // reach it exactly even for lambda = 1.
  double total = 0.0;
  for (int e : order) total += etas[e] * etas[e];
  if (total == 0.0) {
    out.all_zero = true;
    return out;
  }
  double cum = 0.0;
  for (int e : order) {
    if (cum >= lambda * total) break;
    if (etas[e] == 0.0) break;
    cum += etas[e] * etas[e];
    out.marked.insert(e);
  }
  out.achieved_fraction = cum / total;
  return out;
}

struct AdaptiveStop {
  std::int64_t max_dofs = 0;       // stop once n_dofs reaches this (0 = unused)
  int max_iterations = -1;         // number of refinements (-1 = unused)
  double eta_threshold = 0.0;      // stop once sqrt(sum eta^2) drops below (0 = unused)
};

struct AdaptiveRecord {
  SimplicialMesh mesh;
  CoefficientVector coeffs;
  ErrorReport errors;
  SolveReport solve;
  int n_marked = 0;
};

// Solve -> Estimate -> Mark -> Refine loop with longest-edge bisection.
// Errors in the report require an exact solution; the indicator-driven loop
// itself does not.
inline std::vector<AdaptiveRecord> adaptive_solve(const ProblemSpec& problem, int degree, double lambda,
                                                  const AdaptiveStop& stop, int initial_n = 4,
                                                  const SolverConfig& solver_config = {},
                                                  double penalty_scale = 1.0) {
  if (stop.max_dofs <= 0 && stop.max_iterations < 0 && stop.eta_threshold <= 0.0)
    throw std::invalid_argument("adaptive_solve: no stop criterion given");
  std::vector<AdaptiveRecord> history;
  SimplicialMesh mesh = problem.initial_mesh(initial_n);
  for (int iter = 0;; ++iter) {
    AdaptiveRecord rec{std::move(mesh), {}, {}, {}, 0};
    auto sys = assemble(rec.mesh, degree, problem, penalty_scale);
    auto [coeffs, solve_rep] = solve(sys, solver_config);
    rec.coeffs = std::move(coeffs);
    rec.solve = solve_rep;
    if (problem.exact) {
      rec.errors = compute_errors(rec.mesh, degree, rec.coeffs, problem, penalty_scale);
    } else {
      auto ind = compute_indicators(rec.mesh, degree, problem, rec.coeffs, penalty_scale);
      rec.errors.per_element_eta = std::move(ind.eta);
      rec.errors.eta_sq_total = ind.eta_sq_total;
      rec.errors.functional_value = ind.functional_value;
      rec.errors.interior_face_total = ind.interior_face_total;
      rec.errors.n_dofs = sys.layout.n_total();
      rec.errors.h_max = rec.mesh.max_diameter();
    }
    if (!solve_rep.converged) {
      // abort with the partial history; the failed record closes it
      history.push_back(std::move(rec));
      return history;
    }

    const bool done = (stop.max_iterations >= 0 && iter >= stop.max_iterations) ||
                      (stop.max_dofs > 0 && rec.errors.n_dofs >= stop.max_dofs) ||
                      (stop.eta_threshold > 0.0 && std::sqrt(rec.errors.eta_sq_total) <= stop.eta_threshold);
    if (done) {
      history.push_back(std::move(rec));
      break;
    }
    auto marks = mark_dorfler(rec.errors.per_element_eta, lambda);
    rec.n_marked = static_cast<int>(marks.marked.size());
    if (marks.all_zero) {
      history.push_back(std::move(rec));
      break;
    }
    mesh = refine_bisection(rec.mesh, marks.marked);
    history.push_back(std::move(rec));
  }
  return history;
}

}  // namespace dls
