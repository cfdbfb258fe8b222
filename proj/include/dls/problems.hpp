// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "dls/meshgen.hpp"
#include "dls/special_functions.hpp"

namespace dls {

// Closed-form solution of the first-order system: u, p = grad(u)/k and
// div p = laplace(u)/k.
struct ExactSolution {
  double k = 1.0;
  std::function<cplx(const Vec&)> u;
  std::function<CVec(const Vec&)> grad_u;
  std::function<cplx(const Vec&)> div_p;

  CVec p(const Vec& x) const { return grad_u(x) * cplx(1.0 / k); }
};

struct ProblemParams {
  double k = 1.0;
  double alpha = 2.0 / 3.0;       // corner exponent (lshape_singular)
  double theta = M_PI / 4.0;      // propagation angles (plane_wave_3d)
  double phi = M_PI / 5.0;
  double a = 1.0;                 // inner radius (cylinder_radiation)
  int mode = 4;                   // circumferential mode (cylinder_radiation)
  int poly_degree = 1;            // manufactured_poly
  int poly_dim = 2;               // manufactured_poly
  int segments = 64;              // annulus boundary resolution
};

// A benchmark problem: wavenumber, scaled data of the first-order system
// (f~ = f/k, g~ = g/k), Dirichlet data, default domain, exact solution.
struct ProblemSpec {
  std::string name;
  int dim = 2;
  double k = 1.0;
  DomainSpec domain;
  std::function<cplx(const Vec&)> f_tilde;
  std::function<cplx(const Vec&)> g0;
  std::function<cplx(const Vec&, const Vec&)> g_tilde;  // (point, outward normal)
  std::optional<ExactSolution> exact;

  SimplicialMesh initial_mesh(int n) const { return generate_structured(domain, n); }
};

namespace detail {

inline double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index + 1; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

// Quasi-random interior sample points of the problem domain.
inline std::vector<Vec> domain_samples(const DomainSpec& dom, int dim, int count) {
  std::vector<Vec> pts;
  int i = 0;
  while (static_cast<int>(pts.size()) < count && i < 100 * count + 1000) {
    Vec h{halton(i, 2), halton(i, 3), halton(i, 5)};
    ++i;
    Vec p;
    switch (dom.kind) {
      case DomainSpec::Kind::unit_square:
        p = {h.x, h.y, 0.0};
        break;
      case DomainSpec::Kind::square:
        p = {dom.lo.x + h.x * (dom.hi.x - dom.lo.x), dom.lo.y + h.y * (dom.hi.y - dom.lo.y), 0.0};
        break;
      case DomainSpec::Kind::cube:
        p = {2.0 * h.x - 1.0, 2.0 * h.y - 1.0, 2.0 * h.z - 1.0};
        break;
      case DomainSpec::Kind::l_shape:
        p = {2.0 * h.x - 1.0, 2.0 * h.y - 1.0, 0.0};
        if (p.x >= 0.0 && p.y <= 0.0) continue;
        break;
      case DomainSpec::Kind::annulus: {
        double r = dom.a * (1.0 + h.x), t = 2.0 * M_PI * h.y;
        p = {r * std::cos(t), r * std::sin(t), 0.0};
        break;
      }
    }
    (void)dim;
    pts.push_back(p);
  }
  return pts;
}

inline double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

inline double j1_over_x(double t) {
  if (std::abs(t) < 1e-4) {
    double t2 = t * t;
    return 0.5 - t2 / 16.0 + t2 * t2 / 384.0;
  }
  return bessel_j(1, t) / t;
}

}  // namespace detail

// Checks that the exact solution satisfies the first-order system at interior
// sample points, and that grad_u is the derivative of u (difference-quotient
// spot check away from boundaries and singularities). Returns the worst
// first-order-system residual.
inline double verify_exact_solution(const ProblemSpec& spec, int n_points = 200) {
  if (!spec.exact) return 0.0;
  const auto& ex = *spec.exact;
  auto pts = detail::domain_samples(spec.domain, spec.dim, n_points);
  double worst = 0.0;
  for (const auto& x : pts) {
    cplx residual = -ex.div_p(x) - spec.k * ex.u(x) - spec.f_tilde(x);
    worst = std::max(worst, std::abs(residual));
  }
  if (!(worst <= 1e-8))
    throw std::logic_error(spec.name + ": exact solution fails the first-order system check");

  // Difference-quotient check of grad_u on a thinned subset, skipping points
  // near the domain boundary and the L-shape branch edge.
  const double h = 1e-6;
  double worst_grad = 0.0;
  int used = 0;
  for (std::size_t idx = 0; idx < pts.size() && used < 40; idx += 5) {
    const Vec& x = pts[idx];
    if (spec.domain.kind == DomainSpec::Kind::l_shape) {
      double r = std::hypot(x.x, x.y);
      double th = std::atan2(x.y, x.x);
      if (th < 0) th += 2.0 * M_PI;
      if (r < 0.1 || r > 0.9 || th < 0.2 || th > 1.5 * M_PI - 0.2) continue;
    }
    if (spec.domain.kind == DomainSpec::Kind::annulus) {
      double r = std::hypot(x.x, x.y);
      if (r < 1.01 * spec.domain.a || r > 1.99 * spec.domain.a) continue;
    }
    ++used;
    CVec g = ex.grad_u(x);
    for (int d = 0; d < spec.dim; ++d) {
      Vec xp = x, xm = x;
      xp[d] += h;
      xm[d] -= h;
      worst_grad = std::max(worst_grad, std::abs((ex.u(xp) - ex.u(xm)) / (2.0 * h) - g[d]));
    }
  }
  if (!(worst_grad <= 1e-5))
    throw std::logic_error(spec.name + ": grad_u disagrees with the difference quotient of u");
  return worst;
}

namespace detail {

inline ProblemSpec finish(ProblemSpec spec) {
  // Robin and Dirichlet data always come from the exact solution.
  const ExactSolution ex = *spec.exact;
  spec.g0 = [ex](const Vec& x) { return ex.u(x); };
  spec.g_tilde = [ex](const Vec& x, const Vec& n) { return dot(n, ex.p(x)) + I_UNIT * ex.u(x); };
  verify_exact_solution(spec);
  return spec;
}

inline ProblemSpec make_plane_wave(int dim, const ProblemParams& par) {
  if (!(par.k > 0)) throw std::invalid_argument("plane_wave: k must be positive");
  Vec d;
  if (dim == 2)
    d = {std::cos(M_PI / 5.0), std::sin(M_PI / 5.0), 0.0};
  else
    d = {std::sin(par.theta) * std::cos(par.phi), std::sin(par.theta) * std::sin(par.phi),
         std::cos(par.theta)};
  const double k = par.k;
  ProblemSpec spec;
  spec.name = dim == 2 ? "plane_wave_2d" : "plane_wave_3d";
  spec.dim = dim;
  spec.k = k;
  spec.domain.kind = dim == 2 ? DomainSpec::Kind::unit_square : DomainSpec::Kind::cube;
  auto u = [k, d](const Vec& x) { return std::exp(I_UNIT * k * dot(d, x)); };
  ExactSolution ex;
  ex.k = k;
  ex.u = u;
  ex.grad_u = [k, d, u](const Vec& x) {
    cplx s = I_UNIT * k * u(x);
    return CVec{s * d.x, s * d.y, s * d.z};
  };
  ex.div_p = [k, u](const Vec& x) { return -k * u(x); };
  spec.exact = ex;
  spec.f_tilde = [](const Vec&) { return cplx{0.0}; };
  return finish(std::move(spec));
}

inline ProblemSpec make_bessel_square(const ProblemParams& par) {
  const double k = par.k;
  if (!(k > 0) || k > 64.0 / 0.75)
    throw std::invalid_argument("bessel_square: k out of validated range");
  ProblemSpec spec;
  spec.name = "bessel_square";
  spec.dim = 2;
  spec.k = k;
  spec.domain.kind = DomainSpec::Kind::square;
  spec.domain.lo = {-0.5, -0.5, 0.0};
  spec.domain.hi = {0.5, 0.5, 0.0};
  const cplx C = std::exp(I_UNIT * k) / (k * cplx(bessel_j(0, k), bessel_j(1, k)));
  ExactSolution ex;
  ex.k = k;
  ex.u = [k, C](const Vec& x) {
    double r = std::hypot(x.x, x.y);
    return std::cos(k * r) / k - C * bessel_j(0, k * r);
  };
  ex.grad_u = [k, C](const Vec& x) {
    double r = std::hypot(x.x, x.y);
    // u_r / r stays finite as r -> 0 (both pieces are even in r).
    cplx ur_over_r = -k * sinc(k * r) + C * k * k * j1_over_x(k * r);
    return CVec{ur_over_r * x.x, ur_over_r * x.y, 0.0};
  };
  auto u_fn = ex.u;
  ex.div_p = [k, u_fn](const Vec& x) {
    double r = std::hypot(x.x, x.y);
    return -sinc(k * r) - k * u_fn(x);  // laplace(u)/k = (-f - k^2 u)/k with f = sin(kr)/r
  };
  spec.exact = ex;
  spec.f_tilde = [k](const Vec& x) {
    double r = std::hypot(x.x, x.y);
    return cplx{sinc(k * r), 0.0};  // f/k = sin(kr)/(kr)
  };
  return finish(std::move(spec));
}

inline ProblemSpec make_lshape_singular(const ProblemParams& par) {
  const double k = par.k, alpha = par.alpha;
  if (!(k > 0) || k * std::sqrt(2.0) > 64.0)
    throw std::invalid_argument("lshape_singular: k out of validated range");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("lshape_singular: alpha out of validated range (0, 2)");
  ProblemSpec spec;
  spec.name = "lshape_singular";
  spec.dim = 2;
  spec.k = k;
  spec.domain.kind = DomainSpec::Kind::l_shape;
  auto polar = [](const Vec& x, double& r, double& th) {
    r = std::hypot(x.x, x.y);
    th = std::atan2(x.y, x.x);
    if (th < 0) th += 2.0 * M_PI;
  };
  ExactSolution ex;
  ex.k = k;
  ex.u = [k, alpha, polar](const Vec& x) {
    double r, th;
    polar(x, r, th);
    return cplx{bessel_j(alpha, k * r) * std::cos(alpha * th), 0.0};
  };
  ex.grad_u = [k, alpha, polar](const Vec& x) {
    double r, th;
    polar(x, r, th);
    if (r == 0.0) return CVec{};
    double ur = k * bessel_j_prime(alpha, k * r) * std::cos(alpha * th);
    double ut_r = -alpha * bessel_j(alpha, k * r) * std::sin(alpha * th) / r;
    double c = std::cos(th), s = std::sin(th);
    return CVec{cplx{ur * c - ut_r * s, 0.0}, cplx{ur * s + ut_r * c, 0.0}, 0.0};
  };
  auto u_fn = ex.u;
  ex.div_p = [k, u_fn](const Vec& x) { return -k * u_fn(x); };  // f = 0
  spec.exact = ex;
  spec.f_tilde = [](const Vec&) { return cplx{0.0}; };
  return finish(std::move(spec));
}

inline ProblemSpec make_cylinder_radiation(const ProblemParams& par) {
  const double k = par.k, a = par.a;
  const int n = par.mode;
  if (!(a > 0) || !(k * a >= 0.5) || 2.0 * k * a > 60.0)
    throw std::invalid_argument("cylinder_radiation: need 0.5 <= k a and 2 k a <= 60");
  if (n < 0) throw std::invalid_argument("cylinder_radiation: mode must be >= 0");
  ProblemSpec spec;
  spec.name = "cylinder_radiation";
  spec.dim = 2;
  spec.k = k;
  spec.domain.kind = DomainSpec::Kind::annulus;
  spec.domain.a = a;
  spec.domain.segments = par.segments;
  const cplx denom = hankel1(n, k * a);
  ExactSolution ex;
  ex.k = k;
  ex.u = [k, n, denom](const Vec& x) {
    double r = std::hypot(x.x, x.y), th = std::atan2(x.y, x.x);
    return hankel1(n, k * r) * std::cos(n * th) / denom;
  };
  ex.grad_u = [k, n, denom](const Vec& x) {
    double r = std::hypot(x.x, x.y), th = std::atan2(x.y, x.x);
    cplx ur = k * hankel1_prime(n, k * r) * std::cos(n * th) / denom;
    cplx ut_r = -double(n) * hankel1(n, k * r) * std::sin(n * th) / (denom * r);
    double c = std::cos(th), s = std::sin(th);
    return CVec{ur * c - ut_r * s, ur * s + ut_r * c, 0.0};
  };
  auto u_fn = ex.u;
  ex.div_p = [k, u_fn](const Vec& x) { return -k * u_fn(x); };  // f = 0
  spec.exact = ex;
  spec.f_tilde = [](const Vec&) { return cplx{0.0}; };
  return finish(std::move(spec));
}

inline ProblemSpec make_manufactured_poly(const ProblemParams& par) {
  const double k = par.k;
  const int deg = par.poly_degree, dim = par.poly_dim;
  if (!(k > 0)) throw std::invalid_argument("manufactured_poly: k must be positive");
  if (deg < 1 || deg > 4) throw std::invalid_argument("manufactured_poly: degree must be in [1, 4]");
  if (dim < 2 || dim > 3) throw std::invalid_argument("manufactured_poly: dim must be 2 or 3");
  ProblemSpec spec;
  spec.name = "manufactured_poly";
  spec.dim = dim;
  spec.k = k;
  spec.domain.kind = dim == 2 ? DomainSpec::Kind::unit_square : DomainSpec::Kind::cube;
  const cplx c0{0.3, -0.2};
  const CVec c{cplx{0.9, 0.4}, cplx{-0.7, 0.3}, dim == 3 ? cplx{0.5, -0.6} : cplx{0.0}};
  auto lin = [c0, c](const Vec& x) { return c0 + c.x * x.x + c.y * x.y + c.z * x.z; };
  auto powc = [](cplx b, int e) {
    cplx r{1.0};
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  ExactSolution ex;
  ex.k = k;
  ex.u = [lin, powc, deg](const Vec& x) { return powc(lin(x), deg); };
  ex.grad_u = [lin, powc, deg, c](const Vec& x) {
    cplx s = double(deg) * powc(lin(x), deg - 1);
    return CVec{s * c.x, s * c.y, s * c.z};
  };
  const cplx c_dot_c = c.x * c.x + c.y * c.y + c.z * c.z;
  auto u_fn = ex.u;
  ex.div_p = [lin, powc, deg, c_dot_c, k](const Vec& x) {
    if (deg < 2) return cplx{0.0};
    return double(deg) * double(deg - 1) * powc(lin(x), deg - 2) * c_dot_c / k;
  };
  spec.exact = ex;
  auto div_p = ex.div_p;
  spec.f_tilde = [div_p, k, u_fn](const Vec& x) { return -div_p(x) - k * u_fn(x); };
  return finish(std::move(spec));
}

}  // namespace detail

inline ProblemSpec make_problem(const std::string& name, const ProblemParams& params = {}) {
  if (name == "plane_wave_2d") return detail::make_plane_wave(2, params);
  if (name == "plane_wave_3d") return detail::make_plane_wave(3, params);
  if (name == "bessel_square") return detail::make_bessel_square(params);
  if (name == "lshape_singular") return detail::make_lshape_singular(params);
  if (name == "cylinder_radiation") return detail::make_cylinder_radiation(params);
  if (name == "manufactured_poly") return detail::make_manufactured_poly(params);
  throw std::invalid_argument("make_problem: unknown problem '" + name + "'");
}

}  // namespace dls
