// Copyright (c) the dls authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dls/geometry.hpp"
#include "dls/quadrature.hpp"

namespace dls {

// Bessel functions on the argument range the solvers use (|x| <= 64): the
// ascending series in long double below x = 16, Schlaefli-type integral
// representations above. Absolute accuracy ~1e-12 for J, ~1e-10 for Y.

namespace detail {

inline constexpr double kBesselXMax = 64.0;
inline constexpr double kSeriesSwitch = 16.0;

// Composite Gauss-Legendre over [a, b].
template <typename F>
double integrate_panels(F&& f, double a, double b, int panels, int order) {
  static thread_local std::vector<double> x, w;
  static thread_local int cached_order = -1;
  if (cached_order != order) {
    gauss_legendre_01(order, x, w);
    cached_order = order;
  }
  const double len = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * len, s = 0.0;
    for (int q = 0; q < order; ++q) s += w[q] * f(lo + x[q] * len);
    total += s * len;
  }
  return total;
}

inline long double bessel_j_series(long double nu, long double x) {
  if (x == 0.0L) return nu == 0.0L ? 1.0L : 0.0L;
  const long double q = 0.25L * x * x;
  long double term = std::exp(nu * std::log(0.5L * x) - std::lgamma(nu + 1.0L));
  long double sum = term;
  for (int m = 1; m <= 400; ++m) {
    term *= -q / (m * (m + nu));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-300L) break;
  }
  return sum;
}

// A&S 9.1.11 ascending series, n = 0 or 1.
inline long double bessel_y_series(int n, long double x) {
  const long double half = 0.5L * x, q = half * half;
  const long double jn = bessel_j_series(static_cast<long double>(n), x);
  long double result = (2.0L / M_PIl) * std::log(half) * jn;
  if (n == 1) result -= (1.0L / M_PIl) / half;  // finite sum, single term
  // psi(k+1) + psi(n+k+1) built incrementally from psi(1) = -gamma.
  const long double gamma = 0.57721566490153286060651209008240243L;
  long double psi_a = -gamma, psi_b = -gamma;
  for (int j = 1; j <= n; ++j) psi_b += 1.0L / j;
  long double fac = 1.0L;  // (x/2)^n / (k! (n+k)!) * (-q)^k, k = 0
  for (int j = 1; j <= n; ++j) fac /= j;
  fac *= std::pow(half, n);
  long double sum = (psi_a + psi_b) * fac;
  for (int k = 1; k <= 400; ++k) {
    fac *= -q / (static_cast<long double>(k) * (n + k));
    psi_a += 1.0L / k;
    psi_b += 1.0L / (n + k);
    long double term = (psi_a + psi_b) * fac;
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-300L) break;
  }
  result -= sum / M_PIl;
  return result;
}

inline double tail_cutoff(double x, double nu_abs) {
  double t = std::asinh((60.0 + 10.0 * nu_abs) / x);
  return t + 1.0;
}

inline double bessel_j_integral(double nu, double x) {
  double main = integrate_panels([&](double th) { return std::cos(nu * th - x * std::sin(th)); },
                                 0.0, M_PI, 16, 24) /
                M_PI;
  double s = std::sin(nu * M_PI);
  if (s != 0.0) {
    double T = tail_cutoff(x, std::abs(nu));
    double tail = integrate_panels(
        [&](double t) { return std::exp(-nu * t - x * std::sinh(t)); }, 0.0, T, 16, 16);
    main -= s / M_PI * tail;
  }
  return main;
}

inline double bessel_y_integral(int n, double x) {
  double main = integrate_panels([&](double th) { return std::sin(x * std::sin(th) - n * th); },
                                 0.0, M_PI, 16, 24) /
                M_PI;
  double T = tail_cutoff(x, n);
  double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  double tail = integrate_panels(
      [&](double t) { return (std::exp(n * t) + sgn * std::exp(-n * t)) * std::exp(-x * std::sinh(t)); },
      0.0, T, 16, 16);
  return main - tail / M_PI;
}

}  // namespace detail

// J_nu(x) for real order nu > -1 and 0 <= x <= 64.
inline double bessel_j(double nu, double x) {
  if (!(nu > -1.0)) throw std::domain_error("bessel_j: order must be > -1");
  if (!(x >= 0.0) || x > detail::kBesselXMax)
    throw std::domain_error("bessel_j: argument out of range [0, 64]");
  if (x < detail::kSeriesSwitch) return static_cast<double>(detail::bessel_j_series(nu, x));
  return detail::bessel_j_integral(nu, x);
}

// Y_n(x) for integer order n >= 0 and 0 < x <= 64. Y0, Y1 come from the
// ascending series (integral representation for large x); higher orders by
// the forward recurrence, which is stable in this direction.
inline double bessel_y(int n, double x) {
  if (n < 0) throw std::domain_error("bessel_y: order must be >= 0");
  if (!(x > 0.0)) throw std::domain_error("bessel_y: argument must be positive");
  if (x > detail::kBesselXMax) throw std::domain_error("bessel_y: argument out of range (0, 64]");
  double y0, y1;
  if (x < detail::kSeriesSwitch) {
    y0 = static_cast<double>(detail::bessel_y_series(0, x));
    y1 = static_cast<double>(detail::bessel_y_series(1, x));
  } else {
    y0 = detail::bessel_y_integral(0, x);
    y1 = detail::bessel_y_integral(1, x);
  }
  if (n == 0) return y0;
  double prev = y0, cur = y1;
  for (int m = 1; m < n; ++m) {
    double next = (2.0 * m / x) * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// H^(1)_n(x) = J_n(x) + i Y_n(x).
inline cplx hankel1(int n, double x) { return {bessel_j(n, x), bessel_y(n, x)}; }

// J'_nu via the two-sided recurrence identity; J_{nu-1} with nu - 1 in (-1, 0)
// is evaluated by the same series branch.
inline double bessel_j_prime(double nu, double x) {
  if (nu == 0.0) return -bessel_j(1.0, x);
  return 0.5 * (bessel_j(nu - 1.0, x) - bessel_j(nu + 1.0, x));
}

inline cplx hankel1_prime(int n, double x) {
  if (n == 0) return -hankel1(1, x);
  return 0.5 * (hankel1(n - 1, x) - hankel1(n + 1, x));
}

}  // namespace dls
