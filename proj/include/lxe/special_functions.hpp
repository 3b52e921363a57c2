#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lxe::special {

/// Lanczos approximation (g = 7, nine terms) with reflection below 1/2.
inline double gamma(double x) {
  static constexpr double g = 7.0;
  static constexpr double c[9] = {0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                                  771.32342877765313,      -176.61502916214059,   12.507343278686905,
                                  -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  x -= 1.0;
  double a = c[0];
  const double t = x + g + 0.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

/// Gauss series for 2F1(a, b; c; z), |z| <= 1/2 or so.
inline double hyp2f1_series(double a, double b, double c, double z) {
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 2000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw std::runtime_error("hyp2f1_series: no convergence");
}

/// 2F1(1/3, 2/3; 4/3; z) on [0, 1]. For z > 1/2 the 1 - z transformation is
/// used; both terms close in elementary form except 2F1(1, 2/3; 4/3; 1 - z).
inline double hyp2f1_third(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("hyp2f1_third: argument must lie in [0, 1]");
  if (z <= 0.5) return hyp2f1_series(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, z);
  const double a = gamma(4.0 / 3.0) * gamma(1.0 / 3.0) / gamma(2.0 / 3.0);
  const double w = 1.0 - z;
  return a * std::pow(z, -1.0 / 3.0) - std::cbrt(w) * hyp2f1_series(1.0, 2.0 / 3.0, 4.0 / 3.0, w);
}

inline double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    if (std::abs(an - bn) <= 1e-16 * an) return an;
    a = an;
    b = bn;
  }
  return 0.5 * (a + b);
}

/// Complete elliptic integral of the first kind in the parameter convention,
/// K(m) = int_0^1 dt / sqrt((1 - t^2)(1 - m t^2)).
inline double ellipk(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw std::domain_error("ellipk: parameter must lie in [0, 1)");
  return std::numbers::pi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

/// K(1 - m) computed from m, accurate when m is tiny.
inline double ellipk_complement(double m) {
  if (!(m > 0.0 && m <= 1.0)) throw std::domain_error("ellipk_complement: parameter must lie in (0, 1]");
  return std::numbers::pi / (2.0 * agm(1.0, std::sqrt(m)));
}

/// Carlson's symmetric integral R_F(x, y, z) by duplication; at most one
/// argument may be zero.
inline double carlson_rf(double x, double y, double z) {
  if (x < 0 || y < 0 || z < 0 || (x == 0) + (y == 0) + (z == 0) > 1)
    throw std::domain_error("carlson_rf: arguments must be non-negative with at most one zero");
  for (int i = 0; i < 200; ++i) {
    const double mu = (x + y + z) / 3.0;
    const double dx = 1.0 - x / mu, dy = 1.0 - y / mu, dz = 1.0 - z / mu;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1e-4) {
      const double e2 = dx * dy - dz * dz, e3 = dx * dy * dz;
      return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(mu);
    }
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
  }
  throw std::runtime_error("carlson_rf: no convergence");
}

/// Bisection for an increasing or decreasing f with a sign change on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-14, int max_iter = 300) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::runtime_error("bisect: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "], f = " + std::to_string(flo) + ", " + std::to_string(fhi));
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= xtol) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Incomplete integral F(phi | m) = int_0^phi d theta / sqrt(1 - m sin^2 theta), phi in [0, pi/2].
inline double ellipf(double phi, double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw std::domain_error("ellipf: parameter must lie in [0, 1]");
  if (!(phi >= 0.0 && phi <= std::numbers::pi / 2)) throw std::domain_error("ellipf: phi must lie in [0, pi/2]");
  if (phi == 0.0) return 0.0;
  const double s = std::sin(phi), c = std::cos(phi);
  return s * carlson_rf(c * c, 1.0 - m * s * s, 1.0);
}

/// F(pi/2 - psi | 1 - mc), accurate when both psi and mc are tiny.
inline double ellipf_from_corner(double psi, double mc) {
  if (!(mc > 0.0 && mc <= 1.0)) throw std::domain_error("ellipf_from_corner: mc must lie in (0, 1]");
  if (!(psi >= 0.0 && psi <= std::numbers::pi / 2)) throw std::domain_error("ellipf_from_corner: psi out of range");
  const double s = std::sin(psi), c = std::cos(psi);
  return c * carlson_rf(s * s, s * s + mc * c * c, 1.0);
}

}  // namespace lxe::special
