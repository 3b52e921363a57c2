#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "lxe/special_functions.hpp"

namespace lxe::cft {

inline constexpr double kNu = 4.0 / 3.0;
inline constexpr double kDeltaObc = 1.0 / 3.0;
inline constexpr double kDeltaPbc = 5.0 / 48.0;
// Coulomb-gas coupling and background charge behind the two exponents above.
inline constexpr double kCoupling = 2.0 / 3.0;
inline constexpr double kBackground = 1.0 / 3.0;

/// 3 Gamma(2/3) / Gamma(1/3)^2
inline double cardy_coefficient() {
  const double g13 = special::gamma(1.0 / 3.0);
  return 3.0 * special::gamma(2.0 / 3.0) / (g13 * g13);
}

namespace detail {

// C(eta) given both eta and 1 - eta; the smaller of the two carries the precision.
inline double crossing(double eta, double one_minus_eta) {
  const double c = cardy_coefficient();
  if (one_minus_eta <= 0.5) return c * std::cbrt(one_minus_eta) * special::hyp2f1_third(one_minus_eta);
  return 1.0 - c * std::cbrt(eta) * special::hyp2f1_third(eta);
}

}  // namespace detail

/// Crossing function of the cross-ratio, C(eta) = coef (1-eta)^{1/3} 2F1(1/3, 2/3; 4/3; 1-eta).
/// For eta < 1/2 the equivalent form 1 - C(1 - eta) is evaluated.
inline double crossing_function(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("crossing_function: eta must lie in [0, 1]");
  return detail::crossing(eta, 1.0 - eta);
}

namespace detail {

inline double ellipk_of_complement(double mc) { return std::numbers::pi / (2.0 * special::agm(1.0, std::sqrt(mc))); }

}  // namespace detail

/// 2K(m)/K(1-m) with m = 1/(1+e^-t); m and 1-m are formed separately so both
/// ends of the range keep full precision.
inline double aspect_ratio_of_logit(double t) {
  const double m = 1.0 / (1.0 + std::exp(-t));
  const double mc = 1.0 / (1.0 + std::exp(t));
  return 2.0 * detail::ellipk_of_complement(mc) / detail::ellipk_of_complement(m);
}

struct AspectSolution {
  double y = 0.0;  // pre-image of the rectangle corners
  double y_minus_1 = 0.0;
  double m = 0.0;   // 1 / y^2
  double mc = 0.0;  // 1 - m
  double k = 0.0;   // K(m)
  double residual = 0.0;
};

inline constexpr double kLogitRange = 700.0;
// Aspect ratios guaranteed to be inside the solver's range.
inline constexpr double kMinAspect = 0.005;
inline constexpr double kMaxAspect = 100.0;

/// Solves L/T = 2K(1/y^2)/K(1 - 1/y^2) for y > 1. Outside roughly
/// 0.002 < T/L < 110 a domain_error is thrown.
inline AspectSolution solve_aspect(double T_over_L) {
  if (!(T_over_L > 0.0) || !std::isfinite(T_over_L)) throw std::domain_error("solve_aspect: T/L must be positive");
  const double target = 1.0 / T_over_L;
  auto f = [&](double s) { return aspect_ratio_of_logit(s) - target; };
  if (f(-kLogitRange) > 0.0 || f(kLogitRange) < 0.0)
    throw std::domain_error("solve_aspect: T/L = " + std::to_string(T_over_L) + " outside the supported range");
  const double t = special::bisect(f, -kLogitRange, kLogitRange, 1e-13);
  AspectSolution a;
  a.m = 1.0 / (1.0 + std::exp(-t));
  a.mc = 1.0 / (1.0 + std::exp(t));
  const double sm = std::sqrt(a.m);
  a.y = 1.0 / sm;
  a.y_minus_1 = a.mc / ((1.0 + sm) * sm);
  a.k = detail::ellipk_of_complement(a.mc);
  a.residual = std::abs(aspect_ratio_of_logit(t) - target) / target;
  return a;
}

inline double solve_aspect_y(double T_over_L) { return solve_aspect(T_over_L).y; }

/// Real-axis branch of the map from the upper half plane to the rectangle
/// [-L/2, L/2] x [0, T]: w(z) = L/(2K(1/y^2)) int_0^z dt / sqrt((1-t^2)(1-t^2/y^2)).
inline double sc_map_w(double z, double y, double L) {
  if (!(y > 1.0)) throw std::domain_error("sc_map_w: y must exceed 1");
  if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("sc_map_w: z must lie in [0, 1]");
  const double m = 1.0 / (y * y);
  return L / (2.0 * special::ellipk(m)) * special::ellipf(std::asin(z), m);
}

/// Pre-image x in (0, 1] of the block edge at r/2, returned as 1 - x.
inline double block_preimage_gap(double r_over_L, const AspectSolution& a) {
  if (!(r_over_L > 0.0 && r_over_L <= 1.0)) throw std::domain_error("block_preimage: r/L must lie in (0, 1]");
  if (r_over_L == 1.0) return 0.0;
  // x = cos(psi); F(pi/2 - psi) falls from K to 0 as psi runs over (0, pi/2]
  const double target = r_over_L * a.k;
  auto f = [&](double u) { return special::ellipf_from_corner(std::exp(u), a.mc) - target; };
  const double lo = -kLogitRange, hi = std::log(std::numbers::pi / 2.0);
  if (f(lo) <= 0.0) return 0.0;
  const double psi = std::exp(special::bisect(f, lo, hi, 1e-14));
  const double h = std::sin(0.5 * psi);
  return 2.0 * h * h;
}

inline double block_preimage(double r_over_L, double y) {
  if (!(y > 1.0)) throw std::domain_error("block_preimage: y must exceed 1");
  AspectSolution a;
  a.m = 1.0 / (y * y);
  a.mc = (y - 1.0) * (y + 1.0) / (y * y);
  a.k = detail::ellipk_of_complement(a.mc);
  return 1.0 - block_preimage_gap(r_over_L, a);
}

/// Probability that the block of width r on the bottom edge of an L x T
/// rectangle connects to the top edge in critical percolation.
inline double cardy_chi_obc(double aspect, double r_over_L) {
  if (!(aspect > 0.0)) throw std::domain_error("cardy_chi_obc: aspect must be positive");
  if (!(r_over_L > 0.0 && r_over_L <= 1.0)) throw std::domain_error("cardy_chi_obc: r/L must lie in (0, 1]");
  const auto sol = solve_aspect(aspect);
  const double gap = block_preimage_gap(r_over_L, sol);
  // eta = ratio^2 with ratio = (y - x)/(y + x); 1 - ratio = 2x/(y + x)
  const double den = 2.0 + sol.y_minus_1 - gap;
  const double ratio = (sol.y_minus_1 + gap) / den;
  const double one_minus_ratio = 2.0 * (1.0 - gap) / den;
  return detail::crossing(ratio * ratio, std::min(1.0, one_minus_ratio * (1.0 + ratio)));
}

/// Leading small-block behaviour, coef (4 K(1/y^2) r / (y L))^{1/3}.
inline double chi_obc_small_r(double aspect, double r_over_L) {
  if (!(aspect > 0.0)) throw std::domain_error("chi_obc_small_r: aspect must be positive");
  if (!(r_over_L > 0.0 && r_over_L <= 1.0)) throw std::domain_error("chi_obc_small_r: r/L must lie in (0, 1]");
  const auto sol = solve_aspect(aspect);
  return cardy_coefficient() * std::cbrt(4.0 * sol.k * r_over_L / sol.y);
}

/// amplitude [2 cosh(2 pi T/L) - 2]^{-5/48}
inline double chi_pbc(double aspect, double amplitude) {
  if (!(aspect > 0.0)) throw std::domain_error("chi_pbc: aspect must be positive");
  return amplitude * std::pow(2.0 * std::cosh(2.0 * std::numbers::pi * aspect) - 2.0, -kDeltaPbc);
}

// ---------------------------------------------------------------------------
// Fits

struct SimPoint {
  double aspect = 0.0;  // lattice T/L
  double chi = 0.0;
  double std_error = 0.0;
};

struct ScaleFit {
  double time_scale = 1.0;
  double amplitude = 1.0;
  double rms = 0.0;   // unweighted root-mean-square residual
  double chi2 = 0.0;  // inverse-variance weighted sum of squares
  std::size_t n_points = 0;
};

namespace detail {

inline std::vector<double> weights_of(const std::vector<SimPoint>& pts) {
  bool all_positive = true;
  for (const auto& p : pts) all_positive = all_positive && p.std_error > 0.0;
  std::vector<double> w(pts.size(), 1.0);
  if (all_positive)
    for (std::size_t i = 0; i < pts.size(); ++i) w[i] = 1.0 / (pts[i].std_error * pts[i].std_error);
  return w;
}

template <class F>
double golden_min(F&& f, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline void check_points(const std::vector<SimPoint>& pts, const char* where) {
  if (pts.size() < 3) throw std::invalid_argument(std::string(where) + ": need at least 3 points");
  for (const auto& p : pts)
    if (!(p.aspect > 0.0) || !std::isfinite(p.chi) || p.std_error < 0.0)
      throw std::invalid_argument(std::string(where) + ": degenerate point");
}

}  // namespace detail

/// One-parameter fit of chi(aspect) = cardy_chi_obc(s * aspect, r/L).
inline ScaleFit fit_scale_obc(const std::vector<SimPoint>& pts, double r_over_L) {
  detail::check_points(pts, "fit_scale_obc");
  const auto w = detail::weights_of(pts);
  auto cost = [&](double log_s) {
    const double s = std::exp(log_s);
    double c = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = pts[i].chi - cardy_chi_obc(s * pts[i].aspect, r_over_L);
      c += w[i] * d * d;
    }
    return c;
  };
  double a_min = pts.front().aspect, a_max = a_min;
  for (const auto& p : pts) {
    a_min = std::min(a_min, p.aspect);
    a_max = std::max(a_max, p.aspect);
  }
  const double lo = std::max(std::log(0.02), std::log(kMinAspect / a_min));
  const double hi = std::min(std::log(50.0), std::log(kMaxAspect / a_max));
  if (!(lo < hi)) throw std::invalid_argument("fit_scale_obc: aspect ratios span too wide a range");
  const int n_grid = 80;
  int best = 0;
  double best_cost = cost(lo);
  for (int k = 1; k <= n_grid; ++k) {
    const double c = cost(lo + (hi - lo) * k / n_grid);
    if (c < best_cost) { best_cost = c; best = k; }
  }
  const double step = (hi - lo) / n_grid;
  const double a = lo + step * std::max(0, best - 1), b = lo + step * std::min(n_grid, best + 1);
  const double log_s = detail::golden_min(cost, a, b, 1e-12);
  ScaleFit fit;
  fit.time_scale = std::exp(log_s);
  fit.n_points = pts.size();
  fit.chi2 = cost(log_s);
  double ss = 0.0;
  for (const auto& p : pts) {
    const double d = p.chi - cardy_chi_obc(fit.time_scale * p.aspect, r_over_L);
    ss += d * d;
  }
  fit.rms = std::sqrt(ss / double(pts.size()));
  return fit;
}

/// Amplitude of chi_pbc at a given time scale, closed-form weighted least squares.
inline ScaleFit fit_amplitude_pbc(const std::vector<SimPoint>& pts, double time_scale) {
  detail::check_points(pts, "fit_amplitude_pbc");
  if (!(time_scale > 0.0)) throw std::invalid_argument("fit_amplitude_pbc: time scale must be positive");
  const auto w = detail::weights_of(pts);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double g = chi_pbc(time_scale * pts[i].aspect, 1.0);
    num += w[i] * pts[i].chi * g;
    den += w[i] * g * g;
  }
  ScaleFit fit;
  fit.time_scale = time_scale;
  fit.amplitude = num / den;
  fit.n_points = pts.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = pts[i].chi - chi_pbc(time_scale * pts[i].aspect, fit.amplitude);
    ss += d * d;
    fit.chi2 += w[i] * d * d;
  }
  fit.rms = std::sqrt(ss / double(pts.size()));
  return fit;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
};

/// Weighted least squares y = intercept + slope * x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two matching points");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = (sw * sxy - sx * sy) / det;
  f.intercept = (sxx * sy - sx * sxy) / det;
  f.slope_error = std::sqrt(sw / det);
  return f;
}

/// Power law y ~ x^slope from points with standard errors (log-log, delta-method weights).
inline LineFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& y_err) {
  std::vector<double> lx, ly, w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("fit_power_law: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    w.push_back(y_err[i] > 0.0 ? (y[i] / y_err[i]) * (y[i] / y_err[i]) : 1.0);
  }
  return fit_line(lx, ly, w);
}

struct ExponentFit {
  double amplitude = 0.0;
  double delta = 0.0;
  double delta_error = 0.0;
};

/// Fits chi = A [2 cosh(2 pi s aspect) - 2]^{-Delta} for (A, Delta) at fixed s.
inline ExponentFit fit_pbc_exponent(const std::vector<SimPoint>& pts, double time_scale) {
  detail::check_points(pts, "fit_pbc_exponent");
  std::vector<double> x, y, err;
  for (const auto& p : pts) {
    x.push_back(2.0 * std::cosh(2.0 * std::numbers::pi * time_scale * p.aspect) - 2.0);
    y.push_back(p.chi);
    err.push_back(p.std_error);
  }
  const auto f = fit_power_law(x, y, err);
  return {std::exp(f.intercept), -f.slope, f.slope_error};
}

}  // namespace lxe::cft
