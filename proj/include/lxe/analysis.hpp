#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lxe/rng.hpp"

namespace lxe {

struct CurvePoint {
  double x = 0.0;  // swept parameter (p, q, r_xx, ...)
  double chi = 0.0;
  double std_error = 0.0;
};

/// System size -> points sorted by x.
using Curves = std::map<int, std::vector<CurvePoint>>;

struct Crossing {
  int L1 = 0;
  int L2 = 0;
  double x_star = 0.0;
  double std_error = 0.0;
};

namespace detail {

inline void check_shared_grid(const Curves& curves) {
  if (curves.size() < 2) throw std::invalid_argument("find_crossings: need at least two system sizes");
  const auto& ref = curves.begin()->second;
  for (const auto& [L, pts] : curves) {
    if (pts.size() != ref.size())
      throw std::invalid_argument("find_crossings: size " + std::to_string(L) + " is on a different grid");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].x != ref[i].x)
        throw std::invalid_argument("find_crossings: size " + std::to_string(L) + " is on a different grid");
      if (i > 0 && !(pts[i].x > pts[i - 1].x))
        throw std::invalid_argument("find_crossings: grid must be strictly increasing");
    }
  }
}

inline double interpolate_zero(double x0, double d0, double x1, double d1) { return x0 + (x1 - x0) * d0 / (d0 - d1); }

}  // namespace detail

/// Sign changes of chi_{L1} - chi_{L2} along a shared grid, for every pair
/// L1 < L2, located by linear interpolation between neighbouring grid points.
/// A difference that is exactly zero at a grid point counts as a crossing
/// there. std_error comes from a parametric bootstrap of the two bracketing
/// differences (Gaussian, per-point standard errors) with a fixed seed.
inline std::vector<Crossing> find_crossings(const Curves& curves, int n_bootstrap = 400, std::uint64_t seed = 1) {
  detail::check_shared_grid(curves);
  std::vector<Crossing> out;
  std::uint64_t pair_index = 0;
  for (auto a = curves.begin(); a != curves.end(); ++a) {
    for (auto b = std::next(a); b != curves.end(); ++b, ++pair_index) {
      const auto& p1 = a->second;
      const auto& p2 = b->second;
      const std::size_t n = p1.size();
      std::vector<double> d(n), e(n);
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = p1[i].chi - p2[i].chi;
        e[i] = std::hypot(p1[i].std_error, p2[i].std_error);
      }
      Rng rng = make_stream(seed, Stream::Bootstrap, pair_index);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (d[i] == 0.0) {
          out.push_back({a->first, b->first, p1[i].x, 0.0});
          continue;
        }
        if (i + 1 == n || d[i + 1] == 0.0 || (d[i] > 0) == (d[i + 1] > 0)) continue;
        Crossing c{a->first, b->first, detail::interpolate_zero(p1[i].x, d[i], p1[i + 1].x, d[i + 1]), 0.0};
        if (n_bootstrap > 1 && (e[i] > 0 || e[i + 1] > 0)) {
          double s = 0.0, s2 = 0.0;
          int kept = 0;
          for (int k = 0; k < n_bootstrap; ++k) {
            const double d0 = d[i] + e[i] * gauss(rng);
            const double d1 = d[i + 1] + e[i + 1] * gauss(rng);
            if ((d0 > 0) == (d1 > 0) || d0 == d1) continue;
            const double x = detail::interpolate_zero(p1[i].x, d0, p1[i + 1].x, d1);
            s += x;
            s2 += x * x;
            ++kept;
          }
          if (kept > 1) {
            const double mean = s / kept;
            c.std_error = std::sqrt(std::max(0.0, (s2 - kept * mean * mean) / (kept - 1)));
          }
        }
        out.push_back(c);
      }
    }
  }
  return out;
}

/// Scaling-collapse quality at (p_c, nu). Every curve is mapped to
/// x = (p - p_c) L^{1/nu}. For each point of size L, the master curve is the
/// piecewise-linear interpolant through the points of all other sizes (pooled
/// and sorted by x, coincident abscissae averaged); points outside that
/// curve's x-range are skipped. Returns the mean squared deviation over the
/// points that were compared.
inline double collapse_residual(const Curves& curves, double p_c, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("collapse_residual: nu must be positive");
  if (curves.size() < 2) throw std::invalid_argument("collapse_residual: need at least two system sizes");
  for (const auto& [L, pts] : curves)
    if (pts.size() < 4 || L <= 0)
      throw std::invalid_argument("collapse_residual: size " + std::to_string(L) + " needs at least 4 points");

  struct Scaled {
    double x, chi;
  };
  std::map<int, std::vector<Scaled>> scaled;
  for (const auto& [L, pts] : curves) {
    const double f = std::pow(double(L), 1.0 / nu);
    for (const auto& p : pts) scaled[L].push_back({(p.x - p_c) * f, p.chi});
  }

  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [L, own] : scaled) {
    std::vector<Scaled> master;
    for (const auto& [L2, other] : scaled)
      if (L2 != L) master.insert(master.end(), other.begin(), other.end());
    std::sort(master.begin(), master.end(), [](const Scaled& u, const Scaled& v) { return u.x < v.x; });
    std::vector<Scaled> merged;
    for (std::size_t i = 0; i < master.size();) {
      std::size_t j = i;
      double acc = 0.0;
      while (j < master.size() && master[j].x == master[i].x) acc += master[j++].chi;
      merged.push_back({master[i].x, acc / double(j - i)});
      i = j;
    }
    for (const auto& pt : own) {
      if (merged.size() < 2 || pt.x < merged.front().x || pt.x > merged.back().x) continue;
      auto hi = std::lower_bound(merged.begin(), merged.end(), pt.x,
                                 [](const Scaled& s, double x) { return s.x < x; });
      double fit;
      if (hi->x == pt.x) {
        fit = hi->chi;
      } else {
        const auto lo = std::prev(hi);
        fit = lo->chi + (hi->chi - lo->chi) * (pt.x - lo->x) / (hi->x - lo->x);
      }
      sum += (pt.chi - fit) * (pt.chi - fit);
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("collapse_residual: rescaled curves do not overlap");
  return sum / double(count);
}

}  // namespace lxe
