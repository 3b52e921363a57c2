#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <stdexcept>
#include <vector>

#include "lxe/circuit.hpp"
#include "lxe/rng.hpp"

namespace lxe {

/// Union-find with path compression and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t a) {
    std::size_t root = a;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[a] != root) {
      const std::size_t next = parent_[a];
      parent_[a] = root;
      a = next;
    }
    return root;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }
  bool connected(std::size_t a, std::size_t b) { return find(a) == find(b); }
  std::size_t size_of(std::size_t a) { return size_[find(a)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Bonds on the (T+1) x L site lattice. Site (t, i) sits at time row t.
/// Horizontal bond (t, i) joins (t, i)-(t, i+1 mod L) and is present when ZZ
/// is measured on bond i at step t. Vertical bond (t, i) joins (t, i)-(t+1, i)
/// and is present when X is not measured on site i at step t.
struct BondConfiguration {
  std::size_t L = 0;
  std::size_t T = 0;
  Boundary boundary = Boundary::Open;
  std::vector<std::uint8_t> h;  // T x n_bonds
  std::vector<std::uint8_t> v;  // T x L

  BondConfiguration() = default;
  BondConfiguration(std::size_t L_, std::size_t T_, Boundary b)
      : L(L_), T(T_), boundary(b), h(T_ * bonds_per_row(), 0), v(T_ * L_, 0) {}

  std::size_t bonds_per_row() const { return boundary == Boundary::Open ? L - 1 : L; }
  std::uint8_t& h_at(std::size_t t, std::size_t i) { return h[t * bonds_per_row() + i]; }
  std::uint8_t& v_at(std::size_t t, std::size_t i) { return v[t * L + i]; }
  std::uint8_t h_at(std::size_t t, std::size_t i) const { return h[t * bonds_per_row() + i]; }
  std::uint8_t v_at(std::size_t t, std::size_t i) const { return v[t * L + i]; }
  std::size_t site(std::size_t t, std::size_t i) const { return t * L + i; }
};

inline BondConfiguration circuit_to_bonds(const CircuitRealization& c) {
  if (c.model != Model::ZzX) throw std::invalid_argument("circuit_to_bonds: only the ZZ/X model maps to bonds");
  BondConfiguration b(c.n_sites, c.n_steps, c.boundary);
  std::fill(b.v.begin(), b.v.end(), 1);
  for (const auto& e : c.events) {
    switch (e.kind) {
      case EventKind::MeasureZZ: b.h_at(e.step, e.site) = 1; break;
      case EventKind::MeasureX: b.v_at(e.step, e.site) = 0; break;
      case EventKind::NoiseSlot: break;
      default: throw std::invalid_argument("circuit_to_bonds: circuit contains events outside the ZZ/X model");
    }
  }
  return b;
}

/// Whether the cluster of the r central sites of row 0 (joined beforehand)
/// reaches row T.
inline bool spans(const BondConfiguration& b, std::size_t r) {
  if (r < 1 || r > b.L) throw std::invalid_argument("spans: r must lie in [1, L]");
  if (b.boundary == Boundary::Periodic && r != b.L)
    throw std::invalid_argument("spans: periodic lattices use the full bottom row (r = L)");
  const std::size_t L = b.L;
  DisjointSets ds((b.T + 1) * L);
  const std::size_t start = (L - r) / 2;
  for (std::size_t i = start + 1; i < start + r; ++i) ds.unite(b.site(0, start), b.site(0, i));
  const std::size_t nb = b.bonds_per_row();
  for (std::size_t t = 0; t < b.T; ++t) {
    for (std::size_t i = 0; i < nb; ++i)
      if (b.h_at(t, i)) ds.unite(b.site(t, i), b.site(t, (i + 1) % L));
    for (std::size_t i = 0; i < L; ++i)
      if (b.v_at(t, i)) ds.unite(b.site(t, i), b.site(t + 1, i));
  }
  const std::size_t seed_root = ds.find(b.site(0, start));
  for (std::size_t i = 0; i < L; ++i)
    if (ds.find(b.site(b.T, i)) == seed_root) return true;
  return false;
}

/// Every bond independently present with probability 1 - p. One uniform per
/// bond regardless of p, so samples at different p are nested.
inline BondConfiguration random_bonds(std::size_t L, std::size_t T, double p, Boundary boundary, Rng& rng) {
  BondConfiguration b(L, T, boundary);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < b.bonds_per_row(); ++i) b.h_at(t, i) = u01(rng) < 1.0 - p;
    for (std::size_t i = 0; i < L; ++i) b.v_at(t, i) = u01(rng) < 1.0 - p;
  }
  return b;
}

struct CrossingEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

inline CrossingEstimate crossing_probability_mc(std::size_t L, std::size_t T, double p, std::size_t r,
                                                Boundary boundary, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("crossing_probability_mc: n_samples must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("crossing_probability_mc: p must lie in [0, 1]");
  std::size_t hits = 0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    Rng rng = make_stream(seed, Stream::Bonds, s);
    hits += spans(random_bonds(L, T, p, boundary, rng), r);
  }
  CrossingEstimate e;
  e.n_samples = n_samples;
  e.mean = double(hits) / double(n_samples);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / double(n_samples));
  return e;
}

}  // namespace lxe
