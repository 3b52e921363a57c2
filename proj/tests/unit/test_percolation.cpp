#include <gtest/gtest.h>

#include <functional>

#include "lxe/models.hpp"
#include "lxe/percolation.hpp"

using namespace lxe;

namespace {

// Depth-first search over present bonds, written without union-find.
bool spans_by_search(const BondConfiguration& b, std::size_t r) {
  const std::size_t L = b.L;
  std::vector<char> seen((b.T + 1) * L, 0);
  std::vector<std::size_t> stack;
  const std::size_t start = (L - r) / 2;
  for (std::size_t i = start; i < start + r; ++i) {
    seen[i] = 1;
    stack.push_back(i);
  }
  auto push = [&](std::size_t s) {
    if (!seen[s]) { seen[s] = 1; stack.push_back(s); }
  };
  const std::size_t nb = b.bonds_per_row();
  while (!stack.empty()) {
    const std::size_t s = stack.back();
    stack.pop_back();
    const std::size_t t = s / L, i = s % L;
    if (t == b.T) return true;
    if (t < b.T && b.v_at(t, i)) push(s + L);
    if (t > 0 && b.v_at(t - 1, i)) push(s - L);
    if (t < b.T) {
      if (i < nb && b.h_at(t, i)) push(t * L + (i + 1) % L);
      const std::size_t left = (i + L - 1) % L;
      if ((i > 0 || b.boundary == Boundary::Periodic) && left < nb && b.h_at(t, left)) push(t * L + left);
    }
  }
  return false;
}

}  // namespace

TEST(DisjointSets, Basics) {
  DisjointSets ds(6);
  EXPECT_TRUE(ds.unite(0, 1));
  EXPECT_TRUE(ds.unite(2, 3));
  EXPECT_FALSE(ds.unite(1, 0));
  EXPECT_FALSE(ds.connected(1, 2));
  ds.unite(1, 3);
  EXPECT_TRUE(ds.connected(0, 2));
  EXPECT_EQ(ds.size_of(3), 4u);
}

TEST(Bonds, FromCircuitExtremes) {
  EnsembleParams e;
  e.L = 6;
  e.T = 4;
  e.p = 0.0;
  auto b = circuit_to_bonds(build_zzx(e, 1));
  for (auto v : b.h) EXPECT_EQ(v, 1);
  for (auto v : b.v) EXPECT_EQ(v, 1);
  EXPECT_TRUE(spans(b, 6));
  e.p = 1.0;
  b = circuit_to_bonds(build_zzx(e, 1));
  for (auto v : b.h) EXPECT_EQ(v, 0);
  for (auto v : b.v) EXPECT_EQ(v, 0);
  EXPECT_FALSE(spans(b, 6));
  e.model = Model::Hybrid;
  EXPECT_THROW(circuit_to_bonds(build_hybrid(e, 1)), std::invalid_argument);
}

TEST(Bonds, OccupationFraction) {
  EnsembleParams e;
  e.L = 64;
  e.T = 64;
  e.p = 0.5;
  double occ = 0, total = 0;
  for (int s = 0; s < 100; ++s) {
    const auto b = circuit_to_bonds(build_zzx(e, s));
    for (auto v : b.h) occ += v;
    for (auto v : b.v) occ += v;
    total += double(b.h.size() + b.v.size());
  }
  EXPECT_NEAR(occ / total, 0.5, 3 * std::sqrt(0.25 / total));
}

TEST(Spans, ExhaustiveAgainstPathSearch) {
  for (Boundary bc : {Boundary::Open, Boundary::Periodic}) {
    for (std::size_t L : {2, 3}) {
      for (std::size_t T : {1, 2}) {
        BondConfiguration b(L, T, bc);
        const std::size_t nh = b.h.size(), nv = b.v.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (nh + nv)); ++mask) {
          for (std::size_t k = 0; k < nh; ++k) b.h[k] = (mask >> k) & 1;
          for (std::size_t k = 0; k < nv; ++k) b.v[k] = (mask >> (nh + k)) & 1;
          for (std::size_t r = 1; r <= L; ++r) {
            if (bc == Boundary::Periodic && r != L) continue;
            ASSERT_EQ(spans(b, r), spans_by_search(b, r)) << mask;
          }
        }
      }
    }
  }
}

TEST(Spans, RandomAgainstPathSearch) {
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const Boundary bc = trial % 2 ? Boundary::Open : Boundary::Periodic;
    const std::size_t L = 2 + 2 * (trial % 6), T = 1 + trial % 9;
    const auto b = random_bonds(L, T, 0.5, bc, rng);
    const std::size_t r = bc == Boundary::Periodic ? L : 2 + 2 * ((trial / 3) % (L / 2));
    ASSERT_EQ(spans(b, r), spans_by_search(b, r));
  }
}

TEST(Spans, MonotoneUnderBondAddition) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto b = random_bonds(12, 12, 0.55, Boundary::Open, rng);
    bool prev = spans(b, 4);
    for (int add = 0; add < 40; ++add) {
      if (rng() & 1) b.h[rng() % b.h.size()] = 1; else b.v[rng() % b.v.size()] = 1;
      const bool now = spans(b, 4);
      EXPECT_TRUE(!prev || now);
      prev = now;
    }
  }
}

TEST(Spans, Validation) {
  BondConfiguration b(4, 2, Boundary::Periodic);
  EXPECT_THROW(spans(b, 2), std::invalid_argument);
  EXPECT_THROW(spans(b, 5), std::invalid_argument);
  BondConfiguration none(4, 1, Boundary::Open);
  EXPECT_FALSE(spans(none, 4));
}

TEST(CrossingMc, ExtremesAndMonotone) {
  EXPECT_EQ(crossing_probability_mc(16, 16, 0.0, 16, Boundary::Open, 100, 1).mean, 1.0);
  EXPECT_EQ(crossing_probability_mc(16, 16, 1.0, 16, Boundary::Open, 100, 1).mean, 0.0);
  double prev = 1.0;
  for (double p = 0.3; p <= 0.71; p += 0.05) {
    const double m = crossing_probability_mc(16, 16, p, 16, Boundary::Open, 400, 7).mean;
    EXPECT_LE(m, prev);
    prev = m;
  }
}
