#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "lxe/models.hpp"

using namespace lxe;

namespace {

EnsembleParams zzx(std::size_t L, std::size_t T, double p, Boundary b = Boundary::Open) {
  EnsembleParams e;
  e.model = Model::ZzX;
  e.L = L;
  e.T = T;
  e.p = p;
  e.boundary = b;
  return e;
}

void expect_layers_disjoint(const CircuitRealization& c) {
  std::map<std::uint32_t, std::set<std::size_t>> used;
  for (const auto& e : c.events) {
    std::size_t q[2];
    const std::size_t n = event_qubits(e, c.n_sites, q);
    for (std::size_t k = 0; k < n; ++k) EXPECT_TRUE(used[e.layer].insert(q[k]).second) << "layer " << e.layer;
  }
}

}  // namespace

TEST(Circuits, ZzxExtremes) {
  const auto c0 = build_zzx(zzx(4, 2, 0.0), 5);
  EXPECT_EQ(c0.events.size(), 6u);
  EXPECT_EQ(c0.count(EventKind::MeasureZZ), 6u);
  const auto c1 = build_zzx(zzx(4, 2, 1.0), 5);
  EXPECT_EQ(c1.events.size(), 8u);
  EXPECT_EQ(c1.count(EventKind::MeasureX), 8u);
  const auto cp = build_zzx(zzx(4, 2, 0.0, Boundary::Periodic), 5);
  EXPECT_EQ(cp.count(EventKind::MeasureZZ), 8u);
  expect_layers_disjoint(cp);
}

TEST(Circuits, ZzxXCountStatistics) {
  const auto params = zzx(64, 64, 0.5);
  double sum = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) sum += double(build_zzx(params, s).count(EventKind::MeasureX));
  const double n = 64.0 * 64.0;
  const double sigma = std::sqrt(n * 0.25 / seeds);
  EXPECT_NEAR(sum / seeds, 0.5 * n, 3 * sigma);
}

TEST(Circuits, RebuildIsIdentical) {
  auto params = zzx(16, 16, 0.4);
  params.noise_rate = 0.05;
  params.scramble_depth = 4;
  EXPECT_EQ(build_zzx(params, 77).hash(), build_zzx(params, 77).hash());
  EXPECT_EQ(build_zzx(params, 77).events, build_zzx(params, 77).events);
  EXPECT_NE(build_zzx(params, 77).hash(), build_zzx(params, 78).hash());
  expect_layers_disjoint(build_zzx(params, 77));
}

TEST(Circuits, NoiseSlotsOnlyWithNoise) {
  auto params = zzx(16, 16, 0.4);
  EXPECT_EQ(build_zzx(params, 1).count(EventKind::NoiseSlot), 0u);
  params.noise_rate = 0.1;
  const auto c = build_zzx(params, 1);
  EXPECT_GT(c.count(EventKind::NoiseSlot), 0u);
  for (const auto& e : c.events)
    if (e.kind == EventKind::NoiseSlot) { EXPECT_FALSE(e.recordable()); }
  // measurement structure is untouched by the noise placement
  auto clean = params;
  clean.noise_rate = 0.0;
  std::vector<Event> a, b;
  for (auto e : c.events) if (e.kind != EventKind::NoiseSlot) a.push_back({e.kind, e.site, e.step, 0, 0});
  for (auto e : build_zzx(clean, 1).events) b.push_back({e.kind, e.site, e.step, 0, 0});
  EXPECT_EQ(a, b);
}

TEST(Circuits, ZzxNestedAcrossP) {
  const auto lo = build_zzx(zzx(16, 16, 0.3), 9);
  const auto hi = build_zzx(zzx(16, 16, 0.6), 9);
  std::set<std::tuple<int, std::uint32_t, std::uint32_t>> lo_set, hi_set;
  for (auto& e : lo.events) lo_set.insert({int(e.kind), e.site, e.step});
  for (auto& e : hi.events) hi_set.insert({int(e.kind), e.site, e.step});
  for (auto& k : hi_set)
    if (std::get<0>(k) == int(EventKind::MeasureZZ)) { EXPECT_TRUE(lo_set.count(k)); }
  for (auto& k : lo_set)
    if (std::get<0>(k) == int(EventKind::MeasureX)) { EXPECT_TRUE(hi_set.count(k)); }
}

TEST(Circuits, HybridExtremes) {
  EnsembleParams e;
  e.model = Model::Hybrid;
  e.L = 8;
  e.T = 6;
  e.q = 1.0;
  auto c = build_hybrid(e, 3);
  for (auto& ev : c.events) EXPECT_EQ(ev.kind, EventKind::Unitary);
  EXPECT_EQ(c.events.size(), 3u * 4 + 3u * 3);
  e.q = 0.0;
  e.p = 0.0;
  c = build_hybrid(e, 3);
  for (auto& ev : c.events) EXPECT_EQ(ev.kind, EventKind::MeasureZZ);
  e.p = 1.0;
  c = build_hybrid(e, 3);
  std::size_t right = 0;
  for (auto& ev : c.events) {
    EXPECT_EQ(ev.kind, EventKind::MeasureX);
    right += ev.site == 7;
  }
  EXPECT_EQ(right, 3u);
  expect_layers_disjoint(c);
  e.boundary = Boundary::Periodic;
  EXPECT_THROW(build_hybrid(e, 3), std::invalid_argument);
}

TEST(Circuits, HybridBrickFrequencies) {
  EnsembleParams e;
  e.model = Model::Hybrid;
  e.L = 32;
  e.T = 32;
  e.q = 0.5;
  e.p = 0.5;
  double counts[3] = {0, 0, 0};
  double bricks = 0;
  for (int s = 0; s < 40; ++s) {
    const auto c = build_hybrid(e, s);
    for (auto& ev : c.events) {
      if (ev.kind == EventKind::MeasureX && ev.site == 31) continue;  // idle-qubit extra
      bricks += 1;
      counts[ev.kind == EventKind::Unitary ? 0 : ev.kind == EventKind::MeasureX ? 1 : 2] += 1;
    }
  }
  const double expect[3] = {0.5, 0.25, 0.25};
  for (int k = 0; k < 3; ++k)
    EXPECT_NEAR(counts[k] / bricks, expect[k], 3 * std::sqrt(expect[k] * (1 - expect[k]) / bricks));
}

TEST(Circuits, HybridGatesAreSymmetric) {
  EnsembleParams e;
  e.model = Model::Hybrid;
  e.L = 16;
  e.T = 16;
  e.q = 0.7;
  const auto c = build_hybrid(e, 4);
  const auto& grp = TwoQubitCliffords::instance();
  for (auto& ev : c.events)
    if (ev.kind == EventKind::Unitary) { EXPECT_TRUE(grp.is_symmetric(ev.gate_id)); }
}

TEST(Circuits, ZizxxKinds) {
  EnsembleParams e;
  e.model = Model::ZizXx;
  e.boundary = Boundary::Periodic;
  e.L = 8;
  e.T = 4;
  e.p = 0.0;
  e.r_xx = 1.0;
  auto c = build_zizxx(e, 2);
  for (auto& ev : c.events) EXPECT_TRUE(is_z_type(ev.kind) || ev.kind == EventKind::MeasureXX);
  EXPECT_EQ(c.count(EventKind::MeasureZZ), 32u);
  EXPECT_EQ(c.count(EventKind::MeasureXX), 32u);
  EXPECT_EQ(c.count(EventKind::MeasureZIZ), 0u);
  expect_layers_disjoint(c);
  e.r_xx = 0.0;
  c = build_zizxx(e, 2);
  EXPECT_EQ(c.count(EventKind::MeasureZIZ), 32u);
  EXPECT_EQ(c.count(EventKind::MeasureXX), 0u);
  expect_layers_disjoint(c);
  e.boundary = Boundary::Open;
  EXPECT_THROW(build_zizxx(e, 2), std::invalid_argument);
}

TEST(Circuits, ParamValidation) {
  auto e = zzx(5, 4, 0.5);
  EXPECT_THROW(e.validate(), std::invalid_argument);
  e = zzx(4, 4, 1.5);
  EXPECT_THROW(e.validate(), std::invalid_argument);
  e = zzx(4, 4, 0.5);
  e.r_ghz = 3;
  EXPECT_THROW(e.validate(), std::invalid_argument);
  e.r_ghz = 6;
  EXPECT_THROW(e.validate(), std::invalid_argument);
}

TEST(InitialStates, Examples) {
  auto g = initial_state(StateKind::GhzMinus, 2).generators();
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].to_string(), "+ZZ");
  EXPECT_EQ(g[1].to_string(), "-XX");
  g = initial_state(StateKind::PsiPlus, 4, 2).generators();
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[0].to_string(), "+XIII");
  EXPECT_EQ(g[1].to_string(), "+IZZI");
  EXPECT_EQ(g[2].to_string(), "+IXXI");
  EXPECT_EQ(g[3].to_string(), "+IIIX");
  for (std::size_t L : {2, 4, 8}) {
    EXPECT_EQ(initial_state(StateKind::GhzPlus, L).contains_up_to_sign(PauliOperator::all_x(L)), Membership::Plus);
    EXPECT_EQ(initial_state(StateKind::GhzMinus, L).contains_up_to_sign(PauliOperator::all_x(L)), Membership::Minus);
  }
  EXPECT_THROW(initial_state(StateKind::PsiPlus, 4, 3), std::invalid_argument);
  EXPECT_THROW(initial_state(StateKind::PsiPlus, 4, 6), std::invalid_argument);
}

TEST(Scramble, PreservesSymmetrySector) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t L = 2 * (1 + trial % 5);
    auto s = initial_state(trial % 2 ? StateKind::GhzMinus : StateKind::GhzPlus, L);
    const auto before = s.contains_up_to_sign(PauliOperator::all_x(L));
    scramble(s, L, rng);
    EXPECT_EQ(s.contains_up_to_sign(PauliOperator::all_x(L)), before);
    EXPECT_EQ(s.rank(), L);
  }
  auto s = initial_state(StateKind::GhzMinus, 8);
  const auto gens = s.generators();
  scramble(s, 0, rng);
  EXPECT_EQ(s.generators(), gens);
}

TEST(Leak, Examples) {
  const std::size_t L = 6;
  CircuitRealization id;
  id.n_sites = L;
  const auto imgs = scrambled_zz_images(id);
  EXPECT_FALSE(leak_check(imgs, L));

  const auto sx = CliffordAction::from_strings({"XI", "-YI", "IX", "-IY"});
  const std::size_t sites[2] = {0, 1};
  const auto img = conjugate(PauliOperator::parse("ZZ"), sx, sites);
  EXPECT_EQ(img.to_string(), "+YY");
  const std::vector<PauliOperator> one{img};
  EXPECT_TRUE(leak_check(one, 2));
}

TEST(Leak, IndependentOfGeneratingSet) {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t L = 8;
    const auto c = scrambler_circuit(L, L, Boundary::Open, rng);
    auto imgs = scrambled_zz_images(c);
    const bool a = leak_check(imgs, L);
    // replace generators by running products
    for (std::size_t i = 1; i < imgs.size(); ++i) imgs[i] = multiply(imgs[i], imgs[i - 1]);
    EXPECT_EQ(leak_check(imgs, L), a);
  }
}

TEST(Noise, SlotFlipsOnlySigns) {
  Rng rng(3);
  int flipped = 0;
  const int n = 4000;
  for (int t = 0; t < n; ++t) {
    auto s = StabilizerState::from_generators(1, {PauliOperator::parse("Z")});
    apply_noise_slot(s, 0, rng);
    flipped += s.contains_up_to_sign(PauliOperator::parse("Z")) == Membership::Minus;
  }
  EXPECT_NEAR(flipped, n / 2, 3 * std::sqrt(n * 0.25));
  auto plus = StabilizerState::from_generators(1, {PauliOperator::parse("X")});
  for (int t = 0; t < 10; ++t) apply_noise_slot(plus, 0, rng);
  EXPECT_EQ(plus.generators()[0].to_string(), "+X");
  auto g = initial_state(StateKind::GhzPlus, 4);
  for (int t = 0; t < 20; ++t) {
    apply_noise_slot(g, t % 4, rng);
    EXPECT_EQ(g.contains_up_to_sign(PauliOperator::all_x(4)), Membership::Plus);
  }
}
