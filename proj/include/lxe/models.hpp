#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lxe/circuit.hpp"
#include "lxe/clifford_group.hpp"
#include "lxe/gf2.hpp"
#include "lxe/pauli_rows.hpp"
#include "lxe/rng.hpp"
#include "lxe/stabilizer_state.hpp"

namespace lxe {

/// Layer schedule of the ZIZ-XX model, stored with every result it produces.
inline constexpr std::string_view kZizXxConvention =
    "per step: ZZ layer (each bond w.p. 1-p), ZIZ layer (each site i on (i,i+2) w.p. 1-r_xx), "
    "X layer (each site w.p. p), XX layer (each bond w.p. r_xx); independent draws per slot";

namespace detail {

/// Appends measurement/unitary events of one kind-layer, splitting them into
/// sub-layers so no qubit is used twice inside a layer.
class LayerPacker {
 public:
  LayerPacker(CircuitRealization& c) : c_(c) {}

  void flush(std::vector<Event>& pending) {
    if (pending.empty()) return;
    std::vector<std::vector<std::uint8_t>> used;
    std::vector<std::vector<Event>> sub;
    for (Event e : pending) {
      std::size_t qs[2];
      const std::size_t nq = event_qubits(e, c_.n_sites, qs);
      std::size_t s = 0;
      for (;; ++s) {
        if (s == used.size()) {
          used.emplace_back(c_.n_sites, 0);
          sub.emplace_back();
        }
        bool free = true;
        for (std::size_t k = 0; k < nq; ++k) free = free && !used[s][qs[k]];
        if (free) break;
      }
      for (std::size_t k = 0; k < nq; ++k) used[s][qs[k]] = 1;
      sub[s].push_back(e);
    }
    for (auto& layer : sub) {
      for (Event e : layer) {
        e.layer = static_cast<std::uint32_t>(c_.n_layers);
        c_.events.push_back(e);
      }
      ++c_.n_layers;
    }
    pending.clear();
  }

 private:
  CircuitRealization& c_;
};

inline void add_noise_layer(CircuitRealization& c, std::uint32_t step, double rate, Rng& rng) {
  if (rate <= 0.0) return;
  bool any = false;
  for (std::size_t i = 0; i < c.n_sites; ++i) {
    if (bernoulli(rng, rate)) {
      c.events.push_back({EventKind::NoiseSlot, static_cast<std::uint32_t>(i), step,
                          static_cast<std::uint32_t>(c.n_layers), 0});
      any = true;
    }
  }
  if (any) ++c.n_layers;
}

inline std::size_t n_bonds(std::size_t L, Boundary b) { return b == Boundary::Open ? L - 1 : L; }

/// Brickwork of symmetric two-qubit Cliffords; layer l starts at bond l % 2.
inline void add_scramble_layers(CircuitRealization& c, std::size_t depth, Boundary b, Rng& gates) {
  const std::size_t nb = n_bonds(c.n_sites, b);
  for (std::size_t l = 0; l < depth; ++l) {
    bool any = false;
    for (std::size_t i = l % 2; i < nb; i += 2) {
      c.events.push_back({EventKind::Unitary, static_cast<std::uint32_t>(i), 0,
                          static_cast<std::uint32_t>(c.n_layers), sample_symmetric_clifford_2q_id(gates)});
      any = true;
    }
    if (any) ++c.n_layers;
  }
}

inline CircuitRealization start(const EnsembleParams& params, std::uint64_t seed) {
  params.validate();
  CircuitRealization c;
  c.model = params.model;
  c.n_sites = params.L;
  c.n_steps = params.T;
  c.boundary = params.boundary;
  c.seed = seed;
  c.scramble_depth = params.scramble_depth;
  if (params.scramble_depth > 0) {
    Rng gates = make_stream(seed, Stream::Scrambler);
    add_scramble_layers(c, params.scramble_depth, params.boundary, gates);
  }
  return c;
}

}  // namespace detail

/// Measurement-only ZZ / X circuit: per step a layer of ZZ on every bond
/// (probability 1-p each) followed by a layer of X on every site (probability p).
/// One uniform is drawn per slot whatever p is, so circuits at different p
/// built from the same seed are nested.
inline CircuitRealization build_zzx(const EnsembleParams& params, std::uint64_t seed) {
  if (params.model != Model::ZzX) throw std::invalid_argument("build_zzx: model must be zzx");
  CircuitRealization c = detail::start(params, seed);
  Rng structure = make_stream(seed, Stream::Structure);
  Rng noise = make_stream(seed, Stream::NoisePlacement);
  detail::LayerPacker pack(c);
  const std::size_t L = params.L;
  const std::size_t nb = detail::n_bonds(L, params.boundary);
  std::vector<Event> pending;
  for (std::uint32_t t = 0; t < params.T; ++t) {
    for (std::size_t i = 0; i < nb; ++i)
      if (u01(structure) < 1.0 - params.p) pending.push_back({EventKind::MeasureZZ, std::uint32_t(i), t, 0, 0});
    pack.flush(pending);
    detail::add_noise_layer(c, t, params.noise_rate, noise);
    for (std::size_t i = 0; i < L; ++i)
      if (u01(structure) < params.p) pending.push_back({EventKind::MeasureX, std::uint32_t(i), t, 0, 0});
    pack.flush(pending);
    detail::add_noise_layer(c, t, params.noise_rate, noise);
  }
  return c;
}

/// ZZ / X circuit with an explicit placement: zz[t * n_bonds + i], x[t * L + i].
inline CircuitRealization build_zzx_pattern(std::size_t L, std::size_t T, Boundary boundary,
                                            const std::vector<bool>& zz, const std::vector<bool>& x) {
  EnsembleParams params;
  params.L = L;
  params.T = T;
  params.boundary = boundary;
  CircuitRealization c = detail::start(params, 0);
  const std::size_t nb = detail::n_bonds(L, boundary);
  if (zz.size() != T * nb || x.size() != T * L) throw std::invalid_argument("build_zzx_pattern: pattern size mismatch");
  detail::LayerPacker pack(c);
  std::vector<Event> pending;
  for (std::uint32_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < nb; ++i)
      if (zz[t * nb + i]) pending.push_back({EventKind::MeasureZZ, std::uint32_t(i), t, 0, 0});
    pack.flush(pending);
    for (std::size_t i = 0; i < L; ++i)
      if (x[t * L + i]) pending.push_back({EventKind::MeasureX, std::uint32_t(i), t, 0, 0});
    pack.flush(pending);
  }
  return c;
}

/// Brickwork with open boundaries. Each brick on (i, i+1) is a symmetric
/// unitary with probability q, else X on i with probability p, else ZZ.
/// In layers where the last qubit has no brick it is measured in X with
/// probability p(1-q).
inline CircuitRealization build_hybrid(const EnsembleParams& params, std::uint64_t seed) {
  if (params.model != Model::Hybrid) throw std::invalid_argument("build_hybrid: model must be hybrid");
  CircuitRealization c = detail::start(params, seed);
  Rng structure = make_stream(seed, Stream::Structure);
  Rng gates = make_stream(seed, Stream::Gates);
  Rng noise = make_stream(seed, Stream::NoisePlacement);
  const std::size_t L = params.L;
  for (std::uint32_t t = 0; t < params.T; ++t) {
    const std::uint32_t layer = static_cast<std::uint32_t>(c.n_layers);
    const std::size_t first = t % 2;
    std::size_t covered_to = 0;
    for (std::size_t i = first; i + 1 < L; i += 2) {
      const double u1 = u01(structure);
      const double u2 = u01(structure);
      const std::uint16_t gid = sample_symmetric_clifford_2q_id(gates);
      if (u1 < params.q)
        c.events.push_back({EventKind::Unitary, std::uint32_t(i), t, layer, gid});
      else if (u2 < params.p)
        c.events.push_back({EventKind::MeasureX, std::uint32_t(i), t, layer, 0});
      else
        c.events.push_back({EventKind::MeasureZZ, std::uint32_t(i), t, layer, 0});
      covered_to = i + 2;
    }
    if (covered_to < L) {
      if (u01(structure) < params.p * (1.0 - params.q))
        c.events.push_back({EventKind::MeasureX, std::uint32_t(L - 1), t, layer, 0});
    }
    ++c.n_layers;
    detail::add_noise_layer(c, t, params.noise_rate, noise);
  }
  return c;
}

/// Periodic chain with ZZ, ZIZ, X and XX measurements; see kZizXxConvention.
inline CircuitRealization build_zizxx(const EnsembleParams& params, std::uint64_t seed) {
  if (params.model != Model::ZizXx) throw std::invalid_argument("build_zizxx: model must be zizxx");
  CircuitRealization c = detail::start(params, seed);
  Rng structure = make_stream(seed, Stream::Structure);
  Rng noise = make_stream(seed, Stream::NoisePlacement);
  detail::LayerPacker pack(c);
  const std::size_t L = params.L;
  std::vector<Event> pending;
  auto layer = [&](EventKind kind, double prob, std::uint32_t t) {
    for (std::size_t i = 0; i < L; ++i)
      if (u01(structure) < prob) pending.push_back({kind, std::uint32_t(i), t, 0, 0});
    pack.flush(pending);
    detail::add_noise_layer(c, t, params.noise_rate, noise);
  };
  for (std::uint32_t t = 0; t < params.T; ++t) {
    layer(EventKind::MeasureZZ, 1.0 - params.p, t);
    layer(EventKind::MeasureZIZ, 1.0 - params.r_xx, t);
    layer(EventKind::MeasureX, params.p, t);
    layer(EventKind::MeasureXX, params.r_xx, t);
  }
  return c;
}

inline CircuitRealization build_circuit(const EnsembleParams& params, std::uint64_t seed) {
  switch (params.model) {
    case Model::ZzX: return build_zzx(params, seed);
    case Model::Hybrid: return build_hybrid(params, seed);
    case Model::ZizXx: return build_zizxx(params, seed);
  }
  throw std::invalid_argument("build_circuit: unknown model");
}

// ---------------------------------------------------------------------------
// Initial states

enum class StateKind { GhzPlus, GhzMinus, PsiPlus, PsiMinus, ProductPlusX };

inline std::string_view to_string(StateKind k) {
  switch (k) {
    case StateKind::GhzPlus: return "ghz+";
    case StateKind::GhzMinus: return "ghz-";
    case StateKind::PsiPlus: return "psi+";
    case StateKind::PsiMinus: return "psi-";
    case StateKind::ProductPlusX: return "plus";
  }
  return "?";
}
inline StateKind parse_state_kind(std::string_view s) {
  for (auto k : {StateKind::GhzPlus, StateKind::GhzMinus, StateKind::PsiPlus, StateKind::PsiMinus,
                 StateKind::ProductPlusX})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown state '" + std::string(s) + "' (expected ghz+, ghz-, psi+, psi- or plus)");
}

/// First site of the centred GHZ block of width r.
inline std::size_t ghz_block_start(std::size_t L, std::size_t r) { return (L - r) / 2; }

/// Product of X outside a centred block of width r, GHZ inside it. The
/// generators are listed site by site: X_j before the block, the block's
/// Z_j Z_j+1, the block's signed X string, X_j after the block.
inline StabilizerState initial_state(StateKind kind, std::size_t L, std::size_t r = 0) {
  if (L == 0) throw std::invalid_argument("initial_state: L must be positive");
  if (kind == StateKind::ProductPlusX) r = 0;
  else if (kind == StateKind::GhzPlus || kind == StateKind::GhzMinus || r == 0) r = L;
  if (kind != StateKind::ProductPlusX && (r % 2 != 0 || r > L || r < 2))
    throw std::invalid_argument("initial_state: block width must be even, >= 2 and <= L");
  const std::size_t b = ghz_block_start(L, r);
  std::vector<PauliOperator> gens;
  gens.reserve(L);
  for (std::size_t j = 0; j < b; ++j) gens.push_back(PauliOperator::x_on(L, {j}));
  if (r > 0) {
    for (std::size_t j = b; j + 1 < b + r; ++j) gens.push_back(PauliOperator::z_on(L, {j, j + 1}));
    PauliOperator gx(L);
    for (std::size_t j = b; j < b + r; ++j) gx.set_x(j, true);
    if (kind == StateKind::GhzMinus || kind == StateKind::PsiMinus) gx.set_sign(-1);
    gens.push_back(gx);
  }
  for (std::size_t j = b + r; j < L; ++j) gens.push_back(PauliOperator::x_on(L, {j}));
  return StabilizerState::from_generators(L, gens);
}

// ---------------------------------------------------------------------------
// Scrambling, leak test, noise

/// Gate ids and bonds of a depth-`depth` symmetric brickwork.
inline CircuitRealization scrambler_circuit(std::size_t L, std::size_t depth, Boundary boundary, Rng& rng) {
  CircuitRealization c;
  c.n_sites = L;
  c.boundary = boundary;
  c.scramble_depth = depth;
  detail::add_scramble_layers(c, depth, boundary, rng);
  return c;
}

inline void apply_unitary(StabilizerState& s, const Event& e) {
  const std::size_t sites[2] = {e.site, (e.site + 1) % s.n_sites()};
  s.apply(TwoQubitCliffords::instance().gate(e.gate_id), sites);
}

inline void scramble(StabilizerState& state, std::size_t depth, Rng& rng, Boundary boundary = Boundary::Open) {
  const auto c = scrambler_circuit(state.n_sites(), depth, boundary, rng);
  for (const auto& e : c.events) apply_unitary(state, e);
}

/// Images U (Z_i Z_i+1) U^dag, i = 0..L-2, under the unitary events of `c`.
inline std::vector<PauliOperator> scrambled_zz_images(const CircuitRealization& c) {
  const std::size_t L = c.n_sites;
  PauliRows rows(L);
  for (std::size_t i = 0; i + 1 < L; ++i) rows.push_back(PauliOperator::z_on(L, {i, i + 1}));
  for (const auto& e : c.events) {
    if (e.kind != EventKind::Unitary) continue;
    const std::size_t sites[2] = {e.site, (e.site + 1) % L};
    TwoQubitCliffords::instance().gate(e.gate_id).apply_to_rows(rows, sites);
  }
  std::vector<PauliOperator> out;
  for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(rows.row(r));
  return out;
}

/// True iff some product of the images has an all-ones X part.
inline bool leak_check(std::span<const PauliOperator> images, std::size_t L) {
  Gf2Basis basis(L);
  for (const auto& im : images) {
    if (im.n_sites() != L) throw std::invalid_argument("leak_check: image size mismatch");
    basis.insert(im.x_words());
  }
  const auto ones = PauliOperator::all_x(L);
  return basis.contains(ones.x_words());
}

/// One trajectory of the bit-flip channel: X on `site` with probability 1/2.
inline bool apply_noise_slot(StabilizerState& state, std::size_t site, Rng& rng) {
  const bool flip = (rng() >> 63) != 0;
  if (flip) state.apply_x(site);
  return flip;
}

}  // namespace lxe
