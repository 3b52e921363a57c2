#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lxe/pauli.hpp"

namespace lxe {

enum class Model { ZzX, Hybrid, ZizXx };
enum class Boundary { Open, Periodic };

/// Measurement kinds act on: ZZ and XX on (i, i+1), ZIZ on (i, i+2), X on i
/// (sites mod L). A Unitary acts on (i, i+1) with a two-qubit Clifford id.
enum class EventKind : std::uint8_t { MeasureZZ, MeasureX, MeasureZIZ, MeasureXX, Unitary, NoiseSlot };

inline bool is_measurement(EventKind k) {
  return k == EventKind::MeasureZZ || k == EventKind::MeasureX || k == EventKind::MeasureZIZ ||
         k == EventKind::MeasureXX;
}
inline bool is_x_type(EventKind k) { return k == EventKind::MeasureX || k == EventKind::MeasureXX; }
inline bool is_z_type(EventKind k) { return k == EventKind::MeasureZZ || k == EventKind::MeasureZIZ; }

struct Event {
  EventKind kind = EventKind::MeasureZZ;
  std::uint32_t site = 0;
  std::uint32_t step = 0;   // time step of the main circuit (0 for the scrambling prefix)
  std::uint32_t layer = 0;  // running layer index; no qubit appears twice within a layer
  std::uint16_t gate_id = 0;

  bool recordable() const { return is_measurement(kind); }
  friend bool operator==(const Event&, const Event&) = default;
};

struct EnsembleParams {
  Model model = Model::ZzX;
  std::size_t L = 16;
  std::size_t T = 16;
  double p = 0.5;           // X-type measurement probability
  double q = 0.0;           // unitary brick probability (Hybrid)
  double r_xx = 0.0;        // XX vs ZIZ probability (ZizXx)
  double noise_rate = 0.0;  // bit-flip channel placement probability per qubit and layer
  Boundary boundary = Boundary::Open;
  std::size_t r_ghz = 0;    // GHZ block width; 0 = whole chain
  std::size_t scramble_depth = 0;

  std::size_t ghz_width() const { return r_ghz == 0 ? L : r_ghz; }

  void validate() const {
    auto prob = [](double v, const char* name) {
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string("EnsembleParams: ") + name + " must lie in [0, 1]");
    };
    prob(p, "p");
    prob(q, "q");
    prob(r_xx, "r_xx");
    prob(noise_rate, "noise_rate");
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("EnsembleParams: L must be even and >= 2");
    if (L > (std::size_t{1} << 24)) throw std::invalid_argument("EnsembleParams: L too large");
    const std::size_t r = ghz_width();
    if (r % 2 != 0 || r > L) throw std::invalid_argument("EnsembleParams: r_ghz must be even and <= L");
    if (model == Model::Hybrid && boundary != Boundary::Open)
      throw std::invalid_argument("EnsembleParams: the hybrid model uses open boundaries");
    if (model == Model::ZizXx && boundary != Boundary::Periodic)
      throw std::invalid_argument("EnsembleParams: the ZIZ-XX model uses periodic boundaries");
    if (model == Model::ZizXx && L < 4) throw std::invalid_argument("EnsembleParams: ZIZ-XX model needs L >= 4");
  }
};

struct CircuitRealization {
  Model model = Model::ZzX;
  std::size_t n_sites = 0;
  std::size_t n_steps = 0;
  Boundary boundary = Boundary::Open;
  std::uint64_t seed = 0;
  std::size_t scramble_depth = 0;
  std::size_t n_layers = 0;
  std::vector<Event> events;

  std::size_t count(EventKind k) const {
    std::size_t c = 0;
    for (const auto& e : events) c += e.kind == k;
    return c;
  }

  /// FNV-1a over the header and every event field.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    };
    mix(static_cast<std::uint64_t>(model));
    mix(n_sites);
    mix(n_steps);
    mix(static_cast<std::uint64_t>(boundary));
    mix(seed);
    mix(scramble_depth);
    for (const auto& e : events) {
      mix(static_cast<std::uint64_t>(e.kind));
      mix(e.site);
      mix(e.step);
      mix(e.layer);
      mix(e.gate_id);
    }
    return h;
  }
};

/// The qubits an event touches, in gate order.
inline std::size_t event_qubits(const Event& e, std::size_t L, std::size_t out[2]) {
  switch (e.kind) {
    case EventKind::MeasureX:
    case EventKind::NoiseSlot:
      out[0] = e.site;
      return 1;
    case EventKind::MeasureZIZ:
      out[0] = e.site;
      out[1] = (e.site + 2) % L;
      return 2;
    default:
      out[0] = e.site;
      out[1] = (e.site + 1) % L;
      return 2;
  }
}

/// Measured Pauli for each (measurement kind, site), built once per system size.
class OperatorTable {
 public:
  explicit OperatorTable(std::size_t L) : L_(L) {
    for (int k = 0; k < 4; ++k) ops_[k].reserve(L);
    for (std::size_t i = 0; i < L; ++i) {
      ops_[0].push_back(L >= 2 ? PauliOperator::z_on(L, {i, (i + 1) % L}) : PauliOperator::z_on(L, {i}));
      ops_[1].push_back(PauliOperator::x_on(L, {i}));
      ops_[2].push_back(L >= 3 ? PauliOperator::z_on(L, {i, (i + 2) % L}) : PauliOperator::z_on(L, {i}));
      ops_[3].push_back(L >= 2 ? PauliOperator::x_on(L, {i, (i + 1) % L}) : PauliOperator::x_on(L, {i}));
    }
  }
  std::size_t n_sites() const { return L_; }
  const PauliOperator& op(const Event& e) const {
    if (!is_measurement(e.kind)) throw std::invalid_argument("OperatorTable: event is not a measurement");
    return ops_[static_cast<int>(e.kind)][e.site];
  }

 private:
  std::size_t L_;
  std::vector<PauliOperator> ops_[4];
};

inline std::string_view to_string(Model m) {
  switch (m) {
    case Model::ZzX: return "zzx";
    case Model::Hybrid: return "hybrid";
    case Model::ZizXx: return "zizxx";
  }
  return "?";
}
inline std::string_view to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

inline Model parse_model(std::string_view s) {
  if (s == "zzx") return Model::ZzX;
  if (s == "hybrid") return Model::Hybrid;
  if (s == "zizxx") return Model::ZizXx;
  throw std::invalid_argument("unknown model '" + std::string(s) + "' (expected zzx, hybrid or zizxx)");
}
inline Boundary parse_boundary(std::string_view s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("unknown boundary '" + std::string(s) + "' (expected open or periodic)");
}

}  // namespace lxe
