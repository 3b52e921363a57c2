#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lxe/circuit.hpp"
#include "lxe/models.hpp"
#include "lxe/rng.hpp"
#include "lxe/stabilizer_state.hpp"

namespace lxe {

/// Which measurement outcomes enter the record.
enum class Scope { All, XOnly, ZOnly };

inline bool in_scope(Scope s, EventKind k) {
  if (!is_measurement(k)) return false;
  switch (s) {
    case Scope::All: return true;
    case Scope::XOnly: return is_x_type(k);
    case Scope::ZOnly: return is_z_type(k);
  }
  return false;
}

inline std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::All: return "all";
    case Scope::XOnly: return "x";
    case Scope::ZOnly: return "z";
  }
  return "?";
}
inline Scope parse_scope(std::string_view s) {
  if (s == "all") return Scope::All;
  if (s == "x") return Scope::XOnly;
  if (s == "z") return Scope::ZOnly;
  throw std::invalid_argument("unknown scope '" + std::string(s) + "' (expected all, x or z)");
}

struct RecordEntry {
  std::uint32_t event = 0;  // index into CircuitRealization::events
  std::int8_t outcome = 1;
  EventKind kind = EventKind::MeasureZZ;
  bool was_random = false;
  friend bool operator==(const RecordEntry&, const RecordEntry&) = default;
};

struct MeasurementRecord {
  Scope scope = Scope::All;
  std::vector<RecordEntry> entries;
};

/// Random sources of one run of the rho circuit.
struct TrajectoryStreams {
  Rng outcomes;
  Rng noise;

  static TrajectoryStreams make(std::uint64_t circuit_seed, std::uint64_t record_index) {
    return {make_stream(circuit_seed, Stream::Outcomes, record_index),
            make_stream(circuit_seed, Stream::NoiseBranch, record_index)};
  }
};

namespace detail {

inline void check_sizes(const CircuitRealization& c, const StabilizerState& s, const char* where) {
  if (c.n_sites != s.n_sites()) throw std::invalid_argument(std::string(where) + ": circuit and state sizes differ");
}

// Forced measurements never consult the generator; this one only satisfies the signature.
struct NoCoin {
  std::uint64_t operator()() const { return 0; }
};

}  // namespace detail

/// Runs the circuit on `state`, recording outcomes of in-scope measurements.
/// Out-of-scope measurements are still performed; noise slots fire with
/// probability 1/2 each.
inline MeasurementRecord sample_record(const CircuitRealization& circuit, StabilizerState state, Scope scope,
                                       TrajectoryStreams& streams, const OperatorTable* table = nullptr) {
  detail::check_sizes(circuit, state, "sample_record");
  std::optional<OperatorTable> own;
  if (!table) table = &own.emplace(circuit.n_sites);
  MeasurementRecord rec;
  rec.scope = scope;
  for (std::size_t k = 0; k < circuit.events.size(); ++k) {
    const Event& e = circuit.events[k];
    if (e.kind == EventKind::Unitary) {
      apply_unitary(state, e);
    } else if (e.kind == EventKind::NoiseSlot) {
      apply_noise_slot(state, e.site, streams.noise);
    } else {
      const auto r = state.measure(table->op(e), std::nullopt, streams.outcomes);
      if (in_scope(scope, e.kind))
        rec.entries.push_back({static_cast<std::uint32_t>(k), static_cast<std::int8_t>(r.outcome), e.kind, r.was_random});
    }
  }
  return rec;
}

/// Replays `record` on sigma: in-scope measurements are forced to the recorded
/// outcome, other measurements become dephasing channels, noise slots are
/// skipped. Stops at the first deterministic mismatch.
inline bool replay_is_compatible(const CircuitRealization& circuit, StabilizerState sigma,
                                 const MeasurementRecord& record, const OperatorTable* table = nullptr) {
  detail::check_sizes(circuit, sigma, "replay_is_compatible");
  std::optional<OperatorTable> own;
  if (!table) table = &own.emplace(circuit.n_sites);
  detail::NoCoin no_coin;
  std::size_t next = 0;
  for (std::size_t k = 0; k < circuit.events.size(); ++k) {
    const Event& e = circuit.events[k];
    if (e.kind == EventKind::Unitary) {
      apply_unitary(sigma, e);
    } else if (e.kind == EventKind::NoiseSlot) {
      continue;
    } else if (in_scope(record.scope, e.kind)) {
      if (next >= record.entries.size() || record.entries[next].event != k)
        throw std::invalid_argument("replay_is_compatible: record does not match the circuit");
      const auto r = sigma.measure(table->op(e), int(record.entries[next].outcome), no_coin);
      ++next;
      if (!r.ok()) return false;
    } else {
      sigma.dephase(table->op(e));
    }
  }
  if (next != record.entries.size())
    throw std::invalid_argument("replay_is_compatible: record has entries beyond the circuit");
  return true;
}

/// Sampling from rho and replaying on sigma, run in lockstep so the loop can
/// stop at the first incompatible outcome.
inline bool chi_for_realization(const CircuitRealization& circuit, StabilizerState rho, StabilizerState sigma,
                                Scope scope, TrajectoryStreams& streams, const OperatorTable* table = nullptr) {
  detail::check_sizes(circuit, rho, "chi_for_realization");
  detail::check_sizes(circuit, sigma, "chi_for_realization");
  std::optional<OperatorTable> own;
  if (!table) table = &own.emplace(circuit.n_sites);
  detail::NoCoin no_coin;
  for (const Event& e : circuit.events) {
    if (e.kind == EventKind::Unitary) {
      apply_unitary(rho, e);
      apply_unitary(sigma, e);
    } else if (e.kind == EventKind::NoiseSlot) {
      apply_noise_slot(rho, e.site, streams.noise);
    } else {
      const PauliOperator& op = table->op(e);
      const auto r = rho.measure(op, std::nullopt, streams.outcomes);
      if (in_scope(scope, e.kind)) {
        if (!sigma.measure(op, r.outcome, no_coin).ok()) return false;
      } else {
        sigma.dephase(op);
      }
    }
  }
  return true;
}

struct LxeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t hits = 0;
};

inline LxeEstimate make_estimate(std::size_t hits, std::size_t n) {
  LxeEstimate e;
  e.hits = hits;
  e.n_samples = n;
  if (n == 0) return e;
  e.mean = double(hits) / double(n);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / double(n));
  return e;
}

/// Calls fn(i) for i in [0, n) on `workers` threads, contiguous blocks each.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = std::min(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline std::size_t default_workers() {
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

struct LxeRequest {
  EnsembleParams params;
  StateKind rho = StateKind::GhzPlus;
  StateKind sigma = StateKind::GhzMinus;
  Scope scope = Scope::All;
  std::size_t n_circuits = 1000;
  std::size_t records_per_circuit = 4;  // used only with noise
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
};

inline std::uint64_t circuit_seed(std::uint64_t master_seed, std::size_t index) {
  return derive_seed(master_seed, 0xC1C1, index);
}

inline std::size_t records_for(const EnsembleParams& params, std::size_t records_per_circuit) {
  return params.noise_rate > 0.0 ? std::max<std::size_t>(1, records_per_circuit) : 1;
}

/// Number of compatible records of circuit `index`.
inline std::size_t realization_hits(const LxeRequest& req, const StabilizerState& rho, const StabilizerState& sigma,
                                    const OperatorTable& table, std::size_t index) {
  const std::uint64_t seed = circuit_seed(req.master_seed, index);
  const auto circuit = build_circuit(req.params, seed);
  const std::size_t records = records_for(req.params, req.records_per_circuit);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < records; ++k) {
    auto streams = TrajectoryStreams::make(seed, k);
    hits += chi_for_realization(circuit, rho, sigma, req.scope, streams, &table);
  }
  return hits;
}

/// Mean compatibility indicator over circuits (and noise trajectories).
/// Independent of the worker count.
inline LxeEstimate estimate_lxe(const LxeRequest& req) {
  req.params.validate();
  if (req.n_circuits == 0) throw std::invalid_argument("estimate_lxe: n_circuits must be >= 1");
  const std::size_t L = req.params.L;
  const std::size_t r = req.params.ghz_width();
  const auto rho = initial_state(req.rho, L, r);
  const auto sigma = initial_state(req.sigma, L, r);
  const OperatorTable table(L);
  std::vector<std::size_t> hits(req.n_circuits, 0);
  parallel_for(req.n_circuits, req.workers,
               [&](std::size_t i) { hits[i] = realization_hits(req, rho, sigma, table, i); });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return make_estimate(total, req.n_circuits * records_for(req.params, req.records_per_circuit));
}

}  // namespace lxe
