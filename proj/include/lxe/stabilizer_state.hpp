#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lxe/clifford.hpp"
#include "lxe/pauli.hpp"
#include "lxe/pauli_rows.hpp"

namespace lxe {

enum class Membership { Plus, Minus, Absent };

enum class MeasureStatus { Ok, Incompatible };

struct MeasureResult {
  int outcome = +1;  // +1 / -1; for Incompatible, the deterministic value that was contradicted
  bool was_random = false;
  MeasureStatus status = MeasureStatus::Ok;

  bool ok() const { return status == MeasureStatus::Ok; }
};

/// Stabilizer state (pure or mixed) on n qubits.
///
/// Internally a full symplectic basis of the 2n-dimensional Pauli space is kept:
/// k stabilizer generators s_i with destabilizers d_i (d_i anticommutes with s_i
/// only), plus n-k "logical" pairs spanning the unfixed sector. Only the
/// stabilizers carry meaningful signs. Keeping the partners around turns every
/// membership question into a commutation scan instead of a GF(2) solve.
///
/// Conventions visible through the public API:
///  - measuring an operator that anticommutes with the state pivots on the
///    lowest-index anticommuting generator g, multiplies the other
///    anticommuting generators by g and overwrites g with (outcome * op);
///  - an operator that commutes with every generator but is not in the group
///    is appended as a new generator (rank + 1);
///  - dephasing deletes the pivot generator (rank - 1).
class StabilizerState {
 public:
  /// Maximally mixed state (rank 0).
  explicit StabilizerState(std::size_t n_sites)
      : n_(n_sites), stab_(n_sites), destab_(n_sites), lx_(n_sites), lz_(n_sites), scratch_(n_sites) {
    if (n_sites == 0) throw std::invalid_argument("StabilizerState: n_sites must be positive");
    for (std::size_t j = 0; j < n_sites; ++j) {
      lx_.push_back(PauliOperator::x_on(n_sites, {j}));
      lz_.push_back(PauliOperator::z_on(n_sites, {j}));
    }
    scratch_.push_back(PauliOperator(n_sites));
  }

  /// State stabilized by exactly these generators (in this order). Throws if
  /// they fail to commute or are not independent.
  static StabilizerState from_generators(std::size_t n_sites, std::span<const PauliOperator> gens) {
    StabilizerState s(n_sites);
    for (const auto& g : gens) {
      if (g.n_sites() != n_sites)
        throw std::invalid_argument("StabilizerState: generator size mismatch");
      if (g.is_identity()) throw std::invalid_argument("StabilizerState: identity generator");
      if (s.anticommuting_stabilizer(g) != kNone)
        throw std::invalid_argument("StabilizerState: generators do not commute: " + g.to_string());
      const auto r = s.measure_impl(g, +1, [] { return false; });
      if (!r.was_random || !r.ok())
        throw std::invalid_argument("StabilizerState: generators are not independent: " + g.to_string());
    }
    return s;
  }
  static StabilizerState from_generators(std::size_t n_sites, std::initializer_list<PauliOperator> gens) {
    return from_generators(n_sites, std::span<const PauliOperator>(gens.begin(), gens.size()));
  }

  std::size_t n_sites() const { return n_; }
  std::size_t rank() const { return stab_.size(); }
  bool is_pure() const { return stab_.size() == n_; }

  PauliOperator generator(std::size_t i) const { return stab_.row(i); }
  std::vector<PauliOperator> generators() const {
    std::vector<PauliOperator> out;
    out.reserve(stab_.size());
    for (std::size_t i = 0; i < stab_.size(); ++i) out.push_back(stab_.row(i));
    return out;
  }
  const PauliRows& stabilizer_rows() const { return stab_; }

  /// Measures a Hermitian, non-identity Pauli. If `forced` is given and the
  /// outcome is random, the outcome is set to it; if the outcome is
  /// deterministic and differs from `forced`, the state is left untouched and
  /// the result reports Incompatible.
  template <class Rng>
  MeasureResult measure(const PauliOperator& op, std::optional<int> forced, Rng& rng) {
    check_operator(op, "measure");
    if (forced && *forced != 1 && *forced != -1)
      throw std::invalid_argument("measure: forced outcome must be +1 or -1");
    return measure_impl(op, forced ? *forced : 0, [&rng] { return ((rng() >> 63) & 1) != 0; });
  }

  /// Applies the channel rho -> P+ rho P+ + P- rho P- for P+- = (1 +- op)/2.
  void dephase(const PauliOperator& op) {
    check_operator(op, "dephase");
    const std::size_t g = anticommuting_stabilizer(op);
    if (g == kNone) return;
    for (std::size_t i = g + 1; i < stab_.size(); ++i) {
      if (stab_.anticommutes(i, op)) {
        stab_.multiply_signed(i, stab_, g);
        destab_.multiply_unsigned(g, destab_, i);
      }
    }
    lx_.push_back_row(stab_, g);
    lz_.push_back_row(destab_, g);
    stab_.erase(g);
    destab_.erase(g);
    debug_check();
  }

  /// Whether +op or -op belongs to the stabilizer group.
  Membership contains_up_to_sign(const PauliOperator& op) const {
    if (op.n_sites() != n_) throw std::invalid_argument("contains_up_to_sign: operator size mismatch");
    if (op.is_identity()) return op.negative() ? Membership::Minus : Membership::Plus;
    if (anticommuting_stabilizer(op) != kNone) return Membership::Absent;
    for (std::size_t j = 0; j < lx_.size(); ++j)
      if (lx_.anticommutes(j, op) || lz_.anticommutes(j, op)) return Membership::Absent;
    PauliRows acc(n_);
    acc.push_back(PauliOperator(n_));
    for (std::size_t i = 0; i < stab_.size(); ++i)
      if (destab_.anticommutes(i, op)) acc.multiply_signed(0, stab_, i);
    return acc.negative(0) == op.negative() ? Membership::Plus : Membership::Minus;
  }

  /// Conjugates the state by the gate: rho -> U rho U^dag.
  void apply(const CliffordAction& gate, std::span<const std::size_t> sites) {
    gate.check_sites(n_, sites);
    for (PauliRows* rows : {&stab_, &destab_, &lx_, &lz_})
      for (std::size_t r = 0; r < rows->size(); ++r) gate.apply_to_row(*rows, r, sites);
    debug_check();
  }
  void apply(const CliffordAction& gate, std::initializer_list<std::size_t> sites) {
    apply(gate, std::span<const std::size_t>(sites.begin(), sites.size()));
  }

  /// Conjugates the state by X on one site (only generator signs change).
  void apply_x(std::size_t site) {
    if (site >= n_) throw std::out_of_range("apply_x: site out of range");
    for (std::size_t i = 0; i < stab_.size(); ++i)
      if (stab_.z_bit(i, site)) stab_.flip_sign(i);
  }

  /// Verifies the symplectic-basis bookkeeping; throws std::logic_error on failure.
  void check_invariants() const {
    const std::size_t k = stab_.size();
    if (destab_.size() != k || lx_.size() != lz_.size() || k + lx_.size() != n_)
      throw std::logic_error("StabilizerState: row counts out of balance");
    struct Ref { const PauliRows* rows; std::size_t r; int role; std::size_t idx; };
    std::vector<Ref> all;
    for (std::size_t i = 0; i < k; ++i) all.push_back({&stab_, i, 0, i});
    for (std::size_t i = 0; i < k; ++i) all.push_back({&destab_, i, 1, i});
    for (std::size_t j = 0; j < lx_.size(); ++j) all.push_back({&lx_, j, 2, j});
    for (std::size_t j = 0; j < lz_.size(); ++j) all.push_back({&lz_, j, 3, j});
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = a + 1; b < all.size(); ++b) {
        const bool anti = all[a].rows->anticommutes(all[a].r, *all[b].rows, all[b].r);
        const bool paired = all[a].idx == all[b].idx &&
                            ((all[a].role == 0 && all[b].role == 1) || (all[a].role == 2 && all[b].role == 3));
        if (anti != paired) throw std::logic_error("StabilizerState: symplectic basis broken");
      }
    }
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void check_operator(const PauliOperator& op, const char* where) const {
    if (op.n_sites() != n_) throw std::invalid_argument(std::string(where) + ": operator size mismatch");
    if (op.is_identity()) throw std::invalid_argument(std::string(where) + ": identity operator");
  }

  std::size_t anticommuting_stabilizer(const PauliOperator& op) const {
    for (std::size_t i = 0; i < stab_.size(); ++i)
      if (stab_.anticommutes(i, op)) return i;
    return kNone;
  }

  void debug_check() const {
#ifdef LXE_CHECK_INVARIANTS
    check_invariants();
#endif
  }

  // forced == 0 means "not forced".
  template <class CoinFn>
  MeasureResult measure_impl(const PauliOperator& op, int forced, CoinFn&& coin) {
    auto draw = [&] { return forced != 0 ? forced : (coin() ? -1 : +1); };

    // Anticommutes with a generator: outcome is a fair coin.
    if (const std::size_t g = anticommuting_stabilizer(op); g != kNone) {
      const int outcome = draw();
      for (std::size_t i = g + 1; i < stab_.size(); ++i)
        if (stab_.anticommutes(i, op)) stab_.multiply_signed(i, stab_, g);
      for (std::size_t i = 0; i < destab_.size(); ++i)
        if (i != g && destab_.anticommutes(i, op)) destab_.multiply_unsigned(i, stab_, g);
      for (std::size_t j = 0; j < lx_.size(); ++j) {
        if (lx_.anticommutes(j, op)) lx_.multiply_unsigned(j, stab_, g);
        if (lz_.anticommutes(j, op)) lz_.multiply_unsigned(j, stab_, g);
      }
      destab_.copy_row(g, stab_, g);
      stab_.assign_row(g, op);
      if (outcome < 0) stab_.flip_sign(g);
      debug_check();
      return {outcome, true, MeasureStatus::Ok};
    }

    // Commutes with the group but not in it (mixed states only).
    for (std::size_t j = 0; j < lx_.size(); ++j) {
      const bool ax = lx_.anticommutes(j, op);
      const bool az = !ax && lz_.anticommutes(j, op);
      if (!ax && !az) continue;
      const int outcome = draw();
      PauliRows& a = ax ? lx_ : lz_;
      for (std::size_t i = 0; i < destab_.size(); ++i)
        if (destab_.anticommutes(i, op)) destab_.multiply_unsigned(i, a, j);
      for (std::size_t jj = 0; jj < lx_.size(); ++jj) {
        if (jj == j) continue;
        if (lx_.anticommutes(jj, op)) lx_.multiply_unsigned(jj, a, j);
        if (lz_.anticommutes(jj, op)) lz_.multiply_unsigned(jj, a, j);
      }
      destab_.push_back_row(a, j);
      stab_.push_back(op);
      if (outcome < 0) stab_.flip_sign(stab_.size() - 1);
      lx_.erase(j);
      lz_.erase(j);
      debug_check();
      return {outcome, true, MeasureStatus::Ok};
    }

    // In the group: op = +-prod of the generators whose destabilizer anticommutes with it.
    auto* sx = scratch_.x(0);
    std::fill(sx, sx + 2 * scratch_.words(), 0);
    scratch_.set_negative(0, false);
    for (std::size_t i = 0; i < stab_.size(); ++i)
      if (destab_.anticommutes(i, op)) scratch_.multiply_signed(0, stab_, i);
    const int value = scratch_.negative(0) == op.negative() ? +1 : -1;
    if (forced != 0 && forced != value) return {value, false, MeasureStatus::Incompatible};
    return {value, false, MeasureStatus::Ok};
  }

  std::size_t n_;
  PauliRows stab_, destab_, lx_, lz_;
  PauliRows scratch_;
};

}  // namespace lxe
