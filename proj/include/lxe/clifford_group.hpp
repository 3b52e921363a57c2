#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lxe/clifford.hpp"
#include "lxe/pauli.hpp"
#include "lxe/rng.hpp"

namespace lxe {

/// The two-qubit Clifford group modulo global phase, enumerated in a fixed
/// order: every symplectic assignment of images for (X0, Z0, X1, Z1) times
/// the 16 sign choices. A gate id is an index into this order.
class TwoQubitCliffords {
 public:
  static constexpr std::size_t kOrder = 11520;

  static const TwoQubitCliffords& instance() {
    static const TwoQubitCliffords table;
    return table;
  }

  std::size_t size() const { return gates_.size(); }
  const CliffordAction& gate(std::size_t id) const {
    if (id >= gates_.size()) throw std::out_of_range("TwoQubitCliffords: gate id out of range");
    return gates_[id];
  }
  bool is_symmetric(std::size_t id) const { return symmetric_.at(id); }
  const std::vector<std::uint16_t>& symmetric_ids() const { return symmetric_ids_; }

 private:
  TwoQubitCliffords() {
    // 4-bit local code: bit0 x0, bit1 z0, bit2 x1, bit3 z1
    auto omega = [](unsigned a, unsigned b) {
      const unsigned s = ((a & 1) & ((b >> 1) & 1)) ^ (((a >> 1) & 1) & (b & 1)) ^
                         (((a >> 2) & 1) & ((b >> 3) & 1)) ^ (((a >> 3) & 1) & ((b >> 2) & 1));
      return s != 0;
    };
    auto op = [](unsigned code, bool neg) {
      PauliOperator p(2);
      p.set(0, code & 1, (code >> 1) & 1);
      p.set(1, (code >> 2) & 1, (code >> 3) & 1);
      p.set_sign(neg ? -1 : +1);
      return p;
    };
    const PauliOperator xx = PauliOperator::parse("XX");
    gates_.reserve(kOrder);
    for (unsigned a = 1; a < 16; ++a)
      for (unsigned b = 1; b < 16; ++b) {
        if (!omega(a, b)) continue;
        for (unsigned c = 1; c < 16; ++c) {
          if (omega(a, c) || omega(b, c)) continue;
          for (unsigned d = 1; d < 16; ++d) {
            if (omega(a, d) || omega(b, d) || !omega(c, d)) continue;
            for (unsigned s = 0; s < 16; ++s) {
              gates_.emplace_back(std::vector<PauliOperator>{op(a, s & 1), op(b, s & 2), op(c, s & 4), op(d, s & 8)});
              const bool sym = gates_.back().conjugate_local(xx) == xx;
              symmetric_.push_back(sym);
              if (sym) symmetric_ids_.push_back(static_cast<std::uint16_t>(gates_.size() - 1));
            }
          }
        }
      }
    if (gates_.size() != kOrder) throw std::logic_error("TwoQubitCliffords: enumeration has wrong size");
  }

  std::vector<CliffordAction> gates_;
  std::vector<bool> symmetric_;
  std::vector<std::uint16_t> symmetric_ids_;
};

/// Uniform gate id from the whole group.
inline std::uint16_t sample_clifford_2q_id(Rng& rng) {
  return static_cast<std::uint16_t>(uniform_below(rng, TwoQubitCliffords::kOrder));
}

/// Uniform gate id from the subgroup fixing +X(x)X, by rejection from the whole group.
inline std::uint16_t sample_symmetric_clifford_2q_id(Rng& rng) {
  const auto& g = TwoQubitCliffords::instance();
  for (;;) {
    const std::uint16_t id = sample_clifford_2q_id(rng);
    if (g.is_symmetric(id)) return id;
  }
}

inline const CliffordAction& sample_symmetric_clifford_2q(Rng& rng) {
  return TwoQubitCliffords::instance().gate(sample_symmetric_clifford_2q_id(rng));
}

}  // namespace lxe
