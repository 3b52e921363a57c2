#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lxe/pauli.hpp"
#include "lxe/pauli_rows.hpp"

namespace lxe {

/// A Clifford unitary U on m qubits, given by its Pauli transfer table:
/// the signed images U X_j U^dag and U Z_j U^dag of every input generator.
/// A lookup table over all 4^m local Paulis is built once at construction.
class CliffordAction {
 public:
  static constexpr std::size_t kMaxArity = 6;

  CliffordAction() = default;

  /// images = {U X_0 U^dag, U Z_0 U^dag, U X_1 U^dag, ...}, each on m sites.
  explicit CliffordAction(std::vector<PauliOperator> images) : images_(std::move(images)) {
    if (images_.empty() || images_.size() % 2 != 0)
      throw std::invalid_argument("CliffordAction: need images of X_j and Z_j for every qubit");
    m_ = images_.size() / 2;
    if (m_ > kMaxArity) throw std::invalid_argument("CliffordAction: arity too large");
    for (const auto& im : images_)
      if (im.n_sites() != m_)
        throw std::invalid_argument("CliffordAction: image acts on the wrong number of qubits");
    for (std::size_t a = 0; a < images_.size(); ++a) {
      for (std::size_t b = a + 1; b < images_.size(); ++b) {
        const bool should_anticommute = (a / 2 == b / 2);
        if (commutes(images_[a], images_[b]) == should_anticommute)
          throw std::invalid_argument(
              "CliffordAction: inconsistent transfer table (images break the commutation relations)");
      }
    }
    build_table();
  }

  /// Convenience: images written as strings, e.g. {"XX", "ZI", "IX", "ZZ"} for CNOT.
  static CliffordAction from_strings(std::initializer_list<const char*> imgs) {
    std::vector<PauliOperator> v;
    for (const char* s : imgs) v.push_back(PauliOperator::parse(s));
    return CliffordAction(std::move(v));
  }

  static CliffordAction identity(std::size_t m) {
    std::vector<PauliOperator> v;
    for (std::size_t j = 0; j < m; ++j) {
      v.push_back(PauliOperator::x_on(m, {j}));
      v.push_back(PauliOperator::z_on(m, {j}));
    }
    return CliffordAction(std::move(v));
  }

  std::size_t arity() const { return m_; }
  const PauliOperator& image_x(std::size_t j) const { return images_[2 * j]; }
  const PauliOperator& image_z(std::size_t j) const { return images_[2 * j + 1]; }
  const std::vector<PauliOperator>& images() const { return images_; }

  /// U P U^dag for a Hermitian P on the gate's m qubits.
  PauliOperator conjugate_local(const PauliOperator& p) const {
    if (p.n_sites() != m_) throw std::invalid_argument("CliffordAction: operator size mismatch");
    std::uint32_t idx = 0;
    for (std::size_t j = 0; j < m_; ++j)
      idx |= (std::uint32_t(p.x(j)) << (2 * j)) | (std::uint32_t(p.z(j)) << (2 * j + 1));
    const Entry e = table_[idx];
    PauliOperator r(m_);
    for (std::size_t j = 0; j < m_; ++j) r.set(j, (e.bits >> (2 * j)) & 1, (e.bits >> (2 * j + 1)) & 1);
    r.set_sign((p.negative() != e.negative) ? -1 : +1);
    return r;
  }

  /// Conjugates row r of `rows` in place; `sites` maps gate qubit j to a row site.
  void apply_to_row(PauliRows& rows, std::size_t r, std::span<const std::size_t> sites) const {
    std::uint64_t* xr = rows.x(r);
    std::uint64_t* zr = rows.z(r);
    std::uint32_t idx = 0;
    for (std::size_t j = 0; j < m_; ++j) {
      const std::size_t s = sites[j];
      const std::uint64_t sh = s % 64;
      idx |= std::uint32_t((xr[s / 64] >> sh) & 1) << (2 * j);
      idx |= std::uint32_t((zr[s / 64] >> sh) & 1) << (2 * j + 1);
    }
    if (idx == 0) return;
    const Entry e = table_[idx];
    for (std::size_t j = 0; j < m_; ++j) {
      const std::size_t s = sites[j];
      const std::uint64_t mask = std::uint64_t{1} << (s % 64);
      xr[s / 64] = (xr[s / 64] & ~mask) | (((e.bits >> (2 * j)) & 1) ? mask : 0);
      zr[s / 64] = (zr[s / 64] & ~mask) | (((e.bits >> (2 * j + 1)) & 1) ? mask : 0);
    }
    if (e.negative) rows.flip_sign(r);
  }

  void apply_to_rows(PauliRows& rows, std::span<const std::size_t> sites) const {
    check_sites(rows.n_sites(), sites);
    for (std::size_t r = 0; r < rows.size(); ++r) apply_to_row(rows, r, sites);
  }

  void check_sites(std::size_t n_sites, std::span<const std::size_t> sites) const {
    if (sites.size() != m_) throw std::invalid_argument("CliffordAction: wrong number of target sites");
    for (std::size_t a = 0; a < sites.size(); ++a) {
      if (sites[a] >= n_sites) throw std::out_of_range("CliffordAction: site out of range");
      for (std::size_t b = a + 1; b < sites.size(); ++b)
        if (sites[a] == sites[b]) throw std::invalid_argument("CliffordAction: repeated target site");
    }
  }

 private:
  struct Entry {
    std::uint16_t bits = 0;
    bool negative = false;
  };

  void build_table() {
    const std::size_t n_entries = std::size_t{1} << (2 * m_);
    table_.assign(n_entries, Entry{});
    for (std::size_t idx = 0; idx < n_entries; ++idx) {
      PhasedPauli acc{PauliOperator(m_), 0};
      for (std::size_t j = 0; j < m_; ++j) {
        const bool xb = (idx >> (2 * j)) & 1;
        const bool zb = (idx >> (2 * j + 1)) & 1;
        // Y = i X Z on the input side
        if (xb && zb) acc.exponent = (acc.exponent + 1) & 3;
        if (xb) acc *= PhasedPauli::from(images_[2 * j]);
        if (zb) acc *= PhasedPauli::from(images_[2 * j + 1]);
      }
      const PauliOperator img = acc.to_hermitian();
      Entry e;
      for (std::size_t j = 0; j < m_; ++j)
        e.bits |= static_cast<std::uint16_t>((std::uint32_t(img.x(j)) << (2 * j)) |
                                             (std::uint32_t(img.z(j)) << (2 * j + 1)));
      e.negative = img.negative();
      table_[idx] = e;
    }
  }

  std::size_t m_ = 0;
  std::vector<PauliOperator> images_;
  std::vector<Entry> table_;
};

/// U P U^dag for P on the full register, gate acting on `sites`.
inline PauliOperator conjugate(const PauliOperator& p, const CliffordAction& gate,
                               std::span<const std::size_t> sites) {
  PauliRows rows(p.n_sites());
  rows.push_back(p);
  gate.apply_to_rows(rows, sites);
  return rows.row(0);
}

}  // namespace lxe
