#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace lxe {

/// Bit vector packed into 64-bit words.
using BitRow = std::vector<std::uint64_t>;

/// Incrementally reduced basis over GF(2). Each stored row remembers which
/// inserted vectors it is a combination of, so membership queries can also
/// return the subset that reproduces the target.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t n_bits) : n_bits_(n_bits), words_((n_bits + 63) / 64) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t inserted() const { return n_inserted_; }

  /// Adds a vector; returns false if it was already in the span.
  bool insert(std::span<const std::uint64_t> v) {
    check(v);
    Row r{BitRow(v.begin(), v.end()), BitRow((n_inserted_ + 1 + 63) / 64, 0)};
    r.combo[n_inserted_ / 64] |= std::uint64_t{1} << (n_inserted_ % 64);
    ++n_inserted_;
    reduce(r);
    const auto piv = leading_bit(r.bits);
    if (!piv) return false;
    for (auto& row : rows_)
      if (test(row.bits, *piv)) add(row, r);
    rows_.push_back(std::move(r));
    pivots_.push_back(*piv);
    return true;
  }

  bool contains(std::span<const std::uint64_t> v) const { return solve(v).has_value(); }

  /// Indices of inserted vectors whose XOR equals v, if v is in the span.
  std::optional<std::vector<std::size_t>> solve(std::span<const std::uint64_t> v) const {
    check(v);
    Row r{BitRow(v.begin(), v.end()), BitRow((n_inserted_ + 63) / 64 + 1, 0)};
    reduce(r);
    for (auto w : r.bits)
      if (w) return std::nullopt;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n_inserted_; ++i)
      if (test(r.combo, i)) idx.push_back(i);
    return idx;
  }

 private:
  struct Row {
    BitRow bits;
    BitRow combo;
  };

  void check(std::span<const std::uint64_t> v) const {
    if (v.size() != words_) throw std::invalid_argument("Gf2Basis: vector length mismatch");
  }
  static bool test(const BitRow& b, std::size_t i) {
    return i / 64 < b.size() && ((b[i / 64] >> (i % 64)) & 1);
  }
  static std::optional<std::size_t> leading_bit(const BitRow& b) {
    for (std::size_t w = 0; w < b.size(); ++w)
      if (b[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(b[w]));
    return std::nullopt;
  }
  static void add(Row& dst, const Row& src) {
    for (std::size_t w = 0; w < dst.bits.size(); ++w) dst.bits[w] ^= src.bits[w];
    if (dst.combo.size() < src.combo.size()) dst.combo.resize(src.combo.size(), 0);
    for (std::size_t w = 0; w < src.combo.size(); ++w) dst.combo[w] ^= src.combo[w];
  }
  void reduce(Row& r) const {
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (test(r.bits, pivots_[i])) add(r, rows_[i]);
  }

  std::size_t n_bits_;
  std::size_t words_;
  std::size_t n_inserted_ = 0;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
};

/// True iff `target` is a GF(2) combination of `rows`.
inline bool in_span(std::span<const BitRow> rows, std::span<const std::uint64_t> target, std::size_t n_bits) {
  Gf2Basis b(n_bits);
  for (const auto& r : rows) b.insert(r);
  return b.contains(target);
}

}  // namespace lxe
