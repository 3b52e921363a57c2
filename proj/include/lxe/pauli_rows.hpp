#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lxe/pauli.hpp"

namespace lxe {

/// Dense, contiguous storage for a list of signed Pauli strings on the same
/// number of sites. Each row is [x words | z words]; signs are kept apart.
class PauliRows {
 public:
  PauliRows() = default;
  explicit PauliRows(std::size_t n_sites) : n_(n_sites), w_(words_for(n_sites)) {}

  std::size_t n_sites() const { return n_; }
  std::size_t words() const { return w_; }
  std::size_t size() const { return neg_.size(); }
  bool empty() const { return neg_.empty(); }

  std::uint64_t* x(std::size_t r) { return data_.data() + r * 2 * w_; }
  std::uint64_t* z(std::size_t r) { return data_.data() + r * 2 * w_ + w_; }
  const std::uint64_t* x(std::size_t r) const { return data_.data() + r * 2 * w_; }
  const std::uint64_t* z(std::size_t r) const { return data_.data() + r * 2 * w_ + w_; }
  bool negative(std::size_t r) const { return neg_[r]; }
  void set_negative(std::size_t r, bool v) { neg_[r] = v; }
  void flip_sign(std::size_t r) { neg_[r] ^= 1; }

  bool x_bit(std::size_t r, std::size_t j) const { return (x(r)[j / 64] >> (j % 64)) & 1; }
  bool z_bit(std::size_t r, std::size_t j) const { return (z(r)[j / 64] >> (j % 64)) & 1; }

  void push_back(const PauliOperator& p) {
    data_.insert(data_.end(), p.x_words().begin(), p.x_words().end());
    data_.insert(data_.end(), p.z_words().begin(), p.z_words().end());
    neg_.push_back(p.negative());
  }
  void push_back_row(const PauliRows& other, std::size_t r) {
    data_.insert(data_.end(), other.x(r), other.x(r) + 2 * w_);
    neg_.push_back(other.neg_[r]);
  }
  void erase(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * 2 * w_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * 2 * w_));
    neg_.erase(neg_.begin() + static_cast<std::ptrdiff_t>(r));
  }
  void clear() { data_.clear(); neg_.clear(); }

  void assign_row(std::size_t r, const PauliOperator& p) {
    std::copy(p.x_words().begin(), p.x_words().end(), x(r));
    std::copy(p.z_words().begin(), p.z_words().end(), z(r));
    neg_[r] = p.negative();
  }
  void copy_row(std::size_t dst, const PauliRows& src, std::size_t r) {
    std::copy(src.x(r), src.x(r) + 2 * w_, x(dst));
    neg_[dst] = src.neg_[r];
  }

  PauliOperator row(std::size_t r) const {
    PauliOperator p(n_);
    std::copy(x(r), x(r) + w_, p.x_words().begin());
    std::copy(z(r), z(r) + w_, p.z_words().begin());
    p.set_sign(neg_[r] ? -1 : +1);
    return p;
  }

  bool anticommutes(std::size_t r, const PauliOperator& p) const {
    return detail::anticommute_words(x(r), z(r), p.x_words().data(), p.z_words().data(), w_);
  }
  bool anticommutes(std::size_t r, const PauliRows& other, std::size_t s) const {
    return detail::anticommute_words(x(r), z(r), other.x(s), other.z(s), w_);
  }

  /// row r <- row r * (other row s), tracking the sign. Both must commute.
  void multiply_signed(std::size_t r, const PauliRows& other, std::size_t s) {
    const int e = detail::multiply_words(x(r), z(r), other.x(s), other.z(s), w_);
    // commuting operands give e in {0, 2}
    neg_[r] ^= other.neg_[s] ^ (e == 2);
  }
  /// row r <- row r * (other row s), masks only (sign left meaningless).
  void multiply_unsigned(std::size_t r, const PauliRows& other, std::size_t s) {
    std::uint64_t* a = x(r);
    const std::uint64_t* b = other.x(s);
    for (std::size_t w = 0; w < 2 * w_; ++w) a[w] ^= b[w];
  }

 private:
  std::size_t n_ = 0;
  std::size_t w_ = 0;
  std::vector<std::uint64_t> data_;
  std::vector<std::uint8_t> neg_;
};

}  // namespace lxe
