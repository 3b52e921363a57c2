#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lxe {

inline constexpr std::size_t words_for(std::size_t n_sites) { return (n_sites + 63) / 64; }

namespace detail {

/// Phase exponent (mod 4, powers of i) picked up when multiplying site-wise
/// Paulis a*b, both written with Y = iXZ per site. Counts +1 and -1
/// contributions separately in parallel over one word.
inline int product_phase_word(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2,
                              std::uint64_t z2) {
  const std::uint64_t plus = (x1 & z1 & ~x2 & z2) | (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2);
  const std::uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2);
  return std::popcount(plus) - std::popcount(minus);
}

inline bool anticommute_words(const std::uint64_t* xa, const std::uint64_t* za,
                              const std::uint64_t* xb, const std::uint64_t* zb,
                              std::size_t words) {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words; ++w) acc ^= (xa[w] & zb[w]) ^ (za[w] & xb[w]);
  return std::popcount(acc) & 1;
}

/// In-place a <- a*b on raw words. Returns the phase exponent (mod 4) of the
/// product relative to the site-wise Paulis, not including either sign bit.
inline int multiply_words(std::uint64_t* xa, std::uint64_t* za, const std::uint64_t* xb,
                          const std::uint64_t* zb, std::size_t words) {
  int e = 0;
  for (std::size_t w = 0; w < words; ++w) {
    e += product_phase_word(xa[w], za[w], xb[w], zb[w]);
    xa[w] ^= xb[w];
    za[w] ^= zb[w];
  }
  return ((e % 4) + 4) % 4;
}

}  // namespace detail

/// Signed Pauli string on n sites. Bits (x_j, z_j) = (1, 1) denote Y_j, so
/// every stored operator is Hermitian and the only phase is the sign.
class PauliOperator {
 public:
  PauliOperator() = default;
  explicit PauliOperator(std::size_t n_sites)
      : n_(n_sites), x_(words_for(n_sites), 0), z_(words_for(n_sites), 0) {
    if (n_sites == 0) throw std::invalid_argument("PauliOperator: n_sites must be positive");
  }

  /// Parses strings like "+XIZ", "-YY", "X_Z" (leading sign optional, '_' or 'I' for identity).
  static PauliOperator parse(std::string_view text) {
    bool neg = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      neg = text.front() == '-';
      text.remove_prefix(1);
    }
    PauliOperator p(text.size());
    for (std::size_t j = 0; j < text.size(); ++j) {
      switch (text[j]) {
        case 'I': case '_': break;
        case 'X': p.set(j, true, false); break;
        case 'Y': p.set(j, true, true); break;
        case 'Z': p.set(j, false, true); break;
        default: throw std::invalid_argument("PauliOperator::parse: bad character in '" + std::string(text) + "'");
      }
    }
    p.neg_ = neg;
    return p;
  }

  static PauliOperator x_on(std::size_t n, std::initializer_list<std::size_t> sites) {
    PauliOperator p(n);
    for (auto s : sites) p.set_x(s, !p.x(s));
    return p;
  }
  static PauliOperator z_on(std::size_t n, std::initializer_list<std::size_t> sites) {
    PauliOperator p(n);
    for (auto s : sites) p.set_z(s, !p.z(s));
    return p;
  }
  static PauliOperator all_x(std::size_t n) {
    PauliOperator p(n);
    for (std::size_t j = 0; j < n; ++j) p.set_x(j, true);
    return p;
  }

  std::size_t n_sites() const { return n_; }
  std::size_t words() const { return x_.size(); }

  bool x(std::size_t j) const { return (x_[j / 64] >> (j % 64)) & 1; }
  bool z(std::size_t j) const { return (z_[j / 64] >> (j % 64)) & 1; }
  void set_x(std::size_t j, bool v) { set_bit(x_, j, v); }
  void set_z(std::size_t j, bool v) { set_bit(z_, j, v); }
  void set(std::size_t j, bool xv, bool zv) { set_x(j, xv); set_z(j, zv); }

  bool negative() const { return neg_; }
  int sign() const { return neg_ ? -1 : +1; }
  void set_sign(int s) { neg_ = s < 0; }
  void flip_sign() { neg_ = !neg_; }

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }
  std::span<std::uint64_t> x_words() { return x_; }
  std::span<std::uint64_t> z_words() { return z_; }

  bool is_identity() const {
    for (std::size_t w = 0; w < x_.size(); ++w)
      if (x_[w] | z_[w]) return false;
    return true;
  }
  bool x_empty() const {
    for (auto w : x_) if (w) return false;
    return true;
  }
  bool z_empty() const {
    for (auto w : z_) if (w) return false;
    return true;
  }
  std::size_t weight() const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < x_.size(); ++w) c += std::popcount(x_[w] | z_[w]);
    return c;
  }

  PauliOperator operator-() const {
    PauliOperator p = *this;
    p.neg_ = !p.neg_;
    return p;
  }

  bool same_masks(const PauliOperator& o) const { return n_ == o.n_ && x_ == o.x_ && z_ == o.z_; }
  friend bool operator==(const PauliOperator&, const PauliOperator&) = default;

  std::string to_string() const {
    std::string s(1, neg_ ? '-' : '+');
    for (std::size_t j = 0; j < n_; ++j) s += "IZXY"[(x(j) ? 2 : 0) + (z(j) ? 1 : 0)];
    return s;
  }

 private:
  static void set_bit(std::vector<std::uint64_t>& v, std::size_t j, bool b) {
    const std::uint64_t m = std::uint64_t{1} << (j % 64);
    if (b) v[j / 64] |= m; else v[j / 64] &= ~m;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> x_, z_;
  bool neg_ = false;
};

inline void require_same_size(const PauliOperator& a, const PauliOperator& b, const char* where) {
  if (a.n_sites() != b.n_sites())
    throw std::invalid_argument(std::string(where) + ": operators act on different numbers of sites");
}

/// True iff a*b == b*a.
inline bool commutes(const PauliOperator& a, const PauliOperator& b) {
  require_same_size(a, b, "commutes");
  return !detail::anticommute_words(a.x_words().data(), a.z_words().data(), b.x_words().data(),
                                    b.z_words().data(), a.words());
}

/// A Pauli string with a full i^k phase. Only used where non-Hermitian
/// intermediates are legitimate (building Clifford images, tests).
struct PhasedPauli {
  PauliOperator ops;  // sign bit of `ops` is ignored; the phase lives in `exponent`
  int exponent = 0;   // overall factor i^exponent

  static PhasedPauli from(const PauliOperator& p) {
    PhasedPauli r{p, p.negative() ? 2 : 0};
    r.ops.set_sign(+1);
    return r;
  }

  PhasedPauli& operator*=(const PhasedPauli& b) {
    exponent += b.exponent +
                detail::multiply_words(ops.x_words().data(), ops.z_words().data(),
                                       b.ops.x_words().data(), b.ops.z_words().data(), ops.words());
    exponent &= 3;
    return *this;
  }

  bool hermitian() const { return (exponent & 1) == 0; }

  PauliOperator to_hermitian() const {
    if (!hermitian()) throw std::domain_error("PhasedPauli: product is not Hermitian (factor of +-i)");
    PauliOperator p = ops;
    p.set_sign(exponent == 2 ? -1 : +1);
    return p;
  }
};

/// Product a*b. The result must be Hermitian, i.e. a and b must commute.
inline PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
  require_same_size(a, b, "multiply");
  PhasedPauli r = PhasedPauli::from(a);
  r *= PhasedPauli::from(b);
  return r.to_hermitian();
}

}  // namespace lxe
