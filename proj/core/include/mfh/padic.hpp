#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace mfh {

/// Integer arithmetic helpers for Z/p^m with p^m < 2^62.
namespace arith {

bool is_prime(std::int64_t n);
std::int64_t ipow(std::int64_t base, int exp);
std::int64_t mod(std::int64_t a, std::int64_t modulus);
std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t modulus);
/// Inverse of a modulo p^m; `a` must be prime to p.
std::int64_t invmod(std::int64_t a, std::int64_t modulus);
/// ord_p(a) for a != 0.
int valuation(std::int64_t a, std::int64_t p);
/// ord_p(k!) by Legendre's formula.
int legendre(std::int64_t k, std::int64_t p);

}  // namespace arith

/// A residue in Z/p^m, i.e. an element of W_m(F_p), carrying its precision.
///
/// Binary operations require a common prime; the result lives at the
/// smaller of the two precisions. Precision is never raised.
class PadicScalar {
 public:
  PadicScalar(int p, int precision, std::int64_t value);

  int prime() const noexcept { return p_; }
  int precision() const noexcept { return m_; }
  std::int64_t value() const noexcept { return value_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  bool is_zero() const noexcept { return value_ == 0; }
  bool is_unit() const noexcept { return value_ % p_ != 0; }
  /// ord_p of the representative, or `precision()` for zero.
  int valuation() const;

  PadicScalar reduce(int precision) const;
  PadicScalar inverse() const;

  PadicScalar operator-() const;
  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;

  bool operator==(const PadicScalar& o) const noexcept {
    return p_ == o.p_ && m_ == o.m_ && value_ == o.value_;
  }

 private:
  void check_compatible(const PadicScalar& o) const;

  int p_;
  int m_;
  std::int64_t modulus_;
  std::int64_t value_;
};

std::ostream& operator<<(std::ostream& os, const PadicScalar& x);

/// The preimage of x under multiplication by p^i: the unique y at
/// precision m - i with p^i * y == x. Throws NotDivisible or
/// PrecisionExhausted.
PadicScalar exact_div_pow(const PadicScalar& x, int i);

/// A multi-index (j_1, ..., j_d) with d in {1, 2}.
class MultiIndex {
 public:
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<int> entries);

  const std::vector<int>& entries() const noexcept { return entries_; }
  int dim() const noexcept { return static_cast<int>(entries_.size()); }
  int operator[](int l) const { return entries_[l]; }
  int total() const noexcept;

  /// All multi-indices of the given dimension with |j| == total,
  /// ordered lexicographically.
  static std::vector<MultiIndex> with_total(int dim, int total);

 private:
  std::vector<int> entries_;
};

/// ord_p(j!) = sum of ord_p(j_l!).
int ord_factorial(const MultiIndex& j, int p);
/// ord_p(p^{|j|} / j!).
int ord_factorial_ratio(const MultiIndex& j, int p);
/// (j!)^{-1} mod p. Throws FactorialNotInvertible if some entry is >= p.
PadicScalar factorial_inverse(const MultiIndex& j, int p);

}  // namespace mfh
