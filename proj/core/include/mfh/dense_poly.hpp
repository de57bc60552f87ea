#pragma once

#include <cstdint>
#include <vector>

namespace mfh {

/// Dense univariate polynomial over Z/N, coefficients in [0, N), lowest
/// degree first, no trailing zeros. Division is by monic divisors only;
/// gcd and inverse-mod require N prime.
class DensePoly {
 public:
  DensePoly() = default;
  DensePoly(std::int64_t modulus, std::vector<std::int64_t> coeffs);

  static DensePoly constant(std::int64_t modulus, std::int64_t c);
  static DensePoly monomial(std::int64_t modulus, int degree, std::int64_t c = 1);

  std::int64_t modulus() const noexcept { return modulus_; }
  const std::vector<std::int64_t>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::int64_t coeff(int i) const { return i < static_cast<int>(c_.size()) && i >= 0 ? c_[i] : 0; }
  std::int64_t leading() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

  DensePoly operator+(const DensePoly& o) const;
  DensePoly operator-(const DensePoly& o) const;
  DensePoly operator*(const DensePoly& o) const;
  DensePoly scaled(std::int64_t c) const;
  DensePoly shifted(int k) const;  ///< multiply by x^k, k >= 0
  DensePoly pow(int e) const;
  DensePoly reduced(std::int64_t modulus) const;
  /// Composition with x -> x^k.
  DensePoly inflate(int k) const;
  std::int64_t eval(std::int64_t x) const;

  bool operator==(const DensePoly& o) const noexcept {
    return modulus_ == o.modulus_ && c_ == o.c_;
  }

  /// Quotient and remainder by a monic divisor.
  void divmod_monic(const DensePoly& divisor, DensePoly& quotient, DensePoly& remainder) const;
  bool divisible_by(const DensePoly& monic_divisor) const;

  // The remaining operations assume the modulus is prime.
  DensePoly monic() const;
  DensePoly rem(const DensePoly& divisor) const;
  DensePoly quot(const DensePoly& divisor) const;
  static DensePoly gcd(DensePoly a, DensePoly b);
  /// Returns g = gcd(a, b) (monic) and fills s, t with s a + t b = g.
  static DensePoly xgcd(const DensePoly& a, const DensePoly& b, DensePoly& s, DensePoly& t);
  /// Inverse of a modulo m; requires gcd(a, m) = 1.
  static DensePoly inverse_mod(const DensePoly& a, const DensePoly& m);
  bool is_irreducible() const;

 private:
  void trim();

  std::int64_t modulus_ = 1;
  std::vector<std::int64_t> c_;
};

}  // namespace mfh
