#include "mfh/padic.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "mfh/error.hpp"

namespace mfh {

namespace arith {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t modulus) {
  std::int64_t r = a % modulus;
  return r < 0 ? r + modulus : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t modulus) {
  __int128 r = static_cast<__int128>(a) * b % modulus;
  if (r < 0) r += modulus;
  return static_cast<std::int64_t>(r);
}

std::int64_t invmod(std::int64_t a, std::int64_t modulus) {
  std::int64_t old_r = mod(a, modulus), r = modulus;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw Error(ErrorKind::NotAUnit, "scalar is not invertible");
  return mod(old_s, modulus);
}

int valuation(std::int64_t a, std::int64_t p) {
  int v = 0;
  while (a != 0 && a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

int legendre(std::int64_t k, std::int64_t p) {
  int v = 0;
  for (std::int64_t q = p; q <= k; q *= p) v += static_cast<int>(k / q);
  return v;
}

}  // namespace arith

PadicScalar::PadicScalar(int p, int precision, std::int64_t value) : p_(p), m_(precision) {
  if (p < 3 || !arith::is_prime(p))
    throw Error(ErrorKind::InvalidInput, "prime must be an odd prime, got " + std::to_string(p));
  if (precision < 1)
    throw Error(ErrorKind::PrecisionExhausted, "precision must be at least 1");
  modulus_ = arith::ipow(p, precision);
  value_ = arith::mod(value, modulus_);
}

int PadicScalar::valuation() const {
  return value_ == 0 ? m_ : arith::valuation(value_, p_);
}

PadicScalar PadicScalar::reduce(int precision) const {
  if (precision > m_)
    throw Error(ErrorKind::PrecisionTooLow, "cannot raise precision from " + std::to_string(m_) +
                                                " to " + std::to_string(precision));
  return PadicScalar(p_, precision, value_);
}

PadicScalar PadicScalar::inverse() const {
  return PadicScalar(p_, m_, arith::invmod(value_, modulus_));
}

void PadicScalar::check_compatible(const PadicScalar& o) const {
  if (p_ != o.p_) throw Error(ErrorKind::IncompatibleRings, "scalars over different primes");
}

PadicScalar PadicScalar::operator-() const { return PadicScalar(p_, m_, -value_); }

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  check_compatible(o);
  int m = std::min(m_, o.m_);
  return PadicScalar(p_, m, value_ + o.value_);
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const {
  check_compatible(o);
  int m = std::min(m_, o.m_);
  return PadicScalar(p_, m, value_ - o.value_);
}

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  check_compatible(o);
  int m = std::min(m_, o.m_);
  std::int64_t modulus = arith::ipow(p_, m);
  return PadicScalar(p_, m, arith::mulmod(value_ % modulus, o.value_ % modulus, modulus));
}

std::ostream& operator<<(std::ostream& os, const PadicScalar& x) {
  return os << x.value() << " (mod " << x.prime() << "^" << x.precision() << ")";
}

PadicScalar exact_div_pow(const PadicScalar& x, int i) {
  if (i < 0) throw Error(ErrorKind::InvalidInput, "negative exponent");
  if (i >= x.precision())
    throw Error(ErrorKind::PrecisionExhausted,
                "dividing by p^" + std::to_string(i) + " at precision " +
                    std::to_string(x.precision()));
  std::int64_t d = arith::ipow(x.prime(), i);
  if (x.value() % d != 0) {
    std::ostringstream msg;
    msg << x << " is not divisible by " << x.prime() << "^" << i;
    throw Error(ErrorKind::NotDivisible, msg.str());
  }
  return PadicScalar(x.prime(), x.precision() - i, x.value() / d);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty() || entries_.size() > 2)
    throw Error(ErrorKind::InvalidInput, "multi-index dimension must be 1 or 2");
  for (int e : entries_)
    if (e < 0) throw Error(ErrorKind::InvalidInput, "multi-index entries must be nonnegative");
}

int MultiIndex::total() const noexcept {
  int s = 0;
  for (int e : entries_) s += e;
  return s;
}

std::vector<MultiIndex> MultiIndex::with_total(int dim, int total) {
  std::vector<MultiIndex> out;
  if (dim == 1) {
    out.emplace_back(std::vector<int>{total});
  } else {
    for (int a = total; a >= 0; --a) out.emplace_back(std::vector<int>{a, total - a});
  }
  return out;
}

int ord_factorial(const MultiIndex& j, int p) {
  int v = 0;
  for (int e : j.entries()) v += arith::legendre(e, p);
  return v;
}

int ord_factorial_ratio(const MultiIndex& j, int p) { return j.total() - ord_factorial(j, p); }

PadicScalar factorial_inverse(const MultiIndex& j, int p) {
  std::int64_t f = 1;
  for (int e : j.entries()) {
    if (e >= p)
      throw Error(ErrorKind::FactorialNotInvertible,
                  "entry " + std::to_string(e) + " >= p = " + std::to_string(p));
    for (int k = 2; k <= e; ++k) f = f * k % p;
  }
  return PadicScalar(p, 1, arith::invmod(f, p));
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::FactorialNotInvertible: return "FactorialNotInvertible";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::NegativeExponentOnUninverted: return "NegativeExponentOnUninverted";
    case ErrorKind::NonInvertibleImage: return "NonInvertibleImage";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::IncompatibleRings: return "IncompatibleRings";
    case ErrorKind::InvalidRing: return "InvalidRing";
    case ErrorKind::DenominatorCapExceeded: return "DenominatorCapExceeded";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidLifting: return "InvalidLifting";
    case ErrorKind::WeightOverflow: return "WeightOverflow";
    case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::ThetaUnstable: return "ThetaUnstable";
    case ErrorKind::StrongDivisibilityFailure: return "StrongDivisibilityFailure";
    case ErrorKind::HorizontalityViolation: return "HorizontalityViolation";
    case ErrorKind::GluingMismatch: return "GluingMismatch";
    case ErrorKind::NotPCurvatureZero: return "NotPCurvatureZero";
    case ErrorKind::DegreeBoundExceeded: return "DegreeBoundExceeded";
    case ErrorKind::NotHorizontal: return "NotHorizontal";
    case ErrorKind::DescentFailure: return "DescentFailure";
    case ErrorKind::NilpotencyTooDeep: return "NilpotencyTooDeep";
    case ErrorKind::MissingLifting: return "MissingLifting";
    case ErrorKind::FixtureError: return "FixtureError";
  }
  return "Unknown";
}

}  // namespace mfh
