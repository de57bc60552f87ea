#include "mfh/dense_poly.hpp"

#include <algorithm>
#include <utility>

#include "mfh/error.hpp"
#include "mfh/padic.hpp"

namespace mfh {

DensePoly::DensePoly(std::int64_t modulus, std::vector<std::int64_t> coeffs)
    : modulus_(modulus), c_(std::move(coeffs)) {
  for (auto& x : c_) x = arith::mod(x, modulus_);
  trim();
}

DensePoly DensePoly::constant(std::int64_t modulus, std::int64_t c) {
  return DensePoly(modulus, {c});
}

DensePoly DensePoly::monomial(std::int64_t modulus, int degree, std::int64_t c) {
  std::vector<std::int64_t> v(degree + 1, 0);
  v[degree] = c;
  return DensePoly(modulus, std::move(v));
}

void DensePoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

DensePoly DensePoly::operator+(const DensePoly& o) const {
  std::vector<std::int64_t> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = (r[i] + o.c_[i]) % modulus_;
  return DensePoly(modulus_, std::move(r));
}

DensePoly DensePoly::operator-(const DensePoly& o) const { return *this + o.scaled(-1); }

DensePoly DensePoly::operator*(const DensePoly& o) const {
  if (is_zero() || o.is_zero()) return DensePoly(modulus_, {});
  std::vector<std::int64_t> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      r[i + j] = (r[i + j] + arith::mulmod(c_[i], o.c_[j], modulus_)) % modulus_;
  }
  return DensePoly(modulus_, std::move(r));
}

DensePoly DensePoly::scaled(std::int64_t c) const {
  std::vector<std::int64_t> r(c_);
  std::int64_t cc = arith::mod(c, modulus_);
  for (auto& x : r) x = arith::mulmod(x, cc, modulus_);
  return DensePoly(modulus_, std::move(r));
}

DensePoly DensePoly::shifted(int k) const {
  if (is_zero()) return *this;
  std::vector<std::int64_t> r(k, 0);
  r.insert(r.end(), c_.begin(), c_.end());
  return DensePoly(modulus_, std::move(r));
}

DensePoly DensePoly::pow(int e) const {
  DensePoly r = constant(modulus_, 1), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

DensePoly DensePoly::reduced(std::int64_t modulus) const { return DensePoly(modulus, c_); }

DensePoly DensePoly::inflate(int k) const {
  if (is_zero()) return *this;
  std::vector<std::int64_t> r((c_.size() - 1) * k + 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i * k] = c_[i];
  return DensePoly(modulus_, std::move(r));
}

std::int64_t DensePoly::eval(std::int64_t x) const {
  std::int64_t r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    r = (arith::mulmod(r, x, modulus_) + *it) % modulus_;
  return r;
}

void DensePoly::divmod_monic(const DensePoly& divisor, DensePoly& quotient,
                             DensePoly& remainder) const {
  if (!divisor.is_monic())
    throw Error(ErrorKind::InvalidInput, "division by a non-monic polynomial");
  std::vector<std::int64_t> r(c_);
  int dd = divisor.degree();
  if (degree() < dd) {
    quotient = DensePoly(modulus_, {});
    remainder = *this;
    return;
  }
  std::vector<std::int64_t> q(degree() - dd + 1, 0);
  for (int i = degree(); i >= dd; --i) {
    std::int64_t lead = r[i];
    if (lead == 0) continue;
    q[i - dd] = lead;
    for (int j = 0; j <= dd; ++j)
      r[i - dd + j] = arith::mod(r[i - dd + j] - arith::mulmod(lead, divisor.c_[j], modulus_),
                                 modulus_);
  }
  quotient = DensePoly(modulus_, std::move(q));
  remainder = DensePoly(modulus_, std::move(r));
}

bool DensePoly::divisible_by(const DensePoly& monic_divisor) const {
  DensePoly q, r;
  divmod_monic(monic_divisor, q, r);
  return r.is_zero();
}

DensePoly DensePoly::monic() const {
  if (is_zero()) return *this;
  return scaled(arith::invmod(leading(), modulus_));
}

DensePoly DensePoly::rem(const DensePoly& divisor) const {
  DensePoly q, r;
  divmod_monic(divisor.monic(), q, r);
  return r;
}

DensePoly DensePoly::quot(const DensePoly& divisor) const {
  DensePoly q, r;
  divmod_monic(divisor.monic(), q, r);
  return q.scaled(arith::invmod(divisor.leading(), modulus_));
}

DensePoly DensePoly::gcd(DensePoly a, DensePoly b) {
  while (!b.is_zero()) {
    DensePoly r = a.rem(b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

DensePoly DensePoly::xgcd(const DensePoly& a, const DensePoly& b, DensePoly& s, DensePoly& t) {
  std::int64_t n = a.modulus_;
  DensePoly r0 = a, r1 = b;
  DensePoly s0 = constant(n, 1), s1 = constant(n, 0);
  DensePoly t0 = constant(n, 0), t1 = constant(n, 1);
  while (!r1.is_zero()) {
    DensePoly q = r0.quot(r1);
    DensePoly r2 = r0 - q * r1;
    DensePoly s2 = s0 - q * s1;
    DensePoly t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) {
    s = s0;
    t = t0;
    return r0;
  }
  std::int64_t inv = arith::invmod(r0.leading(), n);
  s = s0.scaled(inv);
  t = t0.scaled(inv);
  return r0.scaled(inv);
}

DensePoly DensePoly::inverse_mod(const DensePoly& a, const DensePoly& m) {
  DensePoly s, t;
  DensePoly g = xgcd(a.rem(m), m, s, t);
  if (g.degree() != 0) throw Error(ErrorKind::NotAUnit, "polynomial not invertible modulo divisor");
  return s.rem(m);
}

bool DensePoly::is_irreducible() const {
  int d = degree();
  if (d < 1) return false;
  if (d == 1) return true;
  // Rabin-style test: no common factor with x^{p^i} - x for i <= d/2,
  // computed by repeated p-th powering modulo this polynomial.
  DensePoly f = monic();
  DensePoly x = monomial(modulus_, 1);
  DensePoly power = x;
  for (int i = 1; i <= d / 2; ++i) {
    DensePoly acc = constant(modulus_, 1), base = power;
    for (std::int64_t e = modulus_; e > 0; e >>= 1) {
      if (e & 1) acc = (acc * base).rem(f);
      base = (base * base).rem(f);
    }
    power = acc;
    if (gcd(power - x, f).degree() > 0) return false;
  }
  return true;
}

}  // namespace mfh
