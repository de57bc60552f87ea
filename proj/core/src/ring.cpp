#include "mfh/ring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfh/error.hpp"

namespace mfh {

namespace {

DensePoly integer_poly(const std::vector<std::int64_t>& raw, std::int64_t modulus) {
  return DensePoly(modulus, raw);
}

Exponent add_exp(const Exponent& a, const Exponent& b) { return {a[0] + b[0], a[1] + b[1]}; }

// Multiply a Laurent numerator by a dense polynomial in variable 0.
RingElement::Terms times_dense(const RingElement::Terms& terms, const DensePoly& d,
                               std::int64_t modulus) {
  RingElement::Terms out;
  for (const auto& [e, c] : terms) {
    for (int i = 0; i <= d.degree(); ++i) {
      if (d.coeff(i) == 0) continue;
      Exponent f{e[0] + i, e[1]};
      auto& slot = out[f];
      slot = (slot + arith::mulmod(c, d.coeff(i), modulus)) % modulus;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- ChartRing

RingPtr ChartRing::make(int p, int precision, std::vector<std::string> vars,
                        std::vector<bool> inverted,
                        std::vector<std::vector<std::int64_t>> denominators, int denominator_cap) {
  if (p < 3 || !arith::is_prime(p))
    throw Error(ErrorKind::InvalidRing, "p must be an odd prime, got " + std::to_string(p));
  if (precision < 1) throw Error(ErrorKind::InvalidRing, "precision must be at least 1");
  if (vars.empty() || vars.size() > 2)
    throw Error(ErrorKind::UnsupportedDimension, "chart rings have 1 or 2 variables");
  if (inverted.size() != vars.size())
    throw Error(ErrorKind::InvalidRing, "inversion flags must match variables");
  if (vars.size() == 2 && vars[0] == vars[1])
    throw Error(ErrorKind::InvalidRing, "duplicate variable name");
  if (vars.size() == 2 && !denominators.empty())
    throw Error(ErrorKind::UnsupportedDimension,
                "polynomial denominators are only supported in dimension 1");
  double log_modulus = precision * std::log2(static_cast<double>(p));
  if (log_modulus > 61) throw Error(ErrorKind::InvalidRing, "p^m exceeds 61 bits");

  auto ring = std::shared_ptr<ChartRing>(new ChartRing());
  ring->p_ = p;
  ring->m_ = precision;
  ring->modulus_ = arith::ipow(p, precision);
  ring->vars_ = std::move(vars);
  ring->inverted_ = std::move(inverted);
  ring->cap_ = denominator_cap;

  std::vector<DensePoly> mod_p;
  for (auto& raw : denominators) {
    DensePoly d = integer_poly(raw, ring->modulus_);
    if (!d.is_monic() || d.degree() < 1)
      throw Error(ErrorKind::InvalidRing, "denominator " + render_dense(d, ring->vars_[0]) +
                                              " must be monic and nonconstant");
    DensePoly dp = integer_poly(raw, p);
    if (!dp.is_irreducible())
      throw Error(ErrorKind::InvalidRing,
                  "denominator " + render_dense(dp, ring->vars_[0]) + " is reducible mod p");
    if (dp.degree() == 1 && dp.coeff(0) == 0)
      throw Error(ErrorKind::InvalidRing, "invert the variable itself instead of listing it");
    for (const auto& other : mod_p)
      if (DensePoly::gcd(other, dp).degree() > 0)
        throw Error(ErrorKind::InvalidRing, "denominators must be pairwise coprime mod p");
    mod_p.push_back(dp);
    ring->raw_dens_.push_back(raw);
    ring->denominators_.push_back(std::move(d));
  }
  return ring;
}

std::optional<int> ChartRing::var_index(std::string_view name) const {
  for (int l = 0; l < dim(); ++l)
    if (vars_[l] == name) return l;
  return std::nullopt;
}

RingPtr ChartRing::with_precision(int precision) const {
  if (precision == m_) return shared_from_this();
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (auto it = variants_.find(precision); it != variants_.end())
    if (auto r = it->second.lock()) return r;
  RingPtr r = make(p_, precision, vars_, inverted_, raw_dens_, cap_);
  variants_[precision] = r;
  return r;
}

RingPtr ChartRing::with_inverted(std::vector<bool> inverted,
                                 std::vector<std::vector<std::int64_t>> extra) const {
  auto dens = raw_dens_;
  for (auto& d : extra) {
    DensePoly dd(modulus_, d);
    if (!find_denominator(dd)) dens.push_back(std::move(d));
  }
  for (int l = 0; l < dim(); ++l) inverted[l] = inverted[l] || inverted_[l];
  return make(p_, m_, vars_, std::move(inverted), std::move(dens), cap_);
}

bool ChartRing::same_as(const ChartRing& o) const {
  if (p_ != o.p_ || m_ != o.m_ || vars_ != o.vars_ || inverted_ != o.inverted_) return false;
  if (denominators_.size() != o.denominators_.size()) return false;
  for (std::size_t k = 0; k < denominators_.size(); ++k)
    if (!(denominators_[k] == o.denominators_[k])) return false;
  return true;
}

std::optional<int> ChartRing::find_denominator(const DensePoly& d) const {
  DensePoly dd = d.reduced(modulus_);
  for (int k = 0; k < num_denominators(); ++k)
    if (denominators_[k] == dd) return k;
  return std::nullopt;
}

bool ChartRing::embeds_into(const ChartRing& o) const {
  if (p_ != o.p_ || m_ != o.m_ || vars_ != o.vars_) return false;
  for (int l = 0; l < dim(); ++l)
    if (inverted_[l] && !o.inverted_[l]) return false;
  for (const auto& d : denominators_)
    if (!o.find_denominator(d)) return false;
  return true;
}

std::string ChartRing::describe() const {
  std::ostringstream os;
  os << "Z/" << p_;
  if (m_ > 1) os << "^" << m_;
  os << "[";
  bool first = true;
  for (int l = 0; l < dim(); ++l) {
    os << (first ? "" : ", ") << vars_[l];
    first = false;
  }
  for (int l = 0; l < dim(); ++l)
    if (inverted_[l]) os << ", " << vars_[l] << "^-1";
  for (const auto& d : denominators_) os << ", (" << render_dense(d, vars_[0]) << ")^-1";
  os << "]";
  return os.str();
}

// -------------------------------------------------------------- RingElement

RingElement::RingElement(RingPtr ring) : ring_(std::move(ring)), den_(ring_->num_denominators(), 0) {}

RingElement::RingElement(RingPtr ring, Terms numerator, std::vector<int> den)
    : ring_(std::move(ring)), num_(std::move(numerator)), den_(std::move(den)) {
  if (den_.empty()) den_.assign(ring_->num_denominators(), 0);
  if (static_cast<int>(den_.size()) != ring_->num_denominators())
    throw Error(ErrorKind::InvalidInput, "denominator exponent vector has wrong length");
  for (auto& [e, c] : num_) {
    c = arith::mod(c, ring_->modulus());
    for (int l = 0; l < 2; ++l) {
      if (l >= ring_->dim() && e[l] != 0)
        throw Error(ErrorKind::InvalidInput, "exponent on a nonexistent variable");
      if (l < ring_->dim() && e[l] < 0 && !ring_->is_inverted(l))
        throw Error(ErrorKind::NegativeExponentOnUninverted,
                    "negative power of " + ring_->var(l) + " in " + ring_->describe());
    }
  }
  for (int e : den_)
    if (e < 0) throw Error(ErrorKind::InvalidInput, "negative denominator exponent");
  normalize();
}

RingElement RingElement::constant(RingPtr ring, std::int64_t c) {
  return RingElement(std::move(ring), Terms{{Exponent{0, 0}, c}});
}

RingElement RingElement::variable(RingPtr ring, int l) {
  Exponent e{0, 0};
  e[l] = 1;
  return RingElement(std::move(ring), Terms{{e, 1}});
}

RingElement RingElement::monomial(RingPtr ring, Exponent e, std::int64_t c) {
  return RingElement(std::move(ring), Terms{{e, c}});
}

RingElement RingElement::inverse_denominator(RingPtr ring, int k, int mult) {
  std::vector<int> den(ring->num_denominators(), 0);
  den[k] = mult;
  return RingElement(std::move(ring), Terms{{Exponent{0, 0}, 1}}, std::move(den));
}

RingElement RingElement::from_dense(RingPtr ring, const DensePoly& poly, int shift) {
  Terms t;
  for (int i = 0; i <= poly.degree(); ++i)
    if (poly.coeff(i) != 0) t[Exponent{i + shift, 0}] = poly.coeff(i);
  return RingElement(std::move(ring), std::move(t));
}

bool RingElement::has_denominators() const noexcept {
  return std::any_of(den_.begin(), den_.end(), [](int e) { return e > 0; });
}

std::optional<std::int64_t> RingElement::as_constant() const {
  if (has_denominators()) return std::nullopt;
  if (num_.empty()) return 0;
  if (num_.size() == 1 && num_.begin()->first == Exponent{0, 0}) return num_.begin()->second;
  return std::nullopt;
}

PadicScalar RingElement::coefficient(const Exponent& e) const {
  auto it = num_.find(e);
  return PadicScalar(ring_->prime(), ring_->precision(), it == num_.end() ? 0 : it->second);
}

int RingElement::min_exponent(int l) const {
  int r = 0;
  bool first = true;
  for (const auto& [e, c] : num_) {
    r = first ? e[l] : std::min(r, e[l]);
    first = false;
  }
  return r;
}

int RingElement::max_exponent(int l) const {
  int r = 0;
  bool first = true;
  for (const auto& [e, c] : num_) {
    r = first ? e[l] : std::max(r, e[l]);
    first = false;
  }
  return r;
}

void RingElement::normalize() {
  const std::int64_t n = ring_->modulus();
  for (auto it = num_.begin(); it != num_.end();) {
    it->second = arith::mod(it->second, n);
    it = it->second == 0 ? num_.erase(it) : std::next(it);
  }
  if (num_.empty()) {
    std::fill(den_.begin(), den_.end(), 0);
    return;
  }
  for (int k = 0; k < ring_->num_denominators(); ++k) {
    if (den_[k] > ring_->denominator_cap())
      throw Error(ErrorKind::DenominatorCapExceeded,
                  "denominator multiplicity " + std::to_string(den_[k]) + " exceeds cap");
    while (den_[k] > 0) {
      int shift = min_exponent(0);
      std::vector<std::int64_t> coeffs(max_exponent(0) - shift + 1, 0);
      for (const auto& [e, c] : num_) coeffs[e[0] - shift] = c;
      DensePoly num(n, std::move(coeffs)), q, r;
      num.divmod_monic(ring_->denominator(k), q, r);
      if (!r.is_zero()) break;
      Terms t;
      for (int i = 0; i <= q.degree(); ++i)
        if (q.coeff(i) != 0) t[Exponent{i + shift, 0}] = q.coeff(i);
      num_ = std::move(t);
      --den_[k];
    }
  }
}

void RingElement::check_same_ring(const RingElement& o) const {
  if (!same_ring(ring_, o.ring_))
    throw Error(ErrorKind::IncompatibleRings,
                "operands in " + ring_->describe() + " and " + o.ring_->describe());
}

RingElement RingElement::operator-() const {
  Terms t(num_);
  for (auto& [e, c] : t) c = ring_->modulus() - c;
  return RingElement(ring_, std::move(t), den_);
}

RingElement RingElement::operator+(const RingElement& o) const {
  check_same_ring(o);
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  const std::int64_t n = ring_->modulus();
  if (den_ == o.den_) {
    Terms t(num_);
    for (const auto& [e, c] : o.num_) t[e] = (t[e] + c) % n;
    return RingElement(ring_, std::move(t), den_);
  }
  std::vector<int> common(den_.size());
  Terms a(num_), b(o.num_);
  for (std::size_t k = 0; k < den_.size(); ++k) {
    common[k] = std::max(den_[k], o.den_[k]);
    const DensePoly& d = ring_->denominator(static_cast<int>(k));
    if (common[k] > den_[k]) a = times_dense(a, d.pow(common[k] - den_[k]), n);
    if (common[k] > o.den_[k]) b = times_dense(b, d.pow(common[k] - o.den_[k]), n);
  }
  for (const auto& [e, c] : b) a[e] = (a[e] + c) % n;
  return RingElement(ring_, std::move(a), std::move(common));
}

RingElement RingElement::operator-(const RingElement& o) const { return *this + (-o); }

RingElement RingElement::operator*(const RingElement& o) const {
  check_same_ring(o);
  if (is_zero() || o.is_zero()) return RingElement(ring_);
  const std::int64_t n = ring_->modulus();
  Terms t;
  for (const auto& [e1, c1] : num_)
    for (const auto& [e2, c2] : o.num_) {
      auto& slot = t[add_exp(e1, e2)];
      slot = (slot + arith::mulmod(c1, c2, n)) % n;
    }
  std::vector<int> den(den_.size());
  for (std::size_t k = 0; k < den.size(); ++k) den[k] = den_[k] + o.den_[k];
  return RingElement(ring_, std::move(t), std::move(den));
}

RingElement RingElement::scaled(std::int64_t c) const {
  const std::int64_t n = ring_->modulus();
  std::int64_t cc = arith::mod(c, n);
  Terms t(num_);
  for (auto& [e, v] : t) v = arith::mulmod(v, cc, n);
  return RingElement(ring_, std::move(t), den_);
}

RingElement RingElement::pow(int e) const {
  if (e < 0) {
    auto inv = inverse();
    if (!inv) throw Error(ErrorKind::NotAUnit, to_string() + " is not a unit");
    return inv->pow(-e);
  }
  RingElement r = constant(ring_, 1), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

bool RingElement::operator==(const RingElement& o) const {
  return same_ring(ring_, o.ring_) && num_ == o.num_ && den_ == o.den_;
}

RingElement RingElement::derivative(int l) const {
  const std::int64_t n = ring_->modulus();
  Terms t;
  for (const auto& [e, c] : num_) {
    if (e[l] == 0) continue;
    Exponent f = e;
    --f[l];
    t[f] = arith::mulmod(c, arith::mod(e[l], n), n);
  }
  RingElement result(ring_, std::move(t), den_);
  // d/dt d_k^{-e} = -e d_k' d_k^{-e-1}
  for (int k = 0; k < ring_->num_denominators(); ++k) {
    if (den_[k] == 0) continue;
    std::vector<int> den(den_);
    ++den[k];
    const DensePoly& d = ring_->denominator(k);
    std::vector<std::int64_t> dd;
    for (int i = 1; i <= d.degree(); ++i) dd.push_back(arith::mulmod(d.coeff(i), i, n));
    Terms scaled_num = times_dense(num_, DensePoly(n, dd), n);
    result += RingElement(ring_, std::move(scaled_num), std::move(den)).scaled(-den_[k]);
  }
  return result;
}

RingElement RingElement::substitute(const std::vector<RingElement>& images) const {
  if (static_cast<int>(images.size()) != ring_->dim())
    throw Error(ErrorKind::InvalidInput, "substitution needs one image per variable");
  const RingPtr& target = images[0].ring();
  for (const auto& img : images) {
    if (!same_ring(img.ring(), target))
      throw Error(ErrorKind::IncompatibleRings, "substitution images in different rings");
  }
  if (target->prime() != ring_->prime() || target->precision() > ring_->precision())
    throw Error(ErrorKind::IncompatibleRings, "substitution target has incompatible coefficients");

  std::vector<std::optional<RingElement>> inverses(images.size());
  for (std::size_t l = 0; l < images.size(); ++l) {
    if (ring_->is_inverted(static_cast<int>(l))) {
      inverses[l] = images[l].inverse();
      if (!inverses[l])
        throw Error(ErrorKind::NonInvertibleImage,
                    "image " + images[l].to_string() + " of inverted " + ring_->var(l) +
                        " is not a unit");
    }
  }
  std::vector<std::map<int, RingElement>> powers(images.size());
  auto power = [&](int l, int e) -> const RingElement& {
    auto it = powers[l].find(e);
    if (it != powers[l].end()) return it->second;
    RingElement v = e >= 0 ? images[l].pow(e) : inverses[l]->pow(-e);
    return powers[l].emplace(e, std::move(v)).first->second;
  };
  RingElement out(target);
  for (const auto& [e, c] : num_) {
    RingElement term = constant(target, c);
    for (int l = 0; l < ring_->dim(); ++l)
      if (e[l] != 0) term = term * power(l, e[l]);
    out += term;
  }
  for (int k = 0; k < ring_->num_denominators(); ++k) {
    if (den_[k] == 0) continue;
    const DensePoly& d = ring_->denominator(k);
    RingElement dimg(target);
    for (int i = d.degree(); i >= 0; --i) dimg = dimg * images[0] + constant(target, d.coeff(i));
    auto inv = dimg.inverse();
    if (!inv)
      throw Error(ErrorKind::NonInvertibleImage,
                  "image of inverted denominator " + render_dense(d, ring_->var(0)) +
                      " is not a unit");
    out = out * inv->pow(den_[k]);
  }
  return out;
}

RingElement RingElement::include_into(const RingPtr& target) const {
  if (same_ring(ring_, target)) return RingElement(target, num_, den_);
  if (!ring_->embeds_into(*target))
    throw Error(ErrorKind::IncompatibleRings,
                ring_->describe() + " does not embed into " + target->describe());
  RingElement out(target, num_);
  for (int k = 0; k < ring_->num_denominators(); ++k) {
    if (den_[k] == 0) continue;
    int kk = *target->find_denominator(ring_->denominator(k));
    out = out * inverse_denominator(target, kk, den_[k]);
  }
  return out;
}

RingElement RingElement::reduce_precision(int precision) const {
  if (precision > ring_->precision())
    throw Error(ErrorKind::PrecisionTooLow, "cannot raise precision");
  RingPtr target = precision == ring_->precision() ? ring_ : ring_->with_precision(precision);
  return RingElement(target, num_, den_);
}

bool RingElement::divisible_by_p_power(int i) const {
  if (i >= ring_->precision()) return is_zero();
  std::int64_t d = arith::ipow(ring_->prime(), i);
  return std::all_of(num_.begin(), num_.end(), [&](const auto& kv) { return kv.second % d == 0; });
}

RingElement RingElement::divide_by_p_power(int i) const {
  if (i == 0) return *this;
  if (i >= ring_->precision())
    throw Error(ErrorKind::PrecisionExhausted, "dividing by p^" + std::to_string(i) +
                                                   " at precision " +
                                                   std::to_string(ring_->precision()));
  if (!divisible_by_p_power(i))
    throw Error(ErrorKind::NotDivisible,
                to_string() + " is not divisible by p^" + std::to_string(i));
  std::int64_t d = arith::ipow(ring_->prime(), i);
  Terms t;
  for (const auto& [e, c] : num_) t[e] = c / d;
  return RingElement(ring_->with_precision(ring_->precision() - i), std::move(t), den_);
}

RingElement RingElement::times_p_power_into(int k, const RingPtr& target) const {
  if (target->precision() != ring_->precision() + k || !target->with_precision(ring_->precision())->same_as(*ring_))
    throw Error(ErrorKind::IncompatibleRings, "times_p_power_into: target ring mismatch");
  std::int64_t d = arith::ipow(ring_->prime(), k);
  // The numerator is only defined modulo p^m; after multiplying by p^k the
  // denominators must be re-applied in the finer ring.
  Terms t;
  for (const auto& [e, c] : num_) t[e] = c * d;
  return RingElement(target, std::move(t), den_);
}

RingElement RingElement::frobenius() const {
  if (ring_->precision() != 1)
    throw Error(ErrorKind::InvalidInput, "absolute Frobenius is defined on mod-p elements");
  std::vector<RingElement> images;
  for (int l = 0; l < ring_->dim(); ++l)
    images.push_back(monomial(ring_, l == 0 ? Exponent{ring_->prime(), 0} : Exponent{0, ring_->prime()}));
  return substitute(images);
}

std::optional<RingElement> RingElement::inverse() const {
  if (is_zero()) return std::nullopt;
  const int p = ring_->prime();
  RingElement f0 = reduce_precision(1);
  if (f0.is_zero()) return std::nullopt;
  RingPtr R = ring_;
  // Factor f mod p as c * monomial * prod d_k^{b_k} / prod d_k^{e_k}.
  Exponent mono{0, 0};
  std::int64_t c = 0;
  std::vector<int> den(ring_->num_denominators(), 0);
  if (ring_->dim() == 2) {
    if (f0.num_.size() != 1) return std::nullopt;
    mono = f0.num_.begin()->first;
    c = f0.num_.begin()->second;
    for (int l = 0; l < 2; ++l)
      if (mono[l] > 0 && !ring_->is_inverted(l)) return std::nullopt;
  } else {
    DenseNumerator dn = dense_numerator(f0);
    if (dn.shift != 0 && !ring_->is_inverted(0)) return std::nullopt;
    mono[0] = dn.shift;
    DensePoly rest = dn.poly;
    for (int k = 0; k < ring_->num_denominators(); ++k) {
      DensePoly dk = ring_->denominator(k).reduced(p);
      int b = 0;
      while (rest.degree() >= dk.degree() && rest.divisible_by(dk)) {
        rest = rest.quot(dk);
        ++b;
      }
      den[k] = f0.den_[k] - b;
    }
    if (rest.degree() != 0) return std::nullopt;
    c = rest.coeff(0);
  }
  // v = c^{-1} * mono^{-1} * prod d_k^{e_k - b_k}, lifted to precision m.
  std::int64_t cinv = arith::invmod(c, ring_->modulus());
  RingElement v = monomial(R, Exponent{-mono[0], -mono[1]}, cinv);
  for (int k = 0; k < ring_->num_denominators(); ++k) {
    if (den[k] > 0)
      v = v * from_dense(R, ring_->denominator(k).pow(den[k]));
    else if (den[k] < 0)
      v = v * inverse_denominator(R, k, -den[k]);
  }
  RingElement x = (*this) * v - constant(R, 1);
  if (!x.divisible_by_p_power(1))
    throw Error(ErrorKind::InvalidInput, "internal: unit lift is not congruent to 1");
  RingElement acc = constant(R, 1), term = constant(R, 1), negx = -x;
  for (int j = 1; j < ring_->precision(); ++j) {
    term = term * negx;
    acc += term;
  }
  return v * acc;
}

// -------------------------------------------------------- unit_check etc.

DenseNumerator dense_numerator(const RingElement& f) {
  const RingPtr& R = f.ring();
  if (R->dim() != 1) throw Error(ErrorKind::UnsupportedDimension, "dense numerator needs dimension 1");
  DenseNumerator out;
  if (f.is_zero()) {
    out.poly = DensePoly(R->modulus(), {});
    return out;
  }
  int lo = f.min_exponent(0);
  std::vector<std::int64_t> coeffs(f.max_exponent(0) - lo + 1, 0);
  for (const auto& [e, c] : f.numerator()) coeffs[e[0] - lo] = c;
  out.poly = DensePoly(R->modulus(), std::move(coeffs));
  out.shift = lo;
  return out;
}

UnitCheck unit_check(const RingElement& f) {
  if (f.ring()->precision() != 1)
    throw Error(ErrorKind::InvalidInput, "unit_check expects a precision-1 element");
  if (f.is_zero()) throw Error(ErrorKind::ZeroElement, "unit_check of zero");
  UnitCheck out;
  out.inverse = f.inverse();
  out.unit = out.inverse.has_value();
  return out;
}

int ord_at(const RingElement& f, const Place& place) {
  const RingPtr& R = f.ring();
  if (R->dim() != 1) throw Error(ErrorKind::UnsupportedDimension, "ord_at needs dimension 1");
  if (f.is_zero()) throw Error(ErrorKind::ZeroElement, "order of zero");
  RingElement f0 = f.reduce_precision(1);
  if (f0.is_zero()) throw Error(ErrorKind::ZeroElement, "element vanishes mod p");
  DenseNumerator dn = dense_numerator(f0);
  const int p = R->prime();
  if (!place.irreducible) {
    int deg = dn.shift + dn.poly.degree();
    for (int k = 0; k < R->num_denominators(); ++k)
      deg -= f0.denominator_exponents()[k] * R->denominator(k).degree();
    return -deg;
  }
  DensePoly q = place.irreducible->reduced(p).monic();
  if (q.degree() == 1 && q.coeff(0) == 0) {
    int ord = dn.shift;
    DensePoly rest = dn.poly;
    while (rest.coeff(0) == 0 && !rest.is_zero()) {
      rest = rest.quot(q);
      ++ord;
    }
    return ord;
  }
  int ord = 0;
  DensePoly rest = dn.poly;
  while (rest.divisible_by(q)) {
    rest = rest.quot(q);
    ++ord;
  }
  for (int k = 0; k < R->num_denominators(); ++k)
    if (R->denominator(k).reduced(p) == q) ord -= f0.denominator_exponents()[k];
  return ord;
}

}  // namespace mfh
