#include "mfh/submodule.hpp"

#include <numeric>
#include <sstream>

#include "mfh/error.hpp"

namespace mfh {

namespace {

void require_pid(const RingPtr& ring) {
  if (ring->dim() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "submodule algebra needs a one-dimensional ring");
  if (ring->precision() != 1)
    throw Error(ErrorKind::InvalidInput, "submodule algebra works over mod-p rings");
}

void require_same_ambient(const Submodule& a, const Submodule& b) {
  if (!same_ring(a.ring(), b.ring()) || a.ambient_rank() != b.ambient_rank())
    throw Error(ErrorKind::AmbientMismatch, "submodules of different ambient modules");
}

int norm(const RingElement& x) { return split_core(x).core.degree(); }

Vec axpy(const Vec& v, const RingElement& c, const Vec& w) {
  // v - c w
  Vec out(v);
  if (c.is_zero()) return out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!w[i].is_zero()) out[i] -= c * w[i];
  return out;
}

struct Echelon {
  std::vector<Vec> pivots;
  std::vector<int> pivot_rows;
  std::vector<Vec> rest;  // zero on every processed row
};

// Column echelon on the first `rows` coordinates.
Echelon echelon(const RingPtr& ring, std::vector<Vec> cols, int rows) {
  Echelon out;
  std::vector<Vec> remaining;
  for (auto& c : cols)
    if (!is_zero(c)) remaining.push_back(std::move(c));
  for (int i = 0; i < rows; ++i) {
    for (;;) {
      std::vector<std::size_t> live;
      for (std::size_t k = 0; k < remaining.size(); ++k)
        if (!remaining[k][i].is_zero()) live.push_back(k);
      if (live.empty()) break;
      std::size_t best = live[0];
      int best_norm = norm(remaining[best][i]);
      for (std::size_t k : live) {
        int nk = norm(remaining[k][i]);
        if (nk < best_norm) {
          best = k;
          best_norm = nk;
        }
      }
      if (live.size() == 1) {
        Vec piv = std::move(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        CoreSplit cs = split_core(piv[i]);
        piv = scale(*cs.unit.inverse(), piv);
        out.pivots.push_back(std::move(piv));
        out.pivot_rows.push_back(i);
        break;
      }
      const RingElement b = remaining[best][i];
      DensePoly s = split_core(b).core;
      for (std::size_t k : live) {
        if (k == best) continue;
        const RingElement& a = remaining[k][i];
        RingElement r = RingElement::from_dense(ring, residue_mod(a, s));
        RingElement q = divide_exact(a - r, b);
        remaining[k] = axpy(remaining[k], q, remaining[best]);
      }
    }
  }
  for (auto& c : remaining)
    if (!is_zero(c)) out.rest.push_back(std::move(c));
  return out;
}

// Reduce entries left of each pivot to canonical residues.
void reduce(const RingPtr& ring, std::vector<Vec>& piv, const std::vector<int>& rows) {
  for (std::size_t k = 0; k < piv.size(); ++k) {
    const RingElement pe = piv[k][rows[k]];
    DensePoly s = split_core(pe).core;
    for (std::size_t j = 0; j < k; ++j) {
      const RingElement& e = piv[j][rows[k]];
      if (e.is_zero()) continue;
      RingElement r = RingElement::from_dense(ring, residue_mod(e, s));
      RingElement q = divide_exact(e - r, pe);
      piv[j] = axpy(piv[j], q, piv[k]);
    }
  }
}

}  // namespace

// ----------------------------------------------------------- PID helpers

CoreSplit split_core(const RingElement& x) {
  const RingPtr& R = x.ring();
  require_pid(R);
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "core of zero");
  const int p = R->prime();
  DenseNumerator dn = dense_numerator(x);
  DensePoly poly = dn.poly;
  int tshift = 0;
  if (R->is_inverted(0))
    tshift = dn.shift;
  else
    poly = poly.shifted(dn.shift);
  std::vector<int> b(R->num_denominators(), 0);
  for (int k = 0; k < R->num_denominators(); ++k) {
    const DensePoly& d = R->denominator(k);
    while (poly.degree() >= d.degree() && poly.divisible_by(d)) {
      poly = poly.quot(d);
      ++b[k];
    }
  }
  std::int64_t c = poly.leading();
  DensePoly core = poly.monic();
  // unit = c t^tshift prod d_k^{b_k} / prod d_k^{e_k}
  DensePoly up = DensePoly::constant(p, c);
  for (int k = 0; k < R->num_denominators(); ++k) up = up * R->denominator(k).pow(b[k]);
  RingElement::Terms terms;
  for (int i = 0; i <= up.degree(); ++i)
    if (up.coeff(i) != 0) terms[Exponent{i + tshift, 0}] = up.coeff(i);
  return {core, RingElement(R, std::move(terms), x.denominator_exponents())};
}

DensePoly residue_mod(const RingElement& x, const DensePoly& s) {
  const RingPtr& R = x.ring();
  require_pid(R);
  const int p = R->prime();
  if (s.degree() < 1 || x.is_zero()) return DensePoly(p, {});
  DenseNumerator dn = dense_numerator(x);
  DensePoly acc = dn.poly.rem(s);
  if (dn.shift > 0) acc = (acc * DensePoly::monomial(p, dn.shift)).rem(s);
  if (dn.shift < 0)
    acc = (acc * DensePoly::inverse_mod(DensePoly::monomial(p, -dn.shift), s)).rem(s);
  for (int k = 0; k < R->num_denominators(); ++k) {
    int e = x.denominator_exponents()[k];
    if (e == 0) continue;
    acc = (acc * DensePoly::inverse_mod(R->denominator(k).pow(e).rem(s), s)).rem(s);
  }
  return acc;
}

RingElement divide_exact(const RingElement& x, const RingElement& b) {
  const RingPtr& R = x.ring();
  if (x.is_zero()) return x;
  CoreSplit bs = split_core(b);
  DenseNumerator dn = dense_numerator(x);
  DensePoly poly = dn.poly;
  int tshift = 0;
  if (R->is_inverted(0))
    tshift = dn.shift;
  else
    poly = poly.shifted(dn.shift);
  DensePoly q, r;
  poly.divmod_monic(bs.core, q, r);
  if (!r.is_zero())
    throw Error(ErrorKind::NotDivisible, x.to_string() + " is not divisible by " + b.to_string());
  RingElement::Terms terms;
  for (int i = 0; i <= q.degree(); ++i)
    if (q.coeff(i) != 0) terms[Exponent{i + tshift, 0}] = q.coeff(i);
  RingElement out(R, std::move(terms), x.denominator_exponents());
  return out * *bs.unit.inverse();
}

// -------------------------------------------------------------- Submodule

Submodule::Submodule(RingPtr ring, int ambient_rank, std::vector<Vec> generators)
    : ring_(std::move(ring)), r_(ambient_rank) {
  require_pid(ring_);
  if (r_ < 0) throw Error(ErrorKind::InvalidInput, "negative ambient rank");
  for (auto& g : generators) {
    if (static_cast<int>(g.size()) != r_)
      throw Error(ErrorKind::AmbientMismatch, "generator length differs from ambient rank");
    gens_.push_back(map_vec(g, [this](const RingElement& x) { return x.include_into(ring_); }));
  }
  Echelon e = echelon(ring_, gens_, r_);
  reduce(ring_, e.pivots, e.pivot_rows);
  nf_ = std::move(e.pivots);
  pivots_ = std::move(e.pivot_rows);
}

Submodule Submodule::zero(const RingPtr& ring, int ambient_rank) {
  return Submodule(ring, ambient_rank, {});
}

Submodule Submodule::full(const RingPtr& ring, int ambient_rank) {
  std::vector<Vec> g;
  for (int i = 0; i < ambient_rank; ++i) g.push_back(unit_vec(ring, ambient_rank, i));
  return Submodule(ring, ambient_rank, std::move(g));
}

Submodule Submodule::column_span(const Matrix& m) {
  std::vector<Vec> g;
  for (int c = 0; c < m.cols(); ++c) g.push_back(m.column(c));
  return Submodule(m.ring(), m.rows(), std::move(g));
}

Matrix Submodule::matrix() const { return Matrix::from_columns(ring_, r_, nf_); }

std::optional<Vec> Submodule::membership(const Vec& v) const {
  if (static_cast<int>(v.size()) != r_)
    throw Error(ErrorKind::AmbientMismatch, "vector length differs from ambient rank");
  Vec res = map_vec(v, [this](const RingElement& x) { return x.include_into(ring_); });
  Vec coeffs = zero_vec(ring_, rank());
  std::size_t k = 0;
  for (int i = 0; i < r_; ++i) {
    if (k < nf_.size() && pivots_[k] == i) {
      if (!res[i].is_zero()) {
        std::optional<RingElement> c;
        try {
          c = divide_exact(res[i], nf_[k][i]);
        } catch (const Error&) {
          return std::nullopt;
        }
        coeffs[k] = *c;
        res = axpy(res, *c, nf_[k]);
      }
      ++k;
    } else if (!res[i].is_zero()) {
      return std::nullopt;
    }
  }
  return coeffs;
}

bool Submodule::contains(const Submodule& o) const {
  for (const auto& g : o.nf_)
    if (!contains(g)) return false;
  return true;
}

bool Submodule::operator==(const Submodule& o) const {
  return same_ring(ring_, o.ring_) && r_ == o.r_ && pivots_ == o.pivots_ && nf_ == o.nf_;
}

std::string Submodule::to_string() const {
  std::ostringstream os;
  os << "<";
  for (std::size_t k = 0; k < nf_.size(); ++k) os << (k ? ", " : "") << vec_to_string(nf_[k]);
  os << ">";
  return os.str();
}

// ------------------------------------------------------------- operations

Submodule sum(const Submodule& a, const Submodule& b) {
  require_same_ambient(a, b);
  std::vector<Vec> g(a.normal_form());
  g.insert(g.end(), b.normal_form().begin(), b.normal_form().end());
  return Submodule(a.ring(), a.ambient_rank(), std::move(g));
}

Submodule kernel(const Matrix& m) {
  const RingPtr& R = m.ring();
  require_pid(R);
  const int rows = m.rows(), cols = m.cols();
  std::vector<Vec> aug;
  for (int c = 0; c < cols; ++c) {
    Vec v = m.column(c);
    Vec e = unit_vec(R, cols, c);
    v.insert(v.end(), e.begin(), e.end());
    aug.push_back(std::move(v));
  }
  Echelon e = echelon(R, std::move(aug), rows);
  std::vector<Vec> ker;
  for (const auto& v : e.rest) ker.emplace_back(v.begin() + rows, v.end());
  return Submodule(R, cols, std::move(ker));
}

Submodule intersect(const Submodule& a, const Submodule& b) {
  require_same_ambient(a, b);
  if (a.is_zero() || b.is_zero()) return Submodule::zero(a.ring(), a.ambient_rank());
  Matrix M = a.matrix(), N = b.matrix();
  Submodule K = kernel(M.hcat(-N));
  std::vector<Vec> g;
  for (const auto& v : K.normal_form()) {
    Vec x(v.begin(), v.begin() + M.cols());
    g.push_back(M * x);
  }
  return Submodule(a.ring(), a.ambient_rank(), std::move(g));
}

Submodule saturate(const Submodule& a) {
  const int r = a.ambient_rank();
  if (a.is_zero()) return a;
  Submodule K = kernel(a.matrix().transpose());
  if (K.is_zero()) return Submodule::full(a.ring(), r);
  Matrix rows = K.matrix().transpose();
  return kernel(rows);
}

Submodule image(const Matrix& m, const Submodule& g) {
  if (m.cols() != g.ambient_rank())
    throw Error(ErrorKind::AmbientMismatch, "matrix width differs from ambient rank");
  std::vector<Vec> out;
  for (const auto& v : g.normal_form()) out.push_back(m * v);
  return Submodule(m.ring(), m.rows(), std::move(out));
}

Submodule direct_sum(const Submodule& a, const Submodule& b) {
  if (!same_ring(a.ring(), b.ring()))
    throw Error(ErrorKind::AmbientMismatch, "submodules over different rings");
  const int ra = a.ambient_rank(), rb = b.ambient_rank();
  std::vector<Vec> g;
  for (const auto& v : a.normal_form()) {
    Vec w(v);
    Vec z = zero_vec(a.ring(), rb);
    w.insert(w.end(), z.begin(), z.end());
    g.push_back(std::move(w));
  }
  for (const auto& v : b.normal_form()) {
    Vec w = zero_vec(a.ring(), ra);
    w.insert(w.end(), v.begin(), v.end());
    g.push_back(std::move(w));
  }
  return Submodule(a.ring(), ra + rb, std::move(g));
}

Submodule tensor(const Submodule& a, const Submodule& b) {
  if (!same_ring(a.ring(), b.ring()))
    throw Error(ErrorKind::AmbientMismatch, "submodules over different rings");
  const int ra = a.ambient_rank(), rb = b.ambient_rank();
  std::vector<Vec> g;
  for (const auto& u : a.normal_form())
    for (const auto& v : b.normal_form()) {
      Vec w = zero_vec(a.ring(), ra * rb);
      for (int i = 0; i < ra; ++i)
        for (int j = 0; j < rb; ++j)
          if (!u[i].is_zero() && !v[j].is_zero()) w[i * rb + j] = u[i] * v[j];
      g.push_back(std::move(w));
    }
  return Submodule(a.ring(), ra * rb, std::move(g));
}

Submodule coordinate_submodule(const RingPtr& ring, const std::vector<bool>& keep) {
  const int r = static_cast<int>(keep.size());
  std::vector<Vec> g;
  for (int a = 0; a < r; ++a)
    if (keep[a]) g.push_back(unit_vec(ring, r, a));
  return Submodule(ring, r, std::move(g));
}

Submodule frobenius_pullback(const Submodule& g) {
  std::vector<Vec> out;
  for (const auto& v : g.normal_form())
    out.push_back(map_vec(v, [](const RingElement& x) { return x.frobenius(); }));
  return Submodule(g.ring(), g.ambient_rank(), std::move(out));
}

std::vector<Submodule> graded_parts(const Submodule& g, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != g.ambient_rank())
    throw Error(ErrorKind::AmbientMismatch, "grading does not match the ambient rank");
  int top = 0;
  for (int l : levels) top = std::max(top, l);
  std::vector<Submodule> parts;
  for (int i = 0; i <= top; ++i) {
    std::vector<bool> keep(levels.size());
    for (std::size_t a = 0; a < levels.size(); ++a) keep[a] = levels[a] == i;
    parts.push_back(intersect(g, coordinate_submodule(g.ring(), keep)));
  }
  return parts;
}

bool is_subsystem_of_hodge(const Submodule& g, const std::vector<int>& levels) {
  Submodule acc = Submodule::zero(g.ring(), g.ambient_rank());
  for (const auto& part : graded_parts(g, levels)) acc = sum(acc, part);
  return acc == g;
}

bool is_theta_stable(const Submodule& g, const std::vector<Matrix>& theta, std::string* witness) {
  for (std::size_t l = 0; l < theta.size(); ++l)
    for (const auto& v : g.normal_form()) {
      Vec w = theta[l].include_into(g.ring()) * v;
      if (!g.contains(w)) {
        if (witness)
          *witness = "theta_" + std::to_string(l + 1) + " " + vec_to_string(v) + " = " +
                     vec_to_string(w) + " is not in G";
        return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------- degrees

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

int degree_of_unit_transition(const RingElement& g) {
  const RingPtr& R = g.ring();
  if (R->dim() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "degrees are computed on curves");
  RingElement g0 = g.reduce_precision(1);
  if (g0.is_zero() || g0.has_denominators() || g0.numerator().size() != 1)
    throw Error(ErrorKind::NotAUnit, g.to_string() + " is not of the form c t^k");
  return -g0.numerator().begin()->first[0];
}

Rational slope(int degree, int rank) {
  if (rank <= 0) throw Error(ErrorKind::InvalidInput, "slope of a rank-zero object");
  return Rational::make(degree, rank);
}

}  // namespace mfh
