#include "mfh/mf_data.hpp"

#include <map>
#include <sstream>

#include "mfh/error.hpp"
#include "mfh/padic.hpp"

namespace mfh {

namespace {

std::string entry_name(const std::string& mat, int b, int a) {
  std::ostringstream os;
  os << mat << "(" << b << "," << a << ")";
  return os.str();
}

std::string var_label(const RingPtr& ring, int l) { return ring->var(l); }

// First nonzero entry of a matrix, as "name(b,a) = value".
std::optional<std::string> first_nonzero(const Matrix& m, const std::string& name) {
  for (int b = 0; b < m.rows(); ++b)
    for (int a = 0; a < m.cols(); ++a)
      if (!m(b, a).is_zero()) return entry_name(name, b, a) + " = " + m(b, a).to_string();
  return std::nullopt;
}

RingElement lift_to(const RingElement& x, const RingPtr& ring) {
  return RingElement(ring, x.numerator(), x.denominator_exponents());
}

}  // namespace

// ---------------------------------------------------------------- lifting

FrobeniusLifting FrobeniusLifting::standard(const RingPtr& ring) {
  FrobeniusLifting F{ring, {}};
  for (int l = 0; l < ring->dim(); ++l) {
    Exponent e{0, 0};
    e[l] = ring->prime();
    F.images.push_back(RingElement::monomial(ring, e));
  }
  return F;
}

FrobeniusLifting FrobeniusLifting::parse(const RingPtr& ring,
                                         const std::vector<std::string>& images) {
  if (static_cast<int>(images.size()) != ring->dim())
    throw Error(ErrorKind::InvalidLifting, "a lifting needs one image per variable");
  FrobeniusLifting F{ring, {}};
  for (const auto& s : images) F.images.push_back(parse_element(s, ring));
  return F;
}

bool FrobeniusLifting::congruence_holds(std::string* witness) const {
  RingPtr R1 = ring->with_precision(1);
  for (int l = 0; l < ring->dim(); ++l) {
    Exponent e{0, 0};
    e[l] = ring->prime();
    RingElement diff = images[l].reduce_precision(1) - RingElement::monomial(R1, e);
    if (!diff.is_zero()) {
      if (witness)
        *witness = "F(" + ring->var(l) + ") - " + ring->var(l) + "^" +
                   std::to_string(ring->prime()) + " = " + diff.to_string() + " mod p";
      return false;
    }
  }
  return true;
}

bool FrobeniusLifting::preserves_units(std::string* witness) const {
  for (int l = 0; l < ring->dim(); ++l) {
    if (ring->is_inverted(l) && !images[l].is_unit()) {
      if (witness) *witness = "F(" + ring->var(l) + ") = " + images[l].to_string() + " is not a unit";
      return false;
    }
  }
  for (int k = 0; k < ring->num_denominators(); ++k) {
    const DensePoly& d = ring->denominator(k);
    RingElement img(ring);
    for (int i = d.degree(); i >= 0; --i)
      img = img * images[0] + RingElement::constant(ring, d.coeff(i));
    if (!img.is_unit()) {
      if (witness)
        *witness = "image of " + render_dense(d, ring->var(0)) + " is " + img.to_string() +
                   ", not a unit";
      return false;
    }
  }
  return true;
}

void FrobeniusLifting::check() const {
  if (!ring || static_cast<int>(images.size()) != ring->dim())
    throw Error(ErrorKind::InvalidLifting, "a lifting needs one image per variable");
  if (ring->precision() < 2)
    throw Error(ErrorKind::InvalidLifting, "a lifting needs precision at least 2");
  for (const auto& img : images)
    if (!same_ring(img.ring(), ring))
      throw Error(ErrorKind::InvalidLifting, "lifting image outside the chart ring");
  std::string w;
  if (!congruence_holds(&w)) throw Error(ErrorKind::InvalidLifting, w);
  if (!preserves_units(&w)) throw Error(ErrorKind::InvalidLifting, w);
}

Vec FrobeniusLifting::pullback(const Vec& v) const {
  return map_vec(v, [this](const RingElement& x) { return pullback(x); });
}

Matrix FrobeniusLifting::pullback(const Matrix& m) const { return m.substitute(images); }

RingElement FrobeniusLifting::derivative_over_p(int k, int l) const {
  return images[l].derivative(k).divide_by_p_power(1).reduce_precision(1);
}

FrobeniusLifting FrobeniusLifting::include_into(const RingPtr& target) const {
  FrobeniusLifting F{target, {}};
  for (const auto& img : images) F.images.push_back(img.include_into(target));
  return F;
}

std::vector<std::string> FrobeniusLifting::to_strings() const {
  std::vector<std::string> out;
  for (const auto& img : images) out.push_back(img.to_string());
  return out;
}

// ------------------------------------------------------------------ charts

DeRhamChart::DeRhamChart(std::string id, int n, std::vector<int> fil, std::vector<Matrix> A,
                         FrobeniusLifting F, Matrix Phi)
    : id_(std::move(id)), n_(n), fil_(std::move(fil)), A_(std::move(A)), F_(std::move(F)),
      Phi_(std::move(Phi)) {
  const RingPtr& R = Phi_.ring();
  const int p = R->prime();
  const int r = rank();
  if (r < 1) throw Error(ErrorKind::InvalidInput, "rank must be positive");
  if (n_ < 0) throw Error(ErrorKind::InvalidInput, "weight must be nonnegative");
  if (n_ > p - 2)
    throw Error(ErrorKind::WeightOverflow,
                "weight " + std::to_string(n_) + " exceeds p - 2 = " + std::to_string(p - 2));
  if (R->precision() < n_ + 1 || R->precision() < 2)
    throw Error(ErrorKind::PrecisionTooLow, "precision " + std::to_string(R->precision()) +
                                                " is below max(2, n + 1)");
  for (int f : fil_)
    if (f < 0 || f > n_) throw Error(ErrorKind::InvalidInput, "filtration level outside [0, n]");
  if (Phi_.rows() != r || Phi_.cols() != r)
    throw Error(ErrorKind::InvalidInput, "Phi must be rank x rank");
  if (static_cast<int>(A_.size()) != R->dim())
    throw Error(ErrorKind::InvalidInput, "one connection matrix per variable required");
  for (const auto& a : A_) {
    if (a.rows() != r || a.cols() != r)
      throw Error(ErrorKind::InvalidInput, "connection matrices must be rank x rank");
    if (!same_ring(a.ring(), R))
      throw Error(ErrorKind::IncompatibleRings, "connection and Phi over different rings");
  }
  if (!F_.ring || !same_ring(F_.ring, R))
    throw Error(ErrorKind::IncompatibleRings, "lifting over a different ring");
  if (static_cast<int>(F_.images.size()) != R->dim())
    throw Error(ErrorKind::InvalidLifting, "a lifting needs one image per variable");
}

DeRhamChart DeRhamChart::with_id(std::string id) const {
  DeRhamChart c(*this);
  c.id_ = std::move(id);
  return c;
}

DeRhamChart DeRhamChart::with_frobenius(FrobeniusLifting F, Matrix Phi) const {
  return DeRhamChart(id_, n_, fil_, A_, std::move(F), std::move(Phi));
}

std::vector<Matrix> DeRhamChart::connection_mod_p() const {
  std::vector<Matrix> out;
  for (const auto& a : A_) out.push_back(a.reduce_precision(1));
  return out;
}

HiggsChart::HiggsChart(std::string id, std::vector<int> levels, std::vector<Matrix> theta)
    : id_(std::move(id)), levels_(std::move(levels)), theta_(std::move(theta)) {
  if (theta_.empty()) throw Error(ErrorKind::InvalidInput, "Higgs chart without Higgs matrices");
  const RingPtr& R = theta_[0].ring();
  if (R->precision() != 1)
    throw Error(ErrorKind::InvalidInput, "Higgs data must live over a mod-p ring");
  if (static_cast<int>(theta_.size()) != R->dim())
    throw Error(ErrorKind::InvalidInput, "one Higgs matrix per variable required");
  for (const auto& t : theta_)
    if (t.rows() != rank() || t.cols() != rank() || !same_ring(t.ring(), R))
      throw Error(ErrorKind::InvalidInput, "Higgs matrices must be rank x rank over one ring");
  for (int l : levels_)
    if (l < 0) throw Error(ErrorKind::InvalidInput, "negative grading level");
}

int HiggsChart::max_level() const {
  int m = 0;
  for (int l : levels_) m = std::max(m, l);
  return m;
}

Vec apply_connection(const std::vector<Matrix>& A, int l, const Vec& v) {
  Vec d = map_vec(v, [l](const RingElement& x) { return x.derivative(l); });
  return add(d, A[l] * v);
}

// -------------------------------------------------------------- validation

namespace {

Check check_griffiths(const DeRhamChart& c) {
  for (int l = 0; l < c.dim(); ++l)
    for (int b = 0; b < c.rank(); ++b)
      for (int a = 0; a < c.rank(); ++a)
        if (c.fil()[b] < c.fil()[a] - 1 && !c.A(l)(b, a).is_zero())
          return {"griffiths", Status::Fail,
                  entry_name("A_" + var_label(c.ring(), l), b, a) + " = " +
                      c.A(l)(b, a).to_string() + " but fil(" + std::to_string(b) +
                      ") < fil(" + std::to_string(a) + ") - 1"};
  return {"griffiths", Status::Pass, ""};
}

Check check_integrability(const std::vector<Matrix>& A) {
  if (A.size() < 2) return {"integrability", Status::Pass, "dimension 1"};
  Matrix curv = A[1].derivative(0) - A[0].derivative(1) + A[0] * A[1] - A[1] * A[0];
  if (auto w = first_nonzero(curv, "curvature")) return {"integrability", Status::Fail, *w};
  return {"integrability", Status::Pass, ""};
}

Check check_divisibility(const DeRhamChart& c) {
  for (int a = 0; a < c.rank(); ++a)
    for (int b = 0; b < c.rank(); ++b)
      if (!c.Phi()(b, a).divisible_by_p_power(c.fil()[a]))
        return {"divisibility", Status::Fail,
                "column " + std::to_string(a) + ": " + entry_name("Phi", b, a) + " = " +
                    c.Phi()(b, a).to_string() + " is not divisible by p^" +
                    std::to_string(c.fil()[a])};
  return {"divisibility", Status::Pass, ""};
}

Check check_horizontality(const DeRhamChart& c) {
  try {
    std::vector<Matrix> FA;
    for (int l = 0; l < c.dim(); ++l) FA.push_back(c.lifting().pullback(c.A(l)));
    for (int k = 0; k < c.dim(); ++k) {
      Matrix lhs = c.Phi().derivative(k) + c.A(k) * c.Phi();
      Matrix rhs(c.ring(), c.rank(), c.rank());
      for (int l = 0; l < c.dim(); ++l)
        rhs = rhs + (c.Phi() * FA[l]).scaled(c.lifting().images[l].derivative(k));
      Matrix diff = lhs - rhs;
      if (auto w = first_nonzero(diff, "lhs-rhs"))
        return {"horizontality", Status::Fail, "direction " + var_label(c.ring(), k) + ": " + *w};
    }
  } catch (const Error& e) {
    return {"horizontality", Status::Error, e.what()};
  }
  return {"horizontality", Status::Pass, ""};
}

}  // namespace

Matrix phi_div(const DeRhamChart& chart, int i) {
  if (i < 0 || i > chart.weight())
    throw Error(ErrorKind::InvalidInput, "level " + std::to_string(i) + " outside [0, n]");
  if (chart.ring()->precision() < chart.weight() + 1)
    throw Error(ErrorKind::PrecisionTooLow, "Phi/[p^i] needs precision n + 1");
  RingPtr R1 = chart.residue_ring();
  Matrix out(R1, chart.rank(), chart.rank());
  for (int a = 0; a < chart.rank(); ++a) {
    if (chart.fil()[a] != i) continue;
    for (int b = 0; b < chart.rank(); ++b)
      out(b, a) = chart.Phi()(b, a).divide_by_p_power(i).reduce_precision(1);
  }
  return out;
}

Matrix phi_tilde_matrix(const DeRhamChart& chart) {
  Matrix out(chart.residue_ring(), chart.rank(), chart.rank());
  for (int i = 0; i <= chart.weight(); ++i) out = out + phi_div(chart, i);
  return out;
}

ValidationReport validate(const DeRhamChart& c) {
  ValidationReport rep;
  {
    std::string w;
    bool ok = c.lifting().congruence_holds(&w) && c.lifting().preserves_units(&w);
    rep.add("frobenius_lifting", ok, w);
  }
  rep.checks.push_back(check_griffiths(c));
  rep.checks.push_back(check_integrability(c.connection()));
  Check div = check_divisibility(c);
  rep.checks.push_back(div);
  rep.checks.push_back(check_horizontality(c));
  if (!div.passed()) {
    rep.checks.push_back({"strong_divisibility", Status::Error,
                          "not evaluated: Phi columns are not divisible"});
  } else {
    RingElement det = phi_tilde_matrix(c).det();
    if (det.is_zero()) {
      rep.add("strong_divisibility", false, "det(Phi~) = 0 mod p");
    } else {
      UnitCheck u = unit_check(det);
      rep.add("strong_divisibility", u.unit,
              "det(Phi~) = " + det.to_string() + (u.unit ? "" : " is not a unit mod p"));
    }
  }
  return rep;
}

ValidationReport validate(const HiggsChart& h) {
  ValidationReport rep;
  std::string bad;
  for (int l = 0; l < h.dim() && bad.empty(); ++l)
    for (int b = 0; b < h.rank() && bad.empty(); ++b)
      for (int a = 0; a < h.rank() && bad.empty(); ++a)
        if (!h.theta(l)(b, a).is_zero() && h.levels()[b] != h.levels()[a] - 1)
          bad = entry_name("theta_" + var_label(h.ring(), l), b, a) + " = " +
                h.theta(l)(b, a).to_string() + " does not lower the level by 1";
  rep.add("grading", bad.empty(), bad);
  if (h.dim() < 2) {
    rep.add("theta_commute", true, "dimension 1");
  } else {
    Matrix c = h.theta(0) * h.theta(1) - h.theta(1) * h.theta(0);
    auto w = first_nonzero(c, "[theta_1,theta_2]");
    rep.add("theta_commute", !w, w.value_or(""));
  }
  return rep;
}

HiggsChart gr_fil(const DeRhamChart& c) {
  ValidationReport rep = validate(c);
  if (!rep.ok()) {
    std::string names;
    for (const auto& ch : rep.checks)
      if (!ch.passed()) names += (names.empty() ? "" : ", ") + ch.name;
    throw Error(ErrorKind::InvalidInput, "chart " + c.id() + " fails " + names);
  }
  RingPtr R1 = c.residue_ring();
  std::vector<Matrix> theta;
  for (int l = 0; l < c.dim(); ++l) {
    Matrix t(R1, c.rank(), c.rank());
    for (int b = 0; b < c.rank(); ++b)
      for (int a = 0; a < c.rank(); ++a)
        if (c.fil()[b] == c.fil()[a] - 1) t(b, a) = c.A(l)(b, a).reduce_precision(1);
    theta.push_back(std::move(t));
  }
  return HiggsChart(c.id(), c.fil(), std::move(theta));
}

// --------------------------------------------------------------- transport

int taylor_bound(int p, int m, int n) {
  // s - ord_p(s!) > s (p - 2) / (p - 1), so totals with s (p - 2) >= m (p - 1)
  // contribute only multiples of p^m.
  int s = (m * (p - 1) + (p - 3)) / (p - 2);
  return std::max(n + m, s);
}

DeRhamChart transport_frobenius(const DeRhamChart& chart, const FrobeniusLifting& F2) {
  F2.check();
  const RingPtr& R = chart.ring();
  if (!same_ring(F2.ring, R))
    throw Error(ErrorKind::IncompatibleRings, "lifting over a different ring than the chart");
  const int p = R->prime(), m = R->precision(), d = R->dim(), r = chart.rank();
  // z = F2 - F, y = z / p lifted back to precision m.
  std::vector<RingElement> y;
  for (int l = 0; l < d; ++l) {
    RingElement z = F2.images[l] - chart.lifting().images[l];
    y.push_back(lift_to(z.divide_by_p_power(1), R));
  }
  const int N = taylor_bound(p, m, chart.weight());

  Matrix Phi2(R, r, r);
  for (int a = 0; a < r; ++a) {
    // iter[(j1, j2)] = nabla_1^{j1} nabla_2^{j2} e_a
    std::map<std::pair<int, int>, Vec> iter;
    iter[{0, 0}] = unit_vec(R, r, a);
    Vec col = zero_vec(R, r);
    for (int s = 0; s <= N; ++s) {
      for (const MultiIndex& j : MultiIndex::with_total(d, s)) {
        int j1 = j[0], j2 = d == 2 ? j[1] : 0;
        if (!iter.count({j1, j2})) {
          if (j1 > 0)
            iter[{j1, j2}] = apply_connection(chart.connection(), 0, iter.at({j1 - 1, j2}));
          else
            iter[{j1, j2}] = apply_connection(chart.connection(), 1, iter.at({j1, j2 - 1}));
        }
        const Vec& v = iter.at({j1, j2});
        if (is_zero(v)) continue;
        int val = s - ord_factorial(j, p);
        if (val >= m) continue;
        // z^j / j! = p^{s - v} u^{-1} y^j with j! = p^v u.
        std::int64_t fact = 1;
        for (int l = 0; l < d; ++l)
          for (int k = 2; k <= j[l]; ++k)
            fact = arith::mulmod(fact, k / arith::ipow(p, arith::valuation(k, p)), R->modulus());
        std::int64_t scalar = arith::mulmod(arith::ipow(p, val),
                                            arith::invmod(fact, R->modulus()),
                                            R->modulus());
        RingElement coef = RingElement::constant(R, scalar);
        for (int l = 0; l < d; ++l)
          if (j[l] > 0) coef = coef * y[l].pow(j[l]);
        if (coef.is_zero()) continue;
        col = add(col, scale(coef, chart.Phi() * chart.lifting().pullback(v)));
      }
    }
    Phi2.set_column(a, col);
  }
  return chart.with_frobenius(F2, std::move(Phi2));
}

// ---------------------------------------------------------------- builders

namespace {

void check_same_base(const DeRhamChart& a, const DeRhamChart& b) {
  if (!same_ring(a.ring(), b.ring()))
    throw Error(ErrorKind::IncompatibleRings, "charts over different rings");
  for (int l = 0; l < a.dim(); ++l)
    if (a.lifting().images[l] != b.lifting().images[l])
      throw Error(ErrorKind::IncompatibleRings, "charts with different Frobenius liftings");
}

void check_weight(const DeRhamChart& a, int n) {
  int p = a.ring()->prime();
  if (n > p - 2)
    throw Error(ErrorKind::WeightOverflow,
                "weight " + std::to_string(n) + " exceeds p - 2 = " + std::to_string(p - 2));
  if (a.ring()->precision() < n + 1)
    throw Error(ErrorKind::PrecisionTooLow, "precision " + std::to_string(a.ring()->precision()) +
                                                " is below n + 1 = " + std::to_string(n + 1));
}

}  // namespace

DeRhamChart build_sum(const DeRhamChart& a, const DeRhamChart& b) {
  check_same_base(a, b);
  const RingPtr& R = a.ring();
  int ra = a.rank(), rb = b.rank();
  auto blocks = [&](const Matrix& x, const Matrix& y) {
    Matrix m(R, ra + rb, ra + rb);
    for (int i = 0; i < ra; ++i)
      for (int j = 0; j < ra; ++j) m(i, j) = x(i, j);
    for (int i = 0; i < rb; ++i)
      for (int j = 0; j < rb; ++j) m(ra + i, ra + j) = y(i, j);
    return m;
  };
  std::vector<int> fil(a.fil());
  fil.insert(fil.end(), b.fil().begin(), b.fil().end());
  std::vector<Matrix> A;
  for (int l = 0; l < a.dim(); ++l) A.push_back(blocks(a.A(l), b.A(l)));
  return DeRhamChart(a.id() + "+" + b.id(), std::max(a.weight(), b.weight()), std::move(fil),
                     std::move(A), a.lifting(), blocks(a.Phi(), b.Phi()));
}

DeRhamChart build_tensor(const DeRhamChart& a, const DeRhamChart& b) {
  check_same_base(a, b);
  int n = a.weight() + b.weight();
  check_weight(a, n);
  const RingPtr& R = a.ring();
  std::vector<int> fil;
  for (int fa : a.fil())
    for (int fb : b.fil()) fil.push_back(fa + fb);
  Matrix Ia = Matrix::identity(R, a.rank()), Ib = Matrix::identity(R, b.rank());
  std::vector<Matrix> A;
  for (int l = 0; l < a.dim(); ++l) A.push_back(a.A(l).kron(Ib) + Ia.kron(b.A(l)));
  return DeRhamChart(a.id() + "*" + b.id(), n, std::move(fil), std::move(A), a.lifting(),
                     a.Phi().kron(b.Phi()));
}

int sym2_index(int rank, int i, int j) {
  if (i > j) std::swap(i, j);
  // pairs (i', j') with i' < i come first: sum_{k < i} (rank - k)
  return i * rank - i * (i - 1) / 2 + (j - i);
}

DeRhamChart build_sym2(const DeRhamChart& a) {
  int n = 2 * a.weight();
  check_weight(a, n);
  const RingPtr& R = a.ring();
  const int r = a.rank(), rs = r * (r + 1) / 2;
  std::vector<int> fil(rs);
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) fil[sym2_index(r, i, j)] = a.fil()[i] + a.fil()[j];
  std::vector<Matrix> A;
  for (int l = 0; l < a.dim(); ++l) {
    Matrix S(R, rs, rs);
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        int col = sym2_index(r, i, j);
        for (int b = 0; b < r; ++b) {
          S(sym2_index(r, b, j), col) += a.A(l)(b, i);
          S(sym2_index(r, i, b), col) += a.A(l)(b, j);
        }
      }
    A.push_back(std::move(S));
  }
  Matrix Phi(R, rs, rs);
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      int col = sym2_index(r, i, j);
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c) {
          if (a.Phi()(b, i).is_zero() || a.Phi()(c, j).is_zero()) continue;
          Phi(sym2_index(r, b, c), col) += a.Phi()(b, i) * a.Phi()(c, j);
        }
    }
  return DeRhamChart("sym2(" + a.id() + ")", n, std::move(fil), std::move(A), a.lifting(),
                     std::move(Phi));
}

DeRhamChart restrict_chart(const DeRhamChart& c, const RingPtr& target) {
  if (!c.ring()->embeds_into(*target))
    throw Error(ErrorKind::IncompatibleRings,
                c.ring()->describe() + " does not embed into " + target->describe());
  std::vector<Matrix> A;
  for (const auto& a : c.connection()) A.push_back(a.include_into(target));
  return DeRhamChart(c.id(), c.weight(), c.fil(), std::move(A), c.lifting().include_into(target),
                     c.Phi().include_into(target));
}

HiggsChart restrict_chart(const HiggsChart& h, const RingPtr& target) {
  if (!h.ring()->embeds_into(*target))
    throw Error(ErrorKind::IncompatibleRings,
                h.ring()->describe() + " does not embed into " + target->describe());
  std::vector<Matrix> theta;
  for (const auto& t : h.thetas()) theta.push_back(t.include_into(target));
  return HiggsChart(h.id(), h.levels(), std::move(theta));
}

// ----------------------------------------------------------------- gluing

const DeRhamChart* GluedObject::find_derham(const std::string& id) const {
  for (const auto& c : derham)
    if (c.id() == id) return &c;
  return nullptr;
}

const HiggsChart* GluedObject::find_higgs(const std::string& id) const {
  for (const auto& c : higgs)
    if (c.id() == id) return &c;
  return nullptr;
}

namespace {

bool is_identity_change(const Overlap& ov) {
  for (int l = 0; l < ov.ring->dim(); ++l)
    if (static_cast<int>(ov.coordinate_change.size()) <= l ||
        ov.coordinate_change[l] != RingElement::variable(ov.ring, l))
      return false;
  return static_cast<int>(ov.coordinate_change.size()) == ov.ring->dim();
}

std::vector<RingElement> identity_images(const RingPtr& ring) {
  std::vector<RingElement> v;
  for (int l = 0; l < ring->dim(); ++l) v.push_back(RingElement::variable(ring, l));
  return v;
}

}  // namespace

std::vector<Matrix> pull_back_higgs(const HiggsChart& h, const Overlap& ov) {
  const RingPtr& R = ov.ring;
  std::vector<Matrix> out;
  for (int k = 0; k < R->dim(); ++k) {
    Matrix acc(R, h.rank(), h.rank());
    for (int l = 0; l < h.dim(); ++l)
      acc = acc + h.theta(l).substitute(ov.coordinate_change).scaled(ov.coordinate_change[l].derivative(k));
    out.push_back(std::move(acc));
  }
  return out;
}

HiggsChart higgs_on_overlap(const HiggsChart& h, const Overlap& ov, bool is_second) {
  std::vector<Matrix> theta;
  if (is_second) {
    theta = pull_back_higgs(h, ov);
  } else {
    auto id = identity_images(ov.ring);
    for (const auto& t : h.thetas()) theta.push_back(t.substitute(id));
  }
  return HiggsChart(h.id(), h.levels(), std::move(theta));
}

DeRhamChart derham_on_overlap(const DeRhamChart& c, const Overlap& ov) {
  if (!is_identity_change(ov))
    throw Error(ErrorKind::InvalidInput,
                "de Rham overlaps must use the identity coordinate change");
  return restrict_chart(c, ov.ring);
}

ValidationReport validate_glued(const GluedObject& g) {
  ValidationReport rep;
  for (const auto& c : g.derham) rep.append(validate(c), c.id() + ".");
  for (const auto& h : g.higgs) rep.append(validate(h), h.id() + ".");

  for (const auto& ov : g.overlaps) {
    const std::string tag = "overlap(" + ov.first + "," + ov.second + ").";
    const Matrix& T = ov.transition;
    std::optional<Matrix> Tinv;
    try {
      Tinv = T.inverse();
      rep.add(tag + "transition_invertible", true, "det = " + T.det().to_string());
    } catch (const Error& e) {
      rep.add(tag + "transition_invertible", false, e.what());
      continue;
    }
    const DeRhamChart* U = g.find_derham(ov.first);
    const DeRhamChart* V = g.find_derham(ov.second);
    if (U && V) {
      try {
        DeRhamChart Ur = derham_on_overlap(*U, ov), Vr = derham_on_overlap(*V, ov);
        std::string bad;
        for (int b = 0; b < T.rows() && bad.empty(); ++b)
          for (int a = 0; a < T.cols() && bad.empty(); ++a)
            if (Vr.fil()[b] < Ur.fil()[a] && !T(b, a).is_zero())
              bad = entry_name("T", b, a) + " = " + T(b, a).to_string() + " lowers the filtration";
        rep.add(tag + "filtration", bad.empty(), bad);
        std::string cw;
        for (int l = 0; l < Ur.dim() && cw.empty(); ++l) {
          Matrix diff = Ur.A(l) - (*Tinv * T.derivative(l) + *Tinv * Vr.A(l) * T);
          if (auto w = first_nonzero(diff, "A_first - T^-1 dT - T^-1 A_second T")) cw = *w;
        }
        rep.add(tag + "connection", cw.empty(), cw);
        DeRhamChart Va = transport_frobenius(Vr, Ur.lifting());
        Matrix diff = Va.Phi() * Ur.lifting().pullback(T) - T * Ur.Phi();
        auto w = first_nonzero(diff, "Phi_second F(T) - T Phi_first");
        rep.add(tag + "frobenius", !w, w.value_or(""));
      } catch (const Error& e) {
        rep.checks.push_back({tag + "restriction", Status::Error, e.what()});
      }
      continue;
    }
    const HiggsChart* HU = g.find_higgs(ov.first);
    const HiggsChart* HV = g.find_higgs(ov.second);
    if (HU && HV) {
      try {
        HiggsChart Ur = higgs_on_overlap(*HU, ov, false), Vr = higgs_on_overlap(*HV, ov, true);
        std::string bad;
        for (int b = 0; b < T.rows() && bad.empty(); ++b)
          for (int a = 0; a < T.cols() && bad.empty(); ++a)
            if (Vr.levels()[b] != Ur.levels()[a] && !T(b, a).is_zero())
              bad = entry_name("T", b, a) + " = " + T(b, a).to_string() + " mixes grading levels";
        rep.add(tag + "grading", bad.empty(), bad);
        std::string cw;
        for (int l = 0; l < Ur.dim() && cw.empty(); ++l) {
          Matrix diff = Ur.theta(l) - *Tinv * Vr.theta(l) * T;
          if (auto w = first_nonzero(diff, "theta_first - T^-1 theta_second T")) cw = *w;
        }
        rep.add(tag + "higgs_field", cw.empty(), cw);
      } catch (const Error& e) {
        rep.checks.push_back({tag + "restriction", Status::Error, e.what()});
      }
      continue;
    }
    rep.checks.push_back({tag + "charts", Status::Error, "overlap refers to unknown charts"});
  }

  // Cocycle condition on triple overlaps with identity coordinate changes.
  std::size_t ncharts = g.derham.size() + g.higgs.size();
  if (ncharts < 3) {
    rep.add("cocycle", true, "vacuous: fewer than three charts");
  } else {
    std::string bad;
    int checked = 0;
    for (const auto& a : g.overlaps)
      for (const auto& b : g.overlaps) {
        if (a.second != b.first) continue;
        for (const auto& c : g.overlaps) {
          if (c.first != a.first || c.second != b.second) continue;
          if (!is_identity_change(a) || !is_identity_change(b) || !is_identity_change(c)) continue;
          std::vector<std::vector<std::int64_t>> dens;
          for (const RingPtr& R : {a.ring, b.ring, c.ring})
            for (int k = 0; k < R->num_denominators(); ++k) dens.push_back(R->denominator_integers(k));
          std::vector<bool> inv(a.ring->dim());
          for (int l = 0; l < a.ring->dim(); ++l)
            inv[l] = a.ring->is_inverted(l) || b.ring->is_inverted(l) || c.ring->is_inverted(l);
          RingPtr common = a.ring->with_inverted(inv, dens);
          Matrix lhs = c.transition.include_into(common);
          Matrix rhs = b.transition.include_into(common) * a.transition.include_into(common);
          ++checked;
          if (lhs != rhs && bad.empty())
            bad = "T(" + c.first + "," + c.second + ") != T(" + b.first + "," + b.second + ") T(" +
                  a.first + "," + a.second + ")";
        }
      }
    rep.add("cocycle", bad.empty(), bad.empty() ? std::to_string(checked) + " triples" : bad);
  }
  return rep;
}

}  // namespace mfh
