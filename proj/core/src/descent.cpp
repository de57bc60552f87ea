#include "mfh/descent.hpp"

#include <algorithm>
#include <sstream>

#include "mfh/error.hpp"
#include "mfh/padic.hpp"

namespace mfh {

namespace {

Vec apply_D(const std::vector<Matrix>& A, int l, const Vec& v) { return apply_connection(A, l, v); }

bool all_zero(const std::vector<Matrix>& ms) {
  return std::all_of(ms.begin(), ms.end(), [](const Matrix& m) { return m.is_zero(); });
}

Matrix theta_word(const std::vector<Matrix>& theta, const MultiIndex& j) {
  Matrix m = Matrix::identity(theta[0].ring(), theta[0].rows());
  for (int l = 0; l < j.dim(); ++l)
    for (int k = 0; k < j[l]; ++k) m = theta[l] * m;
  return m;
}

void require_nilpotent(const HiggsChart& h) {
  const int p = h.ring()->prime();
  for (const MultiIndex& j : MultiIndex::with_total(h.dim(), p - 1))
    if (!theta_word(h.thetas(), j).is_zero())
      throw Error(ErrorKind::NilpotencyTooDeep,
                  "theta on chart " + h.id() + " has nilpotency exponent above p-1");
}

// Row-reduced nullspace of an F_p matrix given column-wise as sparse maps.
std::vector<std::vector<std::int64_t>> nullspace_mod_p(
    const std::vector<std::map<int, std::int64_t>>& cols, int nrows, std::int64_t p) {
  const int ncols = static_cast<int>(cols.size());
  std::vector<std::vector<std::int64_t>> a(nrows, std::vector<std::int64_t>(ncols, 0));
  for (int c = 0; c < ncols; ++c)
    for (const auto& [r, v] : cols[c]) a[r][c] = arith::mod(v, p);
  std::vector<int> pivot_col;
  int row = 0;
  for (int c = 0; c < ncols && row < nrows; ++c) {
    int piv = -1;
    for (int r = row; r < nrows; ++r)
      if (a[r][c] != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(a[piv], a[row]);
    std::int64_t inv = arith::invmod(a[row][c], p);
    for (auto& x : a[row]) x = arith::mulmod(x, inv, p);
    for (int r = 0; r < nrows; ++r) {
      if (r == row || a[r][c] == 0) continue;
      std::int64_t f = a[r][c];
      for (int k = c; k < ncols; ++k)
        a[r][k] = arith::mod(a[r][k] - arith::mulmod(f, a[row][k], p), p);
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<std::int64_t>> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::int64_t> x(ncols, 0);
    x[f] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = arith::mod(-a[r][f], p);
    basis.push_back(std::move(x));
  }
  return basis;
}

int max_abs_degree(const Submodule& W) {
  int d = 0;
  for (const Vec& g : W.normal_form())
    for (const RingElement& x : g) {
      if (x.is_zero()) continue;
      d = std::max({d, x.max_exponent(0), -x.min_exponent(0)});
    }
  return d;
}

RingElement numerator_element(const RingElement& f) {
  return RingElement(f.ring(), f.numerator());
}

// Lift a mod-p element to a ring of higher precision via its signed representative.
RingElement lift_element(const RingElement& x, const RingPtr& target) {
  return parse_element(x.to_string(), target);
}

bool is_variable(const RingElement& x, int l) {
  return x == RingElement::variable(x.ring(), l);
}

}  // namespace

// ---- p-curvature ----------------------------------------------------------

Vec apply_p_curvature(const std::vector<Matrix>& A, int l, const Vec& v) {
  if (A.empty() || A[0].ring()->precision() != 1)
    throw Error(ErrorKind::InvalidInput, "p-curvature needs a mod-p connection");
  Vec w = v;
  for (int k = 0; k < A[0].ring()->prime(); ++k) w = apply_D(A, l, w);
  return w;
}

PCurvature p_curvature(const std::vector<Matrix>& A) {
  if (A.empty()) throw Error(ErrorKind::InvalidInput, "empty connection");
  const RingPtr& R = A[0].ring();
  const int r = A[0].rows();
  PCurvature out;
  for (int l = 0; l < R->dim(); ++l) {
    std::vector<Vec> cols;
    for (int a = 0; a < r; ++a) cols.push_back(apply_p_curvature(A, l, unit_vec(R, r, a)));
    out.psi.push_back(Matrix::from_columns(R, r, cols));
  }
  return out;
}

// ---- conjugate filtration -------------------------------------------------

ConjugateFiltration conjugate_filtration(const DeRhamChart& chart) {
  PhiTilde pt = phi_tilde(chart);
  const int n = chart.weight();
  RingPtr R1 = chart.residue_ring();
  ConjugateFiltration f;
  for (int q = 0; q <= n + 1; ++q) {
    std::vector<Vec> gens;
    for (int a = 0; a < chart.rank(); ++a)
      if (chart.fil()[a] <= n - q) gens.push_back(pt.matrix.column(a));
    f.steps.emplace_back(R1, chart.rank(), std::move(gens));
  }
  return f;
}

bool is_horizontal(const Submodule& W, const std::vector<Matrix>& A, std::string* witness) {
  for (const Vec& g : W.normal_form())
    for (int l = 0; l < W.ring()->dim(); ++l) {
      Vec img = apply_connection(A, l, g);
      if (!W.contains(img)) {
        if (witness)
          *witness = "nabla " + vec_to_string(g) + " = " + vec_to_string(img) + " not in " +
                     W.to_string();
        return false;
      }
    }
  return true;
}

ValidationReport conjugate_filtration_horizontality(const DeRhamChart& chart,
                                                    const ConjugateFiltration& f) {
  ValidationReport rep;
  std::vector<Matrix> A = chart.connection_mod_p();
  for (std::size_t q = 0; q < f.steps.size(); ++q) {
    std::string w;
    bool ok = is_horizontal(f.steps[q], A, &w);
    rep.add("F_con^" + std::to_string(q), ok, ok ? f.steps[q].to_string() : w);
  }
  return rep;
}

Submodule truncate_levels(const Submodule& G, const std::vector<int>& levels, int i) {
  std::vector<bool> keep(levels.size());
  for (std::size_t a = 0; a < levels.size(); ++a) keep[a] = levels[a] <= i;
  return intersect(G, coordinate_submodule(G.ring(), keep));
}

// ---- Cartier descent ------------------------------------------------------

std::vector<RingElement> frobenius_digits(const RingElement& f) {
  const RingPtr& R = f.ring();
  if (R->precision() != 1 || R->dim() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "digit decomposition needs a 1-dim mod-p ring");
  const int p = R->prime();
  // f = N prod d^{e(p-1)} / prod d(t^p)^e
  RingElement num = numerator_element(f);
  const auto& den = f.denominator_exponents();
  for (std::size_t k = 0; k < den.size(); ++k)
    if (den[k] > 0)
      num = num * RingElement::from_dense(R, R->denominator(static_cast<int>(k))).pow(den[k] * (p - 1));
  std::vector<RingElement::Terms> parts(p);
  for (const auto& [e, c] : num.numerator()) {
    int r = ((e[0] % p) + p) % p;
    parts[r][Exponent{(e[0] - r) / p, 0}] = c;
  }
  std::vector<RingElement> out;
  for (int r = 0; r < p; ++r) out.emplace_back(R, parts[r], den);
  return out;
}

std::optional<RingElement> defrobenius(const RingElement& f) {
  std::vector<RingElement> d = frobenius_digits(f);
  for (std::size_t r = 1; r < d.size(); ++r)
    if (!d[r].is_zero()) return std::nullopt;
  return d[0];
}

FlatDescent cartier_descend_flat(const Submodule& W, const std::vector<Matrix>& A,
                                 std::optional<int> degree_bound) {
  const RingPtr& R = W.ring();
  const int p = R->prime();
  const int k = W.rank();
  FlatDescent out{degree_bound.value_or(max_abs_degree(W) + p), Matrix(R, k, k), {}};
  if (out.degree_bound < 0) throw Error(ErrorKind::InvalidInput, "negative degree bound");
  if (k == 0) return out;

  // nabla(M) = M B
  Matrix M = W.matrix();
  std::vector<Vec> bcols;
  for (int b = 0; b < k; ++b) {
    Vec img = apply_connection(A, 0, M.column(b));
    auto c = W.membership(img);
    if (!c)
      throw Error(ErrorKind::NotHorizontal,
                  "nabla " + vec_to_string(M.column(b)) + " = " + vec_to_string(img) + " leaves W");
    bcols.push_back(*c);
  }
  Matrix B = Matrix::from_columns(R, k, bcols);
  out.connection = B;
  PCurvature psi = p_curvature({B});
  if (!all_zero(psi.psi))
    throw Error(ErrorKind::NotPCurvatureZero, "p-curvature " + psi.psi[0].to_string());

  // Unknowns t^e / Q in each slot, Q = prod d_j^{F_j}.
  std::vector<int> Fexp(R->num_denominators(), 0);
  int hi = out.degree_bound;
  for (int j = 0; j < R->num_denominators(); ++j) {
    int mult = 0;
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) mult = std::max(mult, B(r, c).denominator_exponents()[j]);
    Fexp[j] = mult + p;
    hi += Fexp[j] * R->denominator(j).degree();
  }
  const int lo = R->is_inverted(0) ? -out.degree_bound : 0;
  RingElement Qinv = RingElement::constant(R, 1);
  for (int j = 0; j < R->num_denominators(); ++j)
    Qinv = Qinv * RingElement::inverse_denominator(R, j, Fexp[j]);

  struct Unknown { int slot; int e; };
  std::vector<Unknown> unknowns;
  std::vector<Vec> images;
  for (int b = 0; b < k; ++b)
    for (int e = lo; e <= hi; ++e) {
      Vec u = zero_vec(R, k);
      u[b] = RingElement::monomial(R, Exponent{e, 0}) * Qinv;
      images.push_back(apply_connection({B}, 0, u));
      unknowns.push_back({b, e});
    }

  // Clear denominators with H = t^S prod d^E.
  int minT = 0;
  std::vector<int> E(R->num_denominators(), 0);
  for (const Vec& v : images)
    for (const RingElement& x : v) {
      if (x.is_zero()) continue;
      minT = std::min(minT, x.min_exponent(0));
      for (int j = 0; j < R->num_denominators(); ++j)
        E[j] = std::max(E[j], x.denominator_exponents()[j]);
    }
  RingElement H = RingElement::monomial(R, Exponent{-minT, 0});
  for (int j = 0; j < R->num_denominators(); ++j)
    H = H * RingElement::from_dense(R, R->denominator(j)).pow(E[j]);

  std::map<std::pair<int, int>, int> rows;
  std::vector<std::map<int, std::int64_t>> cols(images.size());
  for (std::size_t u = 0; u < images.size(); ++u)
    for (int a = 0; a < k; ++a) {
      RingElement y = images[u][a] * H;
      if (y.has_denominators())
        throw Error(ErrorKind::DescentFailure, "denominator clearing failed");
      for (const auto& [e, c] : y.numerator()) {
        auto key = std::make_pair(a, e[0]);
        auto it = rows.emplace(key, static_cast<int>(rows.size())).first;
        cols[u][it->second] = c;
      }
    }
  auto null = nullspace_mod_p(cols, static_cast<int>(rows.size()), p);

  // Flat sections -> vectors over R = R^(p) via digits, span, map back.
  std::vector<Vec> digit_vecs;
  for (const auto& x : null) {
    Vec c = zero_vec(R, k);
    for (std::size_t u = 0; u < unknowns.size(); ++u)
      if (x[u] != 0)
        c[unknowns[u].slot] += RingElement::monomial(R, Exponent{unknowns[u].e, 0}, x[u]);
    Vec dv;
    for (int b = 0; b < k; ++b) {
      auto d = frobenius_digits(c[b] * Qinv);
      dv.insert(dv.end(), d.begin(), d.end());
    }
    digit_vecs.push_back(std::move(dv));
  }
  Submodule span(R, k * p, digit_vecs);
  std::vector<Vec> flat;
  for (const Vec& dv : span.normal_form()) {
    Vec c = zero_vec(R, k);
    for (int b = 0; b < k; ++b)
      for (int r = 0; r < p; ++r)
        c[b] += RingElement::monomial(R, Exponent{r, 0}) * dv[b * p + r].frobenius();
    flat.push_back(std::move(c));
  }
  if (static_cast<int>(flat.size()) != k || Submodule(R, k, flat) != Submodule::full(R, k)) {
    std::ostringstream os;
    os << "flat sections with degree bound " << out.degree_bound << " span "
       << Submodule(R, k, flat).to_string() << ", not all of W; raise the degree bound";
    throw Error(ErrorKind::DegreeBoundExceeded, os.str());
  }
  for (const Vec& c : flat) out.flat_basis.push_back(M * c);
  return out;
}

Submodule cartier_katz_descent(const DeRhamChart& chart, const Submodule& W,
                               std::optional<int> degree_bound) {
  RingPtr R1 = chart.residue_ring();
  if (!same_ring(W.ring(), R1) || W.ambient_rank() != chart.rank())
    throw Error(ErrorKind::AmbientMismatch, "W is not a submodule of H_0 on chart " + chart.id());
  std::string w;
  if (!is_horizontal(W, chart.connection_mod_p(), &w)) throw Error(ErrorKind::NotHorizontal, w);

  PhiTilde pt = phi_tilde(chart);
  Submodule Wy = image(pt.inverse, W);
  const int n = chart.weight();
  const int r = chart.rank();
  std::vector<Vec> gens;
  for (int q = 0; q <= n; ++q) {
    const int i = n - q;
    Submodule piece = truncate_levels(Wy, chart.fil(), i);
    for (Vec g : piece.normal_form()) {
      for (int a = 0; a < r; ++a)
        if (chart.fil()[a] != i) g[a] = RingElement(R1);
      if (!is_zero(g)) gens.push_back(std::move(g));
    }
  }
  Submodule graded(R1, r, gens);
  std::vector<Matrix> zero(chart.dim(), Matrix(R1, r, r));
  FlatDescent fd = cartier_descend_flat(graded, zero, degree_bound);
  std::vector<Vec> down;
  for (const Vec& v : fd.flat_basis) {
    Vec d;
    for (const RingElement& x : v) {
      auto y = defrobenius(x);
      if (!y)
        throw Error(ErrorKind::DescentFailure,
                    "flat section " + vec_to_string(v) + " is not a Frobenius pullback");
      d.push_back(*y);
    }
    down.push_back(std::move(d));
  }
  Submodule G(R1, r, down);
  if (!is_theta_stable(G, gr_fil(chart).thetas(), &w))
    throw Error(ErrorKind::DescentFailure, "descended module is not theta-stable: " + w);
  return G;
}

RoundTrip roundtrip_check(const DeRhamChart& chart, const Submodule& G) {
  if (!is_subsystem_of_hodge(G, chart.fil()))
    throw Error(ErrorKind::InvalidInput, "G is not a subsystem of Hodge bundles");
  Submodule S = associate_subsheaf(chart, G).S;
  Submodule back = cartier_katz_descent(chart, S);
  RoundTrip rt{G, S, back, back == G, false};
  rt.theta_agrees = rt.equal && is_theta_stable(back, gr_fil(chart).thetas());
  return rt;
}

// ---- exponential twisting -------------------------------------------------

TwistedChart twist_chart(const HiggsChart& chart, const FrobeniusLifting& F) {
  require_nilpotent(chart);
  const RingPtr& R = chart.ring();
  if (static_cast<int>(F.images.size()) != chart.dim())
    throw Error(ErrorKind::InvalidLifting, "lifting has the wrong number of images");
  TwistedChart out{chart.id(), {}};
  for (int k = 0; k < chart.dim(); ++k) {
    Matrix B(R, chart.rank(), chart.rank());
    for (int l = 0; l < chart.dim(); ++l)
      B = B + chart.theta(l).frobenius().scaled(F.derivative_over_p(k, l).include_into(R));
    out.B.push_back(std::move(B));
  }
  return out;
}

namespace {

// Images of t_l under the second chart's lifting, in overlap coordinates.
std::vector<RingElement> second_lifting_on_overlap(const FrobeniusLifting& F, const Overlap& ov,
                                                   const RingPtr& O2) {
  std::vector<RingElement> phi2;
  for (const RingElement& x : ov.coordinate_change) phi2.push_back(lift_element(x, O2));
  std::vector<RingElement> pulled;
  for (const RingElement& img : F.images) pulled.push_back(img.substitute(phi2));
  const int d = O2->dim();
  bool identity = true;
  for (int l = 0; l < d; ++l) identity = identity && is_variable(ov.coordinate_change[l], l);
  if (identity) return pulled;
  if (d == 1 && (ov.coordinate_change[0] * RingElement::variable(ov.ring, 0)) ==
                    RingElement::constant(ov.ring, 1)) {
    auto inv = pulled[0].inverse();
    if (!inv) throw Error(ErrorKind::InvalidLifting, "lifting does not preserve units on overlap");
    return {*inv};
  }
  throw Error(ErrorKind::UnsupportedDimension,
              "twisting supports identity and inversion coordinate changes only");
}

}  // namespace

TwistResult inverse_cartier_twist(const GluedObject& g,
                                  const std::map<std::string, FrobeniusLifting>& liftings) {
  TwistResult res;
  auto lifting_for = [&](const std::string& id) -> const FrobeniusLifting& {
    auto it = liftings.find(id);
    if (it == liftings.end()) throw Error(ErrorKind::MissingLifting, "no lifting for chart " + id);
    return it->second;
  };
  for (const HiggsChart& h : g.higgs) {
    const FrobeniusLifting& F = lifting_for(h.id());
    F.check();
    TwistedChart tc = twist_chart(h, F);
    if (h.dim() == 1) {
      res.report.add(h.id() + ".integrability", true, "dimension 1");
    } else {
      Matrix c = tc.B[1].derivative(0) - tc.B[0].derivative(1) + tc.B[0] * tc.B[1] -
                 tc.B[1] * tc.B[0];
      res.report.add(h.id() + ".integrability", c.is_zero(), c.is_zero() ? "" : c.to_string());
    }
    res.charts.push_back(std::move(tc));
  }

  for (const Overlap& ov : g.overlaps) {
    const HiggsChart* U = g.find_higgs(ov.first);
    const HiggsChart* V = g.find_higgs(ov.second);
    if (!U || !V) throw Error(ErrorKind::InvalidInput, "overlap refers to unknown Higgs charts");
    const std::string tag = "overlap(" + ov.first + "," + ov.second + ").";
    const int p = ov.ring->prime();
    RingPtr O2 = ov.ring->with_precision(2);

    std::vector<RingElement> FU;
    for (const RingElement& x : lifting_for(U->id()).images) FU.push_back(x.include_into(O2));
    std::vector<RingElement> FV = second_lifting_on_overlap(lifting_for(V->id()), ov, O2);

    std::vector<RingElement> h;
    for (std::size_t l = 0; l < FU.size(); ++l)
      h.push_back((FU[l] - FV[l]).divide_by_p_power(1).reduce_precision(1).include_into(ov.ring));
    std::vector<Matrix> thetaV = pull_back_higgs(*V, ov);
    const int r = U->rank();
    Matrix X(ov.ring, r, r);
    for (std::size_t l = 0; l < h.size(); ++l) X = X + thetaV[l].frobenius().scaled(h[l]);

    Matrix expX = Matrix::identity(ov.ring, r);
    Matrix power = Matrix::identity(ov.ring, r);
    std::int64_t fact = 1;
    for (int j = 1; j < p; ++j) {
      power = power * X;
      fact = arith::mulmod(fact, j, p);
      expX = expX + power.scaled(RingElement::constant(ov.ring, arith::invmod(fact, p)));
    }
    if (!(power * X).is_zero())
      throw Error(ErrorKind::NilpotencyTooDeep, tag + "exponent argument is not nilpotent");
    Matrix M = ov.transition.reduce_precision(1);
    Matrix T = expX * M.frobenius();

    HiggsChart Uo = higgs_on_overlap(*U, ov, false);
    HiggsChart Vo = higgs_on_overlap(*V, ov, true);
    TwistedChart B1 = twist_chart(Uo, FrobeniusLifting{O2, FU});
    TwistedChart B2 = twist_chart(Vo, FrobeniusLifting{O2, FV});

    // The second chart's twisted connection, pulled back along the coordinate change.
    const TwistedChart* tv = nullptr;
    for (const TwistedChart& tc : res.charts)
      if (tc.id == V->id()) tv = &tc;
    bool invariant = true;
    for (int k = 0; k < ov.ring->dim(); ++k) {
      Matrix pulled(ov.ring, r, r);
      for (int l = 0; l < ov.ring->dim(); ++l)
        pulled = pulled + tv->B[l].substitute(ov.coordinate_change)
                              .scaled(ov.coordinate_change[l].derivative(k));
      invariant = invariant && pulled == B2.B[k];
    }
    res.report.add(tag + "coordinate_invariance", invariant,
                   invariant ? "" : "second chart connection differs after pullback");

    std::optional<Matrix> Tinv;
    try {
      Tinv = T.inverse();
    } catch (const Error&) {
    }
    res.report.add(tag + "transition_invertible", Tinv.has_value(), "det T = " + T.det().to_string());
    if (Tinv) {
      bool compat = true;
      std::string witness;
      for (int k = 0; k < ov.ring->dim(); ++k) {
        Matrix rhs = *Tinv * (T.derivative(k) + B2.B[k] * T);
        if (rhs != B1.B[k]) {
          compat = false;
          witness = "T^-1 dT + T^-1 B_second T = " + rhs.to_string() + " but B_first = " +
                    B1.B[k].to_string();
        }
      }
      res.report.add(tag + "connection_compatible", compat, witness);
    }
    RingElement dexp = expX.det();
    res.report.add(tag + "exp_det_one", dexp == RingElement::constant(ov.ring, 1),
                   "det exp = " + dexp.to_string());
    res.overlaps.push_back({ov.first, ov.second, h[0], expX, T});
  }
  return res;
}

DeterminantCheck determinant_formula_check(
    const GluedObject& g, const std::map<std::string, FrobeniusLifting>& liftings) {
  if (g.higgs.size() != 2 || g.overlaps.size() != 1)
    throw Error(ErrorKind::InvalidInput, "determinant check needs a two-chart cover");
  TwistResult tw = inverse_cartier_twist(g, liftings);
  const Overlap& ov = g.overlaps[0];
  const TwistedOverlap& to = tw.overlaps[0];
  const int p = ov.ring->prime();
  DeterminantCheck dc{ov.transition.reduce_precision(1).det(), to.transition.det(),
                      to.exponential.det()};
  dc.rank = ov.transition.rows();
  dc.degree_G = degree_of_unit_transition(dc.det_M);
  dc.degree_twisted = degree_of_unit_transition(dc.det_T);
  dc.det_identity = dc.det_T == dc.det_M.frobenius();
  dc.exp_det_one = dc.det_exp == RingElement::constant(ov.ring, 1);
  dc.degree_multiplied = dc.degree_twisted == p * dc.degree_G;
  return dc;
}

}  // namespace mfh
