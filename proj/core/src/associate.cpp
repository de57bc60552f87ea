#include "mfh/associate.hpp"

#include "mfh/error.hpp"
#include "mfh/padic.hpp"

namespace mfh {

namespace {

// y_l = (F(t_l) - F2(t_l)) / p mod p.
std::vector<RingElement> lifting_gap(const FrobeniusLifting& F, const FrobeniusLifting& F2) {
  std::vector<RingElement> y;
  for (std::size_t l = 0; l < F.images.size(); ++l)
    y.push_back((F.images[l] - F2.images[l]).divide_by_p_power(1).reduce_precision(1));
  return y;
}

// theta_1^{j1} theta_2^{j2} e
Vec theta_power(const std::vector<Matrix>& theta, const MultiIndex& j, const Vec& e) {
  Vec v = e;
  for (int l = j.dim() - 1; l >= 0; --l)
    for (int k = 0; k < j[l]; ++k) v = theta[l] * v;
  return v;
}

// y^j / j! mod p.
RingElement divided_monomial(const std::vector<RingElement>& y, const MultiIndex& j, int p) {
  RingElement c = RingElement::constant(y[0].ring(), factorial_inverse(j, p).value());
  for (int l = 0; l < j.dim(); ++l)
    if (j[l] > 0) c = c * y[l].pow(j[l]);
  return c;
}

Vec residue_vec(const DeRhamChart& chart, const Vec& e) {
  RingPtr R1 = chart.residue_ring();
  if (static_cast<int>(e.size()) != chart.rank())
    throw Error(ErrorKind::AmbientMismatch, "section length differs from the rank");
  return map_vec(e, [&](const RingElement& x) { return x.include_into(R1); });
}

}  // namespace

PhiTilde phi_tilde(const DeRhamChart& chart) {
  Matrix m = phi_tilde_matrix(chart);
  RingElement d = m.det();
  if (d.is_zero() || !d.is_unit())
    throw Error(ErrorKind::StrongDivisibilityFailure,
                "det(Phi~) = " + d.to_string() + " is not a unit mod p on chart " + chart.id());
  return {m, m.inverse(), d};
}

Vec frobenius_vec(const Vec& v) {
  return map_vec(v, [](const RingElement& x) { return x.frobenius(); });
}

Submodule associated(const DeRhamChart& chart, const Submodule& G) {
  PhiTilde pt = phi_tilde(chart);
  return image(pt.matrix, frobenius_pullback(G));
}

AssociationCertificate associate_subsheaf(const DeRhamChart& chart, const Submodule& G,
                                          const std::optional<FrobeniusLifting>& compare,
                                          bool saturate_result) {
  if (!same_ring(G.ring(), chart.residue_ring()) || G.ambient_rank() != chart.rank())
    throw Error(ErrorKind::AmbientMismatch, "G is not a submodule of E_0 on chart " + chart.id());
  HiggsChart higgs = gr_fil(chart);
  std::string w;
  if (!is_theta_stable(G, higgs.thetas(), &w)) throw Error(ErrorKind::ThetaUnstable, w);

  Submodule S = associated(chart, G);
  if (saturate_result) S = saturate(S);
  AssociationCertificate cert{G, S, chart.lifting(), {}, std::nullopt, std::nullopt, true};

  std::vector<Matrix> A = chart.connection_mod_p();
  for (int k = 0; k < S.rank(); ++k)
    for (int l = 0; l < chart.dim(); ++l) {
      Vec img = apply_connection(A, l, S.normal_form()[k]);
      auto coeffs = S.membership(img);
      if (!coeffs)
        throw Error(ErrorKind::HorizontalityViolation,
                    "nabla of " + vec_to_string(S.normal_form()[k]) + " leaves S");
      cert.horizontality.push_back({k, l, img, *coeffs});
    }

  if (compare) {
    DeRhamChart other = transport_frobenius(chart, *compare);
    Submodule S2 = associated(other, G);
    if (saturate_result) S2 = saturate(S2);
    cert.second_lifting = *compare;
    cert.lifting_independent = S2 == S;
    cert.S_second = std::move(S2);
  }
  return cert;
}

Vec change_of_frobenius_residual(const DeRhamChart& chart, const Vec& e,
                                 const FrobeniusLifting& F2) {
  const int p = chart.ring()->prime();
  Vec ee = residue_vec(chart, e);
  DeRhamChart other = transport_frobenius(chart, F2);
  Matrix pt2 = phi_tilde_matrix(other);
  HiggsChart higgs = gr_fil(chart);
  std::vector<RingElement> y = lifting_gap(chart.lifting(), F2);
  Vec out = zero_vec(chart.residue_ring(), chart.rank());
  for (int s = 1; s <= chart.weight(); ++s)
    for (const MultiIndex& j : MultiIndex::with_total(chart.dim(), s)) {
      Vec tj = theta_power(higgs.thetas(), j, ee);
      if (is_zero(tj)) continue;
      out = add(out, scale(divided_monomial(y, j, p), pt2 * frobenius_vec(tj)));
    }
  return out;
}

Vec residual_difference(const DeRhamChart& chart, const Vec& e, const FrobeniusLifting& F2) {
  Vec fe = frobenius_vec(residue_vec(chart, e));
  DeRhamChart other = transport_frobenius(chart, F2);
  return sub(phi_tilde_matrix(chart) * fe, phi_tilde_matrix(other) * fe);
}

Vec level_residual(const DeRhamChart& chart, const Vec& e, int i, const FrobeniusLifting& F2) {
  const int p = chart.ring()->prime();
  Vec ee = residue_vec(chart, e);
  DeRhamChart other = transport_frobenius(chart, F2);
  HiggsChart higgs = gr_fil(chart);
  std::vector<RingElement> y = lifting_gap(chart.lifting(), F2);
  Vec out = zero_vec(chart.residue_ring(), chart.rank());
  for (int s = 1; s <= i; ++s)
    for (const MultiIndex& j : MultiIndex::with_total(chart.dim(), s)) {
      Vec tj = theta_power(higgs.thetas(), j, ee);
      if (is_zero(tj)) continue;
      out = add(out, scale(divided_monomial(y, j, p), phi_div(other, i - s) * frobenius_vec(tj)));
    }
  return out;
}

Vec level_difference(const DeRhamChart& chart, const Vec& e, int i, const FrobeniusLifting& F2) {
  Vec fe = frobenius_vec(residue_vec(chart, e));
  DeRhamChart other = transport_frobenius(chart, F2);
  return sub(phi_div(chart, i) * fe, phi_div(other, i) * fe);
}

ValidationReport horizontality_certificate(const DeRhamChart& chart, const Submodule& S,
                                           const Submodule& G) {
  ValidationReport rep;
  PhiTilde pt = phi_tilde(chart);
  HiggsChart higgs = gr_fil(chart);
  std::vector<Matrix> A = chart.connection_mod_p();
  const int d = chart.dim();
  for (int gi = 0; gi < G.rank(); ++gi) {
    const Vec& g = G.normal_form()[gi];
    Vec fg = pt.matrix * frobenius_vec(g);
    for (int k = 0; k < d; ++k) {
      Vec lhs = apply_connection(A, k, fg);
      Vec rhs = zero_vec(chart.residue_ring(), chart.rank());
      for (int l = 0; l < d; ++l) {
        RingElement f = chart.lifting().derivative_over_p(k, l);
        rhs = add(rhs, scale(f, pt.matrix * frobenius_vec(higgs.theta(l) * g)));
      }
      std::string tag = "commutation[g" + std::to_string(gi) + "," + chart.ring()->var(k) + "]";
      if (lhs != rhs)
        throw Error(ErrorKind::HorizontalityViolation,
                    tag + ": " + vec_to_string(lhs) + " != " + vec_to_string(rhs));
      auto c = S.membership(lhs);
      if (!c)
        throw Error(ErrorKind::HorizontalityViolation,
                    tag + ": " + vec_to_string(lhs) + " is not in S");
      rep.add(tag, true, vec_to_string(lhs) + " = S-combination " + vec_to_string(*c));
    }
  }
  for (int si = 0; si < S.rank(); ++si)
    for (int k = 0; k < d; ++k) {
      Vec img = apply_connection(A, k, S.normal_form()[si]);
      auto c = S.membership(img);
      std::string tag = "nabla_in_S[s" + std::to_string(si) + "," + chart.ring()->var(k) + "]";
      if (!c)
        throw Error(ErrorKind::HorizontalityViolation,
                    tag + ": " + vec_to_string(img) + " is not in S");
      rep.add(tag, true, vec_to_string(*c));
    }
  return rep;
}

void check_glued_equal(const Matrix& T, const Submodule& S_first, const Submodule& S_second) {
  Submodule moved = image(T, S_first);
  if (moved != S_second)
    throw Error(ErrorKind::GluingMismatch,
                "T S_first = " + moved.to_string() + " but S_second = " + S_second.to_string());
}

GlueReport glue_associated(const GluedObject& g, const Overlap& ov, const Submodule& G_first,
                           const Submodule& G_second) {
  const DeRhamChart* U = g.find_derham(ov.first);
  const DeRhamChart* V = g.find_derham(ov.second);
  if (!U || !V) throw Error(ErrorKind::InvalidInput, "overlap refers to unknown de Rham charts");
  RingPtr R1 = ov.ring->with_precision(1);
  Matrix T = ov.transition.reduce_precision(1);
  auto restrict_sub = [&](const Submodule& s) {
    return Submodule(R1, s.ambient_rank(), s.normal_form());
  };

  Submodule G1 = restrict_sub(G_first), G2 = restrict_sub(G_second);
  if (image(T, G1) != G2)
    throw Error(ErrorKind::GluingMismatch, "G does not glue: T G_first = " +
                                               image(T, G1).to_string() +
                                               ", G_second = " + G2.to_string());

  Submodule S1 = restrict_sub(associate_subsheaf(*U, G_first).S);
  Submodule S2 = restrict_sub(associate_subsheaf(*V, G_second).S);

  // The overlap carries its own lifting F_first + p t^{p+1}.
  DeRhamChart Ur = derham_on_overlap(*U, ov);
  FrobeniusLifting Fo = Ur.lifting();
  Exponent e{0, 0};
  e[0] = Ur.ring()->prime() + 1;
  Fo.images[0] = Fo.images[0] + RingElement::monomial(Ur.ring(), e, Ur.ring()->prime());
  Submodule So = associated(transport_frobenius(Ur, Fo), G1);

  if (So != S1)
    throw Error(ErrorKind::GluingMismatch, "S_first|overlap = " + S1.to_string() +
                                               " but S_overlap = " + So.to_string());
  check_glued_equal(T, So, S2);
  return {S1, So, S2};
}

}  // namespace mfh
