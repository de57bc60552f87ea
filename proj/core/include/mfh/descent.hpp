#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfh/associate.hpp"
#include "mfh/check.hpp"
#include "mfh/mf_data.hpp"
#include "mfh/submodule.hpp"

namespace mfh {

// ---- p-curvature ----------------------------------------------------------

/// psi_l = (nabla_{d/dt_l})^p, one matrix per variable, columns psi_l(e_a).
struct PCurvature {
  std::vector<Matrix> psi;
};

/// Connection matrices must live over a mod-p ring.
PCurvature p_curvature(const std::vector<Matrix>& A);
/// (nabla_{d/dt_l})^p v by p-fold iteration.
Vec apply_p_curvature(const std::vector<Matrix>& A, int l, const Vec& v);

// ---- conjugate filtration -------------------------------------------------

/// steps[q] = F_con^q for q = 0..n+1, F_con^0 = H_0 and F_con^{n+1} = 0.
struct ConjugateFiltration {
  std::vector<Submodule> steps;
};

ConjugateFiltration conjugate_filtration(const DeRhamChart& chart);
/// nabla(F_con^q) inside F_con^q for every q, one check per step.
ValidationReport conjugate_filtration_horizontality(const DeRhamChart& chart,
                                                    const ConjugateFiltration& f);
/// G^{<= i}: G intersected with the span of levels <= i.
Submodule truncate_levels(const Submodule& G, const std::vector<int>& levels, int i);

/// True when nabla maps W into W; fills `witness` otherwise.
bool is_horizontal(const Submodule& W, const std::vector<Matrix>& A,
                   std::string* witness = nullptr);

// ---- Cartier descent ------------------------------------------------------

/// f = sum_{r<p} t^r f_r(t^p); entry r holds f_r as an element of the ring.
/// Only for dim 1 over F_p.
std::vector<RingElement> frobenius_digits(const RingElement& f);
/// f_0 when f lies in the p-th power subring, nullopt otherwise.
std::optional<RingElement> defrobenius(const RingElement& f);

struct FlatDescent {
  int degree_bound = 0;
  Matrix connection;           ///< B with nabla(M) = M B, M the normal form of W
  std::vector<Vec> flat_basis; ///< basis of W^nabla over the p-th power subring, in ambient coordinates
};

/// Flat sections of a horizontal W with vanishing p-curvature. The degree
/// bound defaults to max generator degree + p.
FlatDescent cartier_descend_flat(const Submodule& W, const std::vector<Matrix>& A,
                                 std::optional<int> degree_bound = std::nullopt);

/// Higgs subsheaf of E_0 descended from a horizontal W of H_0.
Submodule cartier_katz_descent(const DeRhamChart& chart, const Submodule& W,
                               std::optional<int> degree_bound = std::nullopt);

struct RoundTrip {
  Submodule G;
  Submodule S;
  Submodule G_back;
  bool equal = false;
  bool theta_agrees = false;
  bool ok() const { return equal && theta_agrees; }
};

/// G -> S(G) -> descent, compared with G. G must be a subsystem of Hodge bundles.
RoundTrip roundtrip_check(const DeRhamChart& chart, const Submodule& G);

// ---- inverse Cartier via exponential twisting -----------------------------

/// Connection on F^*G: nabla_can + sum_l (dF(t_l)/p) F^#(theta_l).
struct TwistedChart {
  std::string id;
  std::vector<Matrix> B;
};

struct TwistedOverlap {
  std::string first;
  std::string second;
  RingElement h;       ///< (F_first - F_second) / p mod p, overlap coordinates
  Matrix exponential;  ///< exp(h F^#(theta_second))
  Matrix transition;   ///< exponential * F^#(M)
};

struct TwistResult {
  std::vector<TwistedChart> charts;
  std::vector<TwistedOverlap> overlaps;
  ValidationReport report;
};

TwistedChart twist_chart(const HiggsChart& chart, const FrobeniusLifting& F);
/// Liftings keyed by chart id, each over the chart ring at precision 2.
/// Throws MissingLifting, NilpotencyTooDeep.
TwistResult inverse_cartier_twist(const GluedObject& g,
                                  const std::map<std::string, FrobeniusLifting>& liftings);

struct DeterminantCheck {
  RingElement det_M;
  RingElement det_T;
  RingElement det_exp;
  int degree_G = 0;
  int degree_twisted = 0;
  int rank = 0;
  bool det_identity = false;   ///< det T == F^#(det M)
  bool exp_det_one = false;
  bool degree_multiplied = false;  ///< degree_twisted == p * degree_G
  bool ok() const { return det_identity && exp_det_one && degree_multiplied; }
};

/// Two-chart projective-line cover, first chart in t, second in s = 1/t.
DeterminantCheck determinant_formula_check(
    const GluedObject& g, const std::map<std::string, FrobeniusLifting>& liftings);

}  // namespace mfh
