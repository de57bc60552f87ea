#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfh/check.hpp"
#include "mfh/mf_data.hpp"
#include "mfh/submodule.hpp"

namespace mfh {

/// Phi~ = sum_i Phi/[p^i] over the residue ring, with certified inverse.
struct PhiTilde {
  Matrix matrix;
  Matrix inverse;
  RingElement det;
};

/// Throws StrongDivisibilityFailure when det is not a unit mod p.
PhiTilde phi_tilde(const DeRhamChart& chart);

/// Entrywise absolute Frobenius t -> t^p of a mod-p vector.
Vec frobenius_vec(const Vec& v);

struct HorizontalityWitness {
  int generator = 0;   ///< index into the normal form of S
  int direction = 0;   ///< variable index
  Vec image;           ///< nabla of the generator
  Vec coefficients;    ///< image in terms of the normal form of S
};

struct AssociationCertificate {
  Submodule G;
  Submodule S;
  FrobeniusLifting lifting;
  std::vector<HorizontalityWitness> horizontality;
  std::optional<FrobeniusLifting> second_lifting;
  std::optional<Submodule> S_second;
  bool lifting_independent = true;
};

/// S(G) = Phi~(F^* G). Checks theta-stability (ThetaUnstable) and
/// horizontality of S. With `compare`, recomputes S for the transported
/// chart and records whether both normal forms agree.
AssociationCertificate associate_subsheaf(const DeRhamChart& chart, const Submodule& G,
                                          const std::optional<FrobeniusLifting>& compare = {},
                                          bool saturate_result = false);
/// S(G) without certificates or stability check.
Submodule associated(const DeRhamChart& chart, const Submodule& G);

/// sum_{1 <= |j| <= n} Phi~_{F2}(F^*(theta^j e)) y^j / j!, y = (F - F2) / p.
Vec change_of_frobenius_residual(const DeRhamChart& chart, const Vec& e,
                                 const FrobeniusLifting& F2);
/// Phi~_F(F^* e) - Phi~_{F2}(F^* e).
Vec residual_difference(const DeRhamChart& chart, const Vec& e, const FrobeniusLifting& F2);
/// Per-level versions for e concentrated in filtration level i.
Vec level_residual(const DeRhamChart& chart, const Vec& e, int i, const FrobeniusLifting& F2);
Vec level_difference(const DeRhamChart& chart, const Vec& e, int i, const FrobeniusLifting& F2);

/// For every generator g of G and direction k, checks
///   nabla_k Phi~(F^* g) = sum_l Phi~(F^*(theta_l g)) f_kl,  f_kl = d_k F(t_l) / p,
/// then membership of both sides and of nabla of every generator of S in S.
/// Throws HorizontalityViolation on failure.
ValidationReport horizontality_certificate(const DeRhamChart& chart, const Submodule& S,
                                           const Submodule& G);

struct GlueReport {
  Submodule S_first;    ///< S on the first chart, restricted to the overlap
  Submodule S_overlap;  ///< S computed on the overlap with its own lifting
  Submodule S_second;   ///< S on the second chart, restricted to the overlap
};

/// Compare S on two de Rham charts over their overlap: S_first equals the
/// overlap computation and T S_first equals S_second. Throws GluingMismatch.
GlueReport glue_associated(const GluedObject& g, const Overlap& ov, const Submodule& G_first,
                           const Submodule& G_second);
/// T S_first == S_second over the overlap, or GluingMismatch.
void check_glued_equal(const Matrix& T, const Submodule& S_first, const Submodule& S_second);

}  // namespace mfh
