#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfh/check.hpp"
#include "mfh/matrix.hpp"
#include "mfh/ring.hpp"

namespace mfh {

/// Images F(t_l) of a Frobenius lifting on a chart ring of precision >= 2.
struct FrobeniusLifting {
  RingPtr ring;
  std::vector<RingElement> images;

  /// t_l -> t_l^p.
  static FrobeniusLifting standard(const RingPtr& ring);
  static FrobeniusLifting parse(const RingPtr& ring, const std::vector<std::string>& images);

  /// F(t_l) = t_l^p mod p for every l; fills `witness` on failure.
  bool congruence_holds(std::string* witness = nullptr) const;
  /// Inverted variables and denominators map to units.
  bool preserves_units(std::string* witness = nullptr) const;
  /// Throws InvalidLifting unless both conditions hold.
  void check() const;

  RingElement pullback(const RingElement& f) const { return f.substitute(images); }
  Vec pullback(const Vec& v) const;
  Matrix pullback(const Matrix& m) const;
  /// dF(t_l)/dt_k divided by p, reduced mod p.
  RingElement derivative_over_p(int k, int l) const;
  FrobeniusLifting include_into(const RingPtr& target) const;
  std::vector<std::string> to_strings() const;
};

/// Local filtered de Rham data (H, Fil, nabla, Phi) on a free module with
/// an adapted basis. nabla(v) = dv + sum_l A_l v dt_l on coordinate
/// columns; column a of Phi holds the coordinates of Phi(e_a (x) 1).
class DeRhamChart {
 public:
  DeRhamChart(std::string id, int n, std::vector<int> fil, std::vector<Matrix> A,
              FrobeniusLifting F, Matrix Phi);

  const std::string& id() const noexcept { return id_; }
  const RingPtr& ring() const noexcept { return Phi_.ring(); }
  RingPtr residue_ring() const { return ring()->with_precision(1); }
  int rank() const noexcept { return static_cast<int>(fil_.size()); }
  int dim() const { return ring()->dim(); }
  int weight() const noexcept { return n_; }
  const std::vector<int>& fil() const noexcept { return fil_; }
  const Matrix& A(int l) const { return A_[l]; }
  const std::vector<Matrix>& connection() const noexcept { return A_; }
  const FrobeniusLifting& lifting() const noexcept { return F_; }
  const Matrix& Phi() const noexcept { return Phi_; }

  DeRhamChart with_id(std::string id) const;
  DeRhamChart with_frobenius(FrobeniusLifting F, Matrix Phi) const;
  /// Connection matrices reduced mod p.
  std::vector<Matrix> connection_mod_p() const;

 private:
  std::string id_;
  int n_;
  std::vector<int> fil_;
  std::vector<Matrix> A_;
  FrobeniusLifting F_;
  Matrix Phi_;
};

/// Graded Higgs data over a mod-p chart ring.
class HiggsChart {
 public:
  HiggsChart(std::string id, std::vector<int> levels, std::vector<Matrix> theta);

  const std::string& id() const noexcept { return id_; }
  const RingPtr& ring() const noexcept { return theta_.at(0).ring(); }
  int rank() const noexcept { return static_cast<int>(levels_.size()); }
  int dim() const { return ring()->dim(); }
  const std::vector<int>& levels() const noexcept { return levels_; }
  const Matrix& theta(int l) const { return theta_[l]; }
  const std::vector<Matrix>& thetas() const noexcept { return theta_; }
  int max_level() const;

 private:
  std::string id_;
  std::vector<int> levels_;
  std::vector<Matrix> theta_;
};

/// Coordinates of nabla_{d/dt_l}(v) for a connection with matrices A.
Vec apply_connection(const std::vector<Matrix>& A, int l, const Vec& v);

ValidationReport validate(const DeRhamChart& chart);
ValidationReport validate(const HiggsChart& chart);

/// Phi/[p^i] mod p: the level-i columns of Phi divided by p^i, other
/// columns zero.
Matrix phi_div(const DeRhamChart& chart, int i);
/// Sum of phi_div over all levels.
Matrix phi_tilde_matrix(const DeRhamChart& chart);

/// The associated graded Higgs bundle. Throws InvalidInput when the
/// chart does not validate.
HiggsChart gr_fil(const DeRhamChart& chart);

/// Bound on the total order of the Taylor expansion: every term of total
/// order above it has p-adic valuation >= m.
int taylor_bound(int p, int m, int n);

/// The same (H, Fil, nabla) with Frobenius matrix for the lifting F2.
DeRhamChart transport_frobenius(const DeRhamChart& chart, const FrobeniusLifting& F2);

DeRhamChart build_sum(const DeRhamChart& a, const DeRhamChart& b);
/// Basis e_i (x) f_j at index i * rank(b) + j.
DeRhamChart build_tensor(const DeRhamChart& a, const DeRhamChart& b);
/// Symmetric square with basis e_i e_j (i <= j) in lexicographic order,
/// e_i e_j = (e_i (x) e_j + e_j (x) e_i) / 2.
DeRhamChart build_sym2(const DeRhamChart& a);
/// Index of e_i e_j in the build_sym2 basis.
int sym2_index(int rank, int i, int j);

DeRhamChart restrict_chart(const DeRhamChart& chart, const RingPtr& target);
HiggsChart restrict_chart(const HiggsChart& chart, const RingPtr& target);

/// Transition data between two charts. Coordinates: x_second = T x_first.
/// `coordinate_change` holds the images of the second chart's variables
/// in the overlap ring, whose variables are those of the first chart.
struct Overlap {
  std::string first;
  std::string second;
  RingPtr ring;
  std::vector<RingElement> coordinate_change;
  Matrix transition;
};

struct GluedObject {
  std::string cover;  ///< "" or "projective-line"
  std::vector<DeRhamChart> derham;
  std::vector<HiggsChart> higgs;
  std::vector<Overlap> overlaps;

  const DeRhamChart* find_derham(const std::string& id) const;
  const HiggsChart* find_higgs(const std::string& id) const;
};

/// Second-chart Higgs matrices rewritten in the overlap coordinates.
std::vector<Matrix> pull_back_higgs(const HiggsChart& chart, const Overlap& ov);
/// Higgs chart data on the overlap, expressed in overlap coordinates.
HiggsChart higgs_on_overlap(const HiggsChart& chart, const Overlap& ov, bool is_second);
/// De Rham chart restricted to the overlap (identity coordinate change).
DeRhamChart derham_on_overlap(const DeRhamChart& chart, const Overlap& ov);

/// Validates every chart, then every overlap: invertible transition,
/// filtration or grading preserved, connection or Higgs field compatible,
/// Frobenius compatible after aligning liftings, and the cocycle
/// condition on triple overlaps.
ValidationReport validate_glued(const GluedObject& g);

}  // namespace mfh
