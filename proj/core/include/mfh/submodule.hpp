#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfh/matrix.hpp"

namespace mfh {

/// A finitely generated submodule of R^r for a one-dimensional mod-p chart
/// ring R (a PID). The normal form is computed once at construction:
/// column echelon form processed from the top row, each pivot the monic
/// non-unit part of the entry, entries to the left of a pivot reduced to
/// polynomials of degree below the pivot's.
class Submodule {
 public:
  Submodule(RingPtr ring, int ambient_rank, std::vector<Vec> generators);

  static Submodule zero(const RingPtr& ring, int ambient_rank);
  static Submodule full(const RingPtr& ring, int ambient_rank);
  /// Columns of `m` as generators.
  static Submodule column_span(const Matrix& m);

  const RingPtr& ring() const noexcept { return ring_; }
  int ambient_rank() const noexcept { return r_; }
  const std::vector<Vec>& generators() const noexcept { return gens_; }
  const std::vector<Vec>& normal_form() const noexcept { return nf_; }
  /// Pivot row of each normal-form generator.
  const std::vector<int>& pivot_rows() const noexcept { return pivots_; }
  int rank() const noexcept { return static_cast<int>(nf_.size()); }
  bool is_zero() const noexcept { return nf_.empty(); }
  /// Normal-form generators as matrix columns.
  Matrix matrix() const;

  /// Coefficients c with v = sum_k c_k normal_form()[k], if v lies in the module.
  std::optional<Vec> membership(const Vec& v) const;
  bool contains(const Vec& v) const { return membership(v).has_value(); }
  bool contains(const Submodule& o) const;
  bool operator==(const Submodule& o) const;
  bool operator!=(const Submodule& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  RingPtr ring_;
  int r_;
  std::vector<Vec> gens_;
  std::vector<Vec> nf_;
  std::vector<int> pivots_;
};

Submodule sum(const Submodule& a, const Submodule& b);
Submodule intersect(const Submodule& a, const Submodule& b);
Submodule saturate(const Submodule& a);
/// Generators of {x : m x = 0}.
Submodule kernel(const Matrix& m);
/// m(G) for a matrix m with ambient_rank(G) columns.
Submodule image(const Matrix& m, const Submodule& g);
Submodule direct_sum(const Submodule& a, const Submodule& b);
/// Generators g (x) h, basis index i * rank(b) + j.
Submodule tensor(const Submodule& a, const Submodule& b);
/// Span of the unit vectors e_a with keep[a].
Submodule coordinate_submodule(const RingPtr& ring, const std::vector<bool>& keep);
/// Entrywise absolute Frobenius t -> t^p of the generators.
Submodule frobenius_pullback(const Submodule& g);

/// G intersected with the span of each grading level, indexed by level.
std::vector<Submodule> graded_parts(const Submodule& g, const std::vector<int>& levels);
bool is_subsystem_of_hodge(const Submodule& g, const std::vector<int>& levels);
bool is_theta_stable(const Submodule& g, const std::vector<Matrix>& theta,
                     std::string* witness = nullptr);

/// x = core * unit with core a monic polynomial coprime to the inverted
/// elements and unit a unit of the ring.
struct CoreSplit {
  DensePoly core;
  RingElement unit;
};
CoreSplit split_core(const RingElement& x);
/// The representative of x modulo the ideal (s), s a core: a polynomial of
/// degree below deg s.
DensePoly residue_mod(const RingElement& x, const DensePoly& s);
/// x / b, assuming b divides x. Throws NotDivisible otherwise.
RingElement divide_exact(const RingElement& x, const RingElement& b);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  bool operator==(const Rational& o) const noexcept { return num == o.num && den == o.den; }
  std::string to_string() const;
};

/// Degree of a line bundle on the projective line with transition
/// x_second = g x_first, g = c t^k: the degree is -k.
int degree_of_unit_transition(const RingElement& g);
Rational slope(int degree, int rank);

}  // namespace mfh
