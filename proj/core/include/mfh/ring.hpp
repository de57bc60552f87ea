#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfh/dense_poly.hpp"
#include "mfh/padic.hpp"

namespace mfh {

class ChartRing;
using RingPtr = std::shared_ptr<const ChartRing>;

/// Exponent vector of a monomial. Unused slots (dim 1) stay zero.
using Exponent = std::array<int, 2>;

/// Coordinate ring of a small affine chart: a localization of
/// Z/p^m[t] or Z/p^m[t1, t2] at some variables and, in dimension one, at
/// a list of monic irreducible denominators.
class ChartRing : public std::enable_shared_from_this<ChartRing> {
 public:
  /// Denominators are given as integer coefficient lists, lowest degree
  /// first, and must be monic, irreducible and pairwise coprime mod p,
  /// and coprime to t when t is inverted.
  static RingPtr make(int p, int precision, std::vector<std::string> vars,
                      std::vector<bool> inverted,
                      std::vector<std::vector<std::int64_t>> denominators = {},
                      int denominator_cap = 64);

  int prime() const noexcept { return p_; }
  int precision() const noexcept { return m_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  int dim() const noexcept { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& vars() const noexcept { return vars_; }
  const std::string& var(int l) const { return vars_[l]; }
  bool is_inverted(int l) const { return inverted_[l]; }
  const std::vector<bool>& inverted() const noexcept { return inverted_; }
  int num_denominators() const noexcept { return static_cast<int>(denominators_.size()); }
  /// Denominator k reduced into this ring's coefficients.
  const DensePoly& denominator(int k) const { return denominators_[k]; }
  int denominator_cap() const noexcept { return cap_; }
  std::optional<int> var_index(std::string_view name) const;

  RingPtr with_precision(int precision) const;
  /// Same precision and variables, extra variables/denominators inverted.
  RingPtr with_inverted(std::vector<bool> inverted,
                        std::vector<std::vector<std::int64_t>> extra_denominators) const;

  bool same_as(const ChartRing& o) const;
  /// True if the identity on variables induces a ring map this -> o.
  bool embeds_into(const ChartRing& o) const;
  /// Index of a denominator of o matching denominator k of this ring.
  std::optional<int> find_denominator(const DensePoly& d) const;

  std::string describe() const;

  /// Integer (signed, small) coefficients of denominator k.
  const std::vector<std::int64_t>& denominator_integers(int k) const { return raw_dens_[k]; }

 private:
  ChartRing() = default;

  int p_ = 0;
  int m_ = 0;
  std::int64_t modulus_ = 1;
  std::vector<std::string> vars_;
  std::vector<bool> inverted_;
  std::vector<std::vector<std::int64_t>> raw_dens_;
  std::vector<DensePoly> denominators_;
  int cap_ = 64;

  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::weak_ptr<const ChartRing>> variants_;
};

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && a->same_as(*b));
}

/// An element N / prod_k d_k^{e_k} of a chart ring, with N a Laurent
/// polynomial (negative exponents only on inverted variables). The form
/// is canonical: e_k > 0 implies d_k does not divide N.
class RingElement {
 public:
  using Terms = std::map<Exponent, std::int64_t>;

  explicit RingElement(RingPtr ring);
  RingElement(RingPtr ring, Terms numerator, std::vector<int> den = {});

  static RingElement constant(RingPtr ring, std::int64_t c);
  static RingElement variable(RingPtr ring, int l);
  static RingElement monomial(RingPtr ring, Exponent e, std::int64_t c = 1);
  /// d_k^{-mult}.
  static RingElement inverse_denominator(RingPtr ring, int k, int mult = 1);
  static RingElement from_dense(RingPtr ring, const DensePoly& poly, int shift = 0);

  const RingPtr& ring() const noexcept { return ring_; }
  const Terms& numerator() const noexcept { return num_; }
  const std::vector<int>& denominator_exponents() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.empty(); }
  bool has_denominators() const noexcept;
  /// Constant term of the numerator when the element is a constant.
  std::optional<std::int64_t> as_constant() const;
  PadicScalar coefficient(const Exponent& e) const;
  /// Smallest/largest exponent of variable l in the numerator.
  int min_exponent(int l) const;
  int max_exponent(int l) const;

  RingElement operator-() const;
  RingElement operator+(const RingElement& o) const;
  RingElement operator-(const RingElement& o) const;
  RingElement operator*(const RingElement& o) const;
  RingElement& operator+=(const RingElement& o) { return *this = *this + o; }
  RingElement& operator-=(const RingElement& o) { return *this = *this - o; }
  RingElement& operator*=(const RingElement& o) { return *this = *this * o; }
  RingElement scaled(std::int64_t c) const;
  /// Negative exponents require a unit.
  RingElement pow(int e) const;

  bool operator==(const RingElement& o) const;
  bool operator!=(const RingElement& o) const { return !(*this == o); }

  RingElement derivative(int l) const;
  /// Ring homomorphism sending variable l to images[l]; all images share
  /// one target ring of the same prime and precision <= ours.
  RingElement substitute(const std::vector<RingElement>& images) const;
  /// The inclusion into a ring inverting more (same p, m, variables).
  RingElement include_into(const RingPtr& target) const;
  RingElement reduce_precision(int precision) const;
  /// y at precision m - i with p^i y = x. Throws NotDivisible.
  RingElement divide_by_p_power(int i) const;
  bool divisible_by_p_power(int i) const;
  /// The injective map p^k : Z/p^{m} -> Z/p^{m+k} applied coefficientwise;
  /// `target` must be this ring at precision m + k.
  RingElement times_p_power_into(int k, const RingPtr& target) const;
  /// Absolute Frobenius on a mod-p element: t_l -> t_l^p.
  RingElement frobenius() const;

  std::optional<RingElement> inverse() const;
  bool is_unit() const { return inverse().has_value(); }

  std::string to_string() const;

 private:
  void normalize();
  void check_same_ring(const RingElement& o) const;

  RingPtr ring_;
  Terms num_;
  std::vector<int> den_;
};

/// Parse the polynomial grammar (see docs/grammar.md) into `ring`.
RingElement parse_element(std::string_view text, const RingPtr& ring);
std::string render_element(const RingElement& f);
/// Render a dense polynomial in the named variable.
std::string render_dense(const DensePoly& poly, const std::string& var);
/// Parse an integer polynomial in a single variable (used for
/// denominators), returning lowest-degree-first integer coefficients.
std::vector<std::int64_t> parse_integer_poly(std::string_view text, const std::string& var);

/// Result of a mod-p unit test, with the inverse as witness.
struct UnitCheck {
  bool unit = false;
  std::optional<RingElement> inverse;
};
UnitCheck unit_check(const RingElement& f);

/// A place of the function field of a one-dimensional mod-p chart ring:
/// a monic irreducible polynomial or the point at infinity.
struct Place {
  std::optional<DensePoly> irreducible;  ///< nullopt = infinity
  static Place infinity() { return Place{}; }
  static Place at(DensePoly q) { return Place{std::move(q)}; }
};
int ord_at(const RingElement& f, const Place& place);

/// The mod-p numerator of a one-dimensional element as polynomial
/// x^shift * poly with poly(0) != 0 whenever shift would be nonzero.
struct DenseNumerator {
  DensePoly poly;
  int shift = 0;
};
DenseNumerator dense_numerator(const RingElement& f);

}  // namespace mfh
