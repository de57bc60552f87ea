#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfh/ring.hpp"

namespace mfh {

using Vec = std::vector<RingElement>;

/// Dense matrix over a chart ring, row-major.
class Matrix {
 public:
  Matrix(RingPtr ring, int rows, int cols);

  static Matrix identity(RingPtr ring, int n);
  static Matrix from_rows(RingPtr ring, const std::vector<Vec>& rows);
  static Matrix from_columns(RingPtr ring, int rows, const std::vector<Vec>& cols);
  static Matrix diagonal(RingPtr ring, const Vec& d);

  const RingPtr& ring() const noexcept { return ring_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  RingElement& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const RingElement& operator()(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }

  Vec column(int c) const;
  Vec row(int r) const;
  void set_column(int c, const Vec& v);

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator-() const;
  Vec operator*(const Vec& v) const;
  Matrix scaled(const RingElement& c) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const;
  bool is_square() const noexcept { return rows_ == cols_; }
  Matrix transpose() const;
  Matrix kron(const Matrix& o) const;
  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(int r0, int c0, int nr, int nc) const;
  /// Horizontal / vertical concatenation.
  Matrix hcat(const Matrix& o) const;
  Matrix vcat(const Matrix& o) const;

  RingElement det() const;
  Matrix adjugate() const;
  /// Throws NotAUnit if the determinant is not a unit.
  Matrix inverse() const;

  /// Apply `f` entrywise; all results must lie in `target`.
  Matrix map(const RingPtr& target, const std::function<RingElement(const RingElement&)>& f) const;
  Matrix derivative(int l) const;
  Matrix substitute(const std::vector<RingElement>& images) const;
  Matrix reduce_precision(int precision) const;
  Matrix include_into(const RingPtr& target) const;
  Matrix frobenius() const;

  std::string to_string() const;

 private:
  RingPtr ring_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<RingElement> a_;
};

Vec zero_vec(const RingPtr& ring, int n);
Vec unit_vec(const RingPtr& ring, int n, int i);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const RingElement& c, const Vec& v);
bool is_zero(const Vec& v);
Vec map_vec(const Vec& v, const std::function<RingElement(const RingElement&)>& f);
std::string vec_to_string(const Vec& v);

}  // namespace mfh
