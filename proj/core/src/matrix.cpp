#include "mfh/matrix.hpp"

#include <sstream>

#include "mfh/error.hpp"

namespace mfh {

Matrix::Matrix(RingPtr ring, int rows, int cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols),
      a_(static_cast<std::size_t>(rows) * cols, RingElement(ring_)) {
  if (rows < 0 || cols < 0) throw Error(ErrorKind::InvalidInput, "negative matrix dimension");
}

Matrix Matrix::identity(RingPtr ring, int n) {
  Matrix m(ring, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = RingElement::constant(ring, 1);
  return m;
}

Matrix Matrix::from_rows(RingPtr ring, const std::vector<Vec>& rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr == 0 ? 0 : static_cast<int>(rows[0].size());
  Matrix m(ring, nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc)
      throw Error(ErrorKind::InvalidInput, "ragged matrix rows");
    for (int c = 0; c < nc; ++c) m(r, c) = rows[r][c].include_into(ring);
  }
  return m;
}

Matrix Matrix::from_columns(RingPtr ring, int rows, const std::vector<Vec>& cols) {
  Matrix m(ring, rows, static_cast<int>(cols.size()));
  for (int c = 0; c < m.cols_; ++c) m.set_column(c, cols[c]);
  return m;
}

Matrix Matrix::diagonal(RingPtr ring, const Vec& d) {
  int n = static_cast<int>(d.size());
  Matrix m(ring, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

Vec Matrix::column(int c) const {
  Vec v;
  v.reserve(rows_);
  for (int r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
  return v;
}

Vec Matrix::row(int r) const {
  return Vec(a_.begin() + static_cast<std::ptrdiff_t>(r) * cols_,
             a_.begin() + static_cast<std::ptrdiff_t>(r + 1) * cols_);
}

void Matrix::set_column(int c, const Vec& v) {
  if (static_cast<int>(v.size()) != rows_)
    throw Error(ErrorKind::InvalidInput, "column length mismatch");
  for (int r = 0; r < rows_; ++r) (*this)(r, c) = v[r].include_into(ring_);
}

namespace {
void check_shape(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidInput, std::string("matrix shape mismatch in ") + what);
}
}  // namespace

Matrix Matrix::operator+(const Matrix& o) const {
  check_shape(rows_ == o.rows_ && cols_ == o.cols_, "+");
  Matrix m(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  check_shape(rows_ == o.rows_ && cols_ == o.cols_, "-");
  Matrix m(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
  return m;
}

Matrix Matrix::operator-() const {
  Matrix m(*this);
  for (auto& x : m.a_) x = -x;
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  check_shape(cols_ == o.rows_, "*");
  Matrix m(ring_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const RingElement& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j)
        if (!o(k, j).is_zero()) m(i, j) += x * o(k, j);
    }
  return m;
}

Vec Matrix::operator*(const Vec& v) const {
  check_shape(static_cast<int>(v.size()) == cols_, "matrix-vector product");
  Vec out = zero_vec(ring_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k)
      if (!(*this)(i, k).is_zero() && !v[k].is_zero()) out[i] += (*this)(i, k) * v[k];
  return out;
}

Matrix Matrix::scaled(const RingElement& c) const {
  Matrix m(*this);
  for (auto& x : m.a_) x = c * x;
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix m(ring_, cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

Matrix Matrix::kron(const Matrix& o) const {
  Matrix m(ring_, rows_ * o.rows_, cols_ * o.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      if ((*this)(r, c).is_zero()) continue;
      for (int r2 = 0; r2 < o.rows_; ++r2)
        for (int c2 = 0; c2 < o.cols_; ++c2)
          m(r * o.rows_ + r2, c * o.cols_ + c2) = (*this)(r, c) * o(r2, c2);
    }
  return m;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
  check_shape(r0 >= 0 && c0 >= 0 && r0 + nr <= rows_ && c0 + nc <= cols_, "block");
  Matrix m(ring_, nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
  return m;
}

Matrix Matrix::hcat(const Matrix& o) const {
  check_shape(rows_ == o.rows_, "hcat");
  Matrix m(ring_, rows_, cols_ + o.cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
    for (int c = 0; c < o.cols_; ++c) m(r, cols_ + c) = o(r, c);
  }
  return m;
}

Matrix Matrix::vcat(const Matrix& o) const {
  check_shape(cols_ == o.cols_, "vcat");
  Matrix m(ring_, rows_ + o.rows_, cols_);
  for (int c = 0; c < cols_; ++c) {
    for (int r = 0; r < rows_; ++r) m(r, c) = (*this)(r, c);
    for (int r = 0; r < o.rows_; ++r) m(rows_ + r, c) = o(r, c);
  }
  return m;
}

RingElement Matrix::det() const {
  check_shape(is_square(), "det");
  int n = rows_;
  if (n == 0) return RingElement::constant(ring_, 1);
  if (n == 1) return (*this)(0, 0);
  if (n == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
  // Laplace expansion along the first row; ranks here are small.
  RingElement acc(ring_);
  for (int c = 0; c < n; ++c) {
    if ((*this)(0, c).is_zero()) continue;
    Matrix minor(ring_, n - 1, n - 1);
    for (int r = 1; r < n; ++r)
      for (int cc = 0, k = 0; cc < n; ++cc)
        if (cc != c) minor(r - 1, k++) = (*this)(r, cc);
    RingElement term = (*this)(0, c) * minor.det();
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

Matrix Matrix::adjugate() const {
  check_shape(is_square(), "adjugate");
  int n = rows_;
  Matrix adj(ring_, n, n);
  if (n == 1) {
    adj(0, 0) = RingElement::constant(ring_, 1);
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix minor(ring_, n - 1, n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c)
          if (c != j) minor(rr, cc++) = (*this)(r, c);
        ++rr;
      }
      RingElement d = minor.det();
      adj(j, i) = ((i + j) % 2 == 0) ? d : -d;
    }
  return adj;
}

Matrix Matrix::inverse() const {
  RingElement d = det();
  auto dinv = d.inverse();
  if (!dinv) throw Error(ErrorKind::NotAUnit, "determinant " + d.to_string() + " is not a unit");
  return adjugate().scaled(*dinv);
}

Matrix Matrix::map(const RingPtr& target,
                   const std::function<RingElement(const RingElement&)>& f) const {
  Matrix m(target, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = f(a_[i]);
  return m;
}

Matrix Matrix::derivative(int l) const {
  return map(ring_, [l](const RingElement& x) { return x.derivative(l); });
}

Matrix Matrix::substitute(const std::vector<RingElement>& images) const {
  return map(images.at(0).ring(), [&](const RingElement& x) { return x.substitute(images); });
}

Matrix Matrix::reduce_precision(int precision) const {
  return map(ring_->with_precision(precision),
             [precision](const RingElement& x) { return x.reduce_precision(precision); });
}

Matrix Matrix::include_into(const RingPtr& target) const {
  return map(target, [&](const RingElement& x) { return x.include_into(target); });
}

Matrix Matrix::frobenius() const {
  return map(ring_, [](const RingElement& x) { return x.frobenius(); });
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (int c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

Vec zero_vec(const RingPtr& ring, int n) { return Vec(n, RingElement(ring)); }

Vec unit_vec(const RingPtr& ring, int n, int i) {
  Vec v = zero_vec(ring, n);
  v[i] = RingElement::constant(ring, 1);
  return v;
}

Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "vector length mismatch");
  Vec out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "vector length mismatch");
  Vec out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vec scale(const RingElement& c, const Vec& v) {
  Vec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(c * x);
  return out;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Vec map_vec(const Vec& v, const std::function<RingElement(const RingElement&)>& f) {
  Vec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(f(x));
  return out;
}

std::string vec_to_string(const Vec& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].to_string();
  os << "]";
  return os.str();
}

}  // namespace mfh
