#include <gtest/gtest.h>

#include "mfh/error.hpp"
#include "mfh/matrix.hpp"
#include "support.hpp"

using namespace mfh;
using namespace testing_support;

TEST(Matrix, IdentityAndProduct) {
  auto R = line_ring(5, 2);
  Matrix A = mat(R, {{"1", "t"}, {"0", "t^-1"}});
  Matrix I = Matrix::identity(R, 2);
  EXPECT_EQ(A * I, A);
  EXPECT_EQ(I * A, A);
  EXPECT_EQ(A * A, mat(R, {{"1", "t + 1"}, {"0", "t^-2"}}));
}

TEST(Matrix, DetAndInverse) {
  auto R = line_ring(5, 2);
  Matrix A = mat(R, {{"1", "t"}, {"0", "t^-1"}});
  EXPECT_EQ(A.det(), el(R, "t^-1"));
  EXPECT_EQ(A * A.inverse(), Matrix::identity(R, 2));
  EXPECT_EQ(A.inverse() * A, Matrix::identity(R, 2));
}

TEST(Matrix, SingularInverseThrows) {
  auto R = line_ring(5, 2);
  Matrix B = mat(R, {{"1", "0"}, {"0", "5"}});
  try {
    B.inverse();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAUnit);
  }
}

TEST(Matrix, DetMatchesCofactorOracle) {
  auto R = line_ring(7, 1, false);
  Matrix A = mat(R, {{"1", "t", "2"}, {"t^2", "3", "t"}, {"4", "0", "t + 1"}});
  // cofactor expansion along the first row, written out by hand
  RingElement expect = el(R, "1") * (el(R, "3") * el(R, "t + 1") - el(R, "t") * el(R, "0")) -
                       el(R, "t") * (el(R, "t^2") * el(R, "t + 1") - el(R, "t") * el(R, "4")) +
                       el(R, "2") * (el(R, "t^2") * el(R, "0") - el(R, "3") * el(R, "4"));
  EXPECT_EQ(A.det(), expect);
  EXPECT_EQ(A * A.adjugate(), Matrix::identity(R, 3).scaled(A.det()));
}

TEST(Matrix, KronAndBlocks) {
  auto R = line_ring(5, 1);
  Matrix A = mat(R, {{"1", "t"}, {"0", "1"}});
  Matrix B = mat(R, {{"2", "0"}, {"0", "3"}});
  Matrix K = A.kron(B);
  EXPECT_EQ(K.rows(), 4);
  EXPECT_EQ(K(0, 2), el(R, "2*t"));
  EXPECT_EQ(K(1, 3), el(R, "3*t"));
  EXPECT_EQ(K.block(2, 2, 2, 2), B);
  EXPECT_EQ(A.hcat(B).block(0, 2, 2, 2), B);
  EXPECT_EQ(A.vcat(B).block(2, 0, 2, 2), B);
  EXPECT_EQ(K.transpose().transpose(), K);
}

TEST(Matrix, DerivativeAndFrobenius) {
  auto R = line_ring(5, 1);
  Matrix A = mat(R, {{"t^2", "t^-1"}, {"1", "0"}});
  EXPECT_EQ(A.derivative(0), mat(R, {{"2*t", "-t^-2"}, {"0", "0"}}));
  EXPECT_EQ(A.frobenius(), mat(R, {{"t^10", "t^-5"}, {"1", "0"}}));
}

TEST(Matrix, VecHelpers) {
  auto R = line_ring(5, 1);
  Vec v = vec(R, {"1", "t"});
  EXPECT_EQ(add(v, v), vec(R, {"2", "2*t"}));
  EXPECT_TRUE(is_zero(sub(v, v)));
  EXPECT_EQ(scale(el(R, "t^-1"), v), vec(R, {"t^-1", "1"}));
  EXPECT_EQ(unit_vec(R, 3, 1), vec(R, {"0", "1", "0"}));
}
