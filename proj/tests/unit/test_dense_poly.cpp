#include <gtest/gtest.h>

#include "mfh/dense_poly.hpp"

using mfh::DensePoly;

namespace {

DensePoly P(std::vector<std::int64_t> c, std::int64_t N = 5) { return DensePoly(N, std::move(c)); }

// Horner evaluation at every point of F_p; two polynomials of degree < p
// agree iff their value tables agree.
std::vector<std::int64_t> table(const DensePoly& f, std::int64_t p) {
  std::vector<std::int64_t> out;
  for (std::int64_t x = 0; x < p; ++x) out.push_back(f.eval(x));
  return out;
}

}  // namespace

TEST(DensePoly, TrimsAndReduces) {
  DensePoly f = P({6, -1, 0, 0});
  EXPECT_EQ(f.degree(), 1);
  EXPECT_EQ(f.coeff(0), 1);
  EXPECT_EQ(f.coeff(1), 4);
  EXPECT_TRUE(P({}).is_zero());
  EXPECT_EQ(P({}).degree(), -1);
}

TEST(DensePoly, ArithmeticAgreesPointwise) {
  DensePoly a = P({1, 2, 3}), b = P({4, 0, 1});
  auto ta = table(a, 5), tb = table(b, 5);
  auto tp = table(a * b, 5), ts = table(a + b, 5);
  for (int x = 0; x < 5; ++x) {
    EXPECT_EQ(tp[x], ta[x] * tb[x] % 5);
    EXPECT_EQ(ts[x], (ta[x] + tb[x]) % 5);
  }
}

TEST(DensePoly, DivmodMonic) {
  DensePoly a = P({1, 0, 0, 1}), d = P({4, 1});  // t^3 + 1 = (t - 1) q + r
  DensePoly q, r;
  a.divmod_monic(d, q, r);
  EXPECT_EQ(q * d + r, a);
  EXPECT_LT(r.degree(), d.degree());
  EXPECT_EQ(r, P({2}));
}

TEST(DensePoly, GcdAndXgcd) {
  DensePoly a = P({4, 0, 1});  // t^2 - 1
  DensePoly b = P({4, 1});     // t - 1
  EXPECT_EQ(DensePoly::gcd(a, b), b);
  DensePoly s, t;
  DensePoly g = DensePoly::xgcd(P({1, 1}), P({2, 0, 1}), s, t);
  EXPECT_EQ(g, P({1}));
  EXPECT_EQ(s * P({1, 1}) + t * P({2, 0, 1}), g);
}

TEST(DensePoly, InverseMod) {
  DensePoly m = P({2, 0, 1});  // t^2 + 2 is irreducible mod 5
  DensePoly a = P({1, 3});
  DensePoly inv = DensePoly::inverse_mod(a, m);
  EXPECT_EQ((a * inv).rem(m), P({1}));
}

TEST(DensePoly, Irreducibility) {
  EXPECT_TRUE(P({2, 0, 1}).is_irreducible());
  EXPECT_FALSE(P({4, 0, 1}).is_irreducible());
  EXPECT_TRUE(P({4, 1}).is_irreducible());
  // Brute force over monic quadratics: irreducible iff no root in F_5.
  for (int c0 = 0; c0 < 5; ++c0)
    for (int c1 = 0; c1 < 5; ++c1) {
      DensePoly f = P({c0, c1, 1});
      bool root = false;
      for (int x = 0; x < 5; ++x) root |= f.eval(x) == 0;
      EXPECT_EQ(f.is_irreducible(), !root) << c0 << " " << c1;
    }
}

TEST(DensePoly, InflateAndPow) {
  DensePoly f = P({1, 1});
  EXPECT_EQ(f.pow(5), P({1, 0, 0, 0, 0, 1}));  // (1 + t)^5 = 1 + t^5 mod 5
  EXPECT_EQ(f.inflate(5), f.pow(5));
  EXPECT_EQ(f.shifted(2), P({0, 0, 1, 1}));
}

TEST(DensePoly, CompositeModulus) {
  DensePoly f = DensePoly(25, {5, 1});
  DensePoly g = f * f;
  EXPECT_EQ(g, DensePoly(25, {0, 10, 1}));
  EXPECT_EQ(g.reduced(5), DensePoly(5, {0, 0, 1}));
}
