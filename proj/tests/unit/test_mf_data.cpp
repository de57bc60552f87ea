#include <gtest/gtest.h>

#include "mfh/error.hpp"
#include "mfh/mf_data.hpp"
#include "support.hpp"

using namespace mfh;
using namespace testing_support;

namespace {

DeRhamChart tate(int m) {
  auto R = line_ring(5, m);
  return DeRhamChart("T", 1, {1}, {mat(R, {{"0"}})}, FrobeniusLifting::standard(R), mat(R, {{"5"}}));
}

DeRhamChart kum5_at(int m) {
  auto R = line_ring(5, m);
  return DeRhamChart("K", 1, {0, 1}, {mat(R, {{"0", "t^-1"}, {"0", "0"}})},
                     FrobeniusLifting::standard(R), mat(R, {{"1", "0"}, {"0", "5"}}));
}

}  // namespace

TEST(MfData, Kum5Validates) {
  ValidationReport rep = validate(kum5());
  EXPECT_TRUE(rep.ok());
  for (const char* name : {"frobenius_lifting", "griffiths", "integrability", "divisibility",
                           "horizontality", "strong_divisibility"})
    EXPECT_NE(rep.find(name), nullptr) << name;
}

TEST(MfData, IdentityPhiFailsDivisibility) {
  auto R = line_ring(5, 2);
  DeRhamChart c("U", 1, {0, 1}, {mat(R, {{"0", "t^-1"}, {"0", "0"}})}, FrobeniusLifting::standard(R),
                Matrix::identity(R, 2));
  ValidationReport rep = validate(c);
  ASSERT_NE(rep.find("divisibility"), nullptr);
  EXPECT_FALSE(rep.find("divisibility")->passed());
  EXPECT_NE(rep.find("divisibility")->witness.find("column 1"), std::string::npos);
}

TEST(MfData, IntegrabilityFailure) {
  auto R = ChartRing::make(5, 2, {"t1", "t2"}, {false, false});
  DeRhamChart c("U", 1, {0, 1}, {mat(R, {{"0", "1"}, {"0", "0"}}), mat(R, {{"0", "t1"}, {"0", "0"}})},
                FrobeniusLifting::standard(R), mat(R, {{"1", "0"}, {"0", "5"}}));
  ValidationReport rep = validate(c);
  ASSERT_NE(rep.find("integrability"), nullptr);
  EXPECT_FALSE(rep.find("integrability")->passed());
}

TEST(MfData, GrFil) {
  HiggsChart g = gr_fil(kum5());
  EXPECT_EQ(g.rank(), 2);
  EXPECT_EQ(g.theta(0), mat(g.ring(), {{"0", "t^-1"}, {"0", "0"}}));
  EXPECT_EQ(g.ring()->precision(), 1);
  HiggsChart t = gr_fil(tate(2));
  EXPECT_TRUE(t.theta(0).is_zero());
}

TEST(MfData, GrFilOfSym2) {
  DeRhamChart s = build_sym2(kum5_at(3));
  HiggsChart g = gr_fil(s);
  // basis e0^2, e0 e1, e1^2: theta(e1^2) = 2/t e0 e1, theta(e0 e1) = 1/t e0^2
  int i00 = sym2_index(2, 0, 0), i01 = sym2_index(2, 0, 1), i11 = sym2_index(2, 1, 1);
  const RingPtr& R = g.ring();
  EXPECT_EQ(g.theta(0)(i01, i11), el(R, "2*t^-1"));
  EXPECT_EQ(g.theta(0)(i00, i01), el(R, "t^-1"));
  EXPECT_EQ(g.theta(0)(i00, i11), el(R, "0"));
}

TEST(MfData, TransportFrobenius) {
  auto R = line_ring(5, 2);
  FrobeniusLifting F2 = FrobeniusLifting::parse(R, {"t^5 + 5*t^6"});
  DeRhamChart moved = transport_frobenius(kum5(), F2);
  EXPECT_EQ(moved.Phi(), mat(R, {{"1", "5*t"}, {"0", "5"}}));
  EXPECT_TRUE(validate(moved).ok());
  EXPECT_EQ(transport_frobenius(kum5(), FrobeniusLifting::standard(R)).Phi(), kum5().Phi());
  DeRhamChart back = transport_frobenius(moved, FrobeniusLifting::standard(R));
  EXPECT_EQ(back.Phi(), kum5().Phi());
}

TEST(MfData, PhiDiv) {
  DeRhamChart k = kum5();
  const RingPtr R1 = k.residue_ring();
  EXPECT_EQ(phi_div(k, 1).column(1), vec(R1, {"0", "1"}));
  EXPECT_EQ(phi_div(k, 0).column(0), vec(R1, {"1", "0"}));
  EXPECT_EQ(phi_tilde_matrix(k), Matrix::identity(R1, 2));
  auto R = line_ring(5, 2);
  DeRhamChart moved = transport_frobenius(k, FrobeniusLifting::parse(R, {"t^5 + 5*t^6"}));
  EXPECT_EQ(phi_tilde_matrix(moved), mat(R1, {{"1", "t"}, {"0", "1"}}));
}

TEST(MfData, PhiDivSym2TopLevel) {
  DeRhamChart s = build_sym2(kum5_at(3));
  int i11 = sym2_index(2, 1, 1);
  Vec col = phi_div(s, 2).column(i11);
  EXPECT_EQ(col, unit_vec(s.residue_ring(), 3, i11));
  EXPECT_TRUE(validate(s).ok());
}

TEST(MfData, SumAndTensor) {
  DeRhamChart k = kum5_at(3), t = tate(3);
  DeRhamChart sum = build_sum(k, t);
  EXPECT_EQ(sum.rank(), 3);
  EXPECT_EQ(sum.fil(), (std::vector<int>{0, 1, 1}));
  EXPECT_TRUE(validate(sum).ok());

  DeRhamChart ten = build_tensor(k, t);
  EXPECT_EQ(ten.rank(), 2);
  EXPECT_EQ(ten.fil(), (std::vector<int>{1, 2}));
  EXPECT_EQ(ten.Phi(), mat(k.ring(), {{"5", "0"}, {"0", "25"}}));
  EXPECT_TRUE(validate(ten).ok());
}

TEST(MfData, TaylorBoundKillsTail) {
  // Every total s above the bound has s - ord_p(s!) >= m.
  for (int p : {3, 5, 7, 11})
    for (int m = 1; m <= 4; ++m)
      for (int n = 0; n + 2 <= p && n < m; ++n) {
        int N = taylor_bound(p, m, n);
        for (int s = N + 1; s <= N + 4 * p; ++s)
          EXPECT_GE(s - brute_ord_factorial(s, p), m) << p << " " << m << " " << s;
      }
}

TEST(MfData, RestrictChart) {
  auto R = line_ring(5, 2, true, {{-1, 1}});
  DeRhamChart r = restrict_chart(kum5(), R);
  EXPECT_TRUE(validate(r).ok());
  EXPECT_THROW(restrict_chart(kum5(), line_ring(7, 2)), Error);
}

TEST(MfData, ApplyConnection) {
  DeRhamChart k = kum5();
  const RingPtr& R = k.ring();
  // nabla(t e1) = e1 + e0
  EXPECT_EQ(apply_connection(k.connection(), 0, vec(R, {"0", "t"})), vec(R, {"1", "1"}));
}
