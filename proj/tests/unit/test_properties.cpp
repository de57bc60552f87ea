// Randomized identities with fixed seeds.
#include <gtest/gtest.h>

#include <algorithm>

#include "mfh/associate.hpp"
#include "mfh/descent.hpp"
#include "mfv/random.hpp"
#include "support.hpp"

using namespace mfh;
using namespace testing_support;

namespace {

constexpr int kTrials = 40;

RingElement laurent_element(const RingPtr& R, mfv::Rng& rng) {
  return mfv::random_element(R, rng, 6, -3, 5);
}

RingElement from_laurent(const RingPtr& R, const Laurent& f) {
  RingElement::Terms t;
  for (const auto& [e, c] : f) t[{e, 0}] = c;
  return RingElement(R, t);
}

}  // namespace

TEST(Property, RingArithmeticMatchesLaurentOracle) {
  mfv::Rng rng(11);
  auto R = line_ring(5, 3);
  const std::int64_t N = R->modulus();
  for (int i = 0; i < kTrials; ++i) {
    RingElement a = laurent_element(R, rng), b = laurent_element(R, rng);
    EXPECT_EQ(a * b, from_laurent(R, laurent_mul(to_laurent(a), to_laurent(b), N)));
    EXPECT_EQ(a + b, from_laurent(R, laurent_add(to_laurent(a), to_laurent(b), N)));
    EXPECT_EQ(a.derivative(0), from_laurent(R, laurent_derivative(to_laurent(a), N)));
  }
}

TEST(Property, LeibnizAndSubstitutionHomomorphism) {
  mfv::Rng rng(12);
  auto R = line_ring(7, 2, true, {{-1, 1}});
  FrobeniusLifting F = mfv::random_lifting(R, rng);
  for (int i = 0; i < kTrials; ++i) {
    RingElement a = laurent_element(R, rng) * RingElement::inverse_denominator(R, 0, i % 3);
    RingElement b = laurent_element(R, rng);
    EXPECT_EQ((a * b).derivative(0), a.derivative(0) * b + a * b.derivative(0));
    EXPECT_EQ(F.pullback(a * b), F.pullback(a) * F.pullback(b));
    EXPECT_EQ(F.pullback(a + b), F.pullback(a) + F.pullback(b));
  }
}

TEST(Property, ExactDivisionRoundTrip) {
  mfv::Rng rng(13);
  for (int p : {3, 5, 7})
    for (int m = 2; m <= 4; ++m)
      for (int i = 0; i < m; ++i)
        for (int trial = 0; trial < 10; ++trial) {
          std::int64_t y = rng.uniform(0, arith::ipow(p, m - i) - 1);
          PadicScalar x(p, m, y * arith::ipow(p, i));
          PadicScalar q = exact_div_pow(x, i);
          EXPECT_EQ(q.precision(), m - i);
          EXPECT_EQ(arith::mod(q.value() * arith::ipow(p, i), arith::ipow(p, m)), x.value());
        }
}

TEST(Property, PrecisionLawAssociativity) {
  mfv::Rng rng(14);
  for (int i = 0; i < kTrials; ++i) {
    auto mk = [&] {
      int m = static_cast<int>(rng.uniform(1, 4));
      return PadicScalar(5, m, rng.uniform(0, 624));
    };
    PadicScalar a = mk(), b = mk(), c = mk();
    int mn = std::min({a.precision(), b.precision(), c.precision()});
    EXPECT_EQ(((a * b) * c).precision(), mn);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(Property, SubmoduleContainsCombinations) {
  mfv::Rng rng(15);
  auto R = line_ring(5, 1, false);
  for (int i = 0; i < kTrials; ++i) {
    std::vector<Vec> gens{mfv::random_vec(R, 3, rng, 3), mfv::random_vec(R, 3, rng, 3)};
    Submodule M(R, 3, gens);
    Vec v = add(scale(mfv::random_element(R, rng, 3), gens[0]), scale(mfv::random_element(R, rng, 3), gens[1]));
    EXPECT_TRUE(M.contains(v));
    // normal form is invariant under an elementary change of generators
    std::vector<Vec> moved{add(gens[0], scale(mfv::random_element(R, rng, 2), gens[1])), gens[1]};
    std::reverse(moved.begin(), moved.end());
    EXPECT_EQ(Submodule(R, 3, moved).normal_form(), M.normal_form());
  }
}

TEST(Property, LatticeOperations) {
  mfv::Rng rng(16);
  auto R = line_ring(5, 1, true, {{-1, 1}});
  for (int i = 0; i < kTrials; ++i) {
    Submodule a(R, 2, {mfv::random_vec(R, 2, rng, 3)});
    Submodule b(R, 2, {mfv::random_vec(R, 2, rng, 3)});
    Submodule s = sum(a, b), x = intersect(a, b);
    EXPECT_TRUE(s.contains(a) && s.contains(b));
    EXPECT_TRUE(a.contains(x) && b.contains(x));
    EXPECT_EQ(saturate(saturate(a)), saturate(a));
    EXPECT_TRUE(saturate(a).contains(a));
  }
}

TEST(Property, TransportThereAndBack) {
  mfv::Rng rng(17);
  DeRhamChart k = kum5();
  for (int i = 0; i < 10; ++i) {
    FrobeniusLifting F2 = mfv::random_lifting(k.ring(), rng);
    DeRhamChart moved = transport_frobenius(k, F2);
    EXPECT_TRUE(validate(moved).ok());
    EXPECT_EQ(transport_frobenius(moved, k.lifting()).Phi(), k.Phi());
  }
}

TEST(Property, ResidualIdentityKum5AndSym2) {
  mfv::Rng rng(18);
  mfv::Model sym2 = load_model("sym2_p5.json");
  for (const DeRhamChart* c : {&sym2.primary_derham()}) {
    for (int i = 0; i < 5; ++i) {
      FrobeniusLifting F2 = mfv::random_lifting(c->ring(), rng);
      for (int s = 0; s < 4; ++s) {
        Vec e = mfv::random_vec(c->residue_ring(), c->rank(), rng);
        EXPECT_EQ(residual_difference(*c, e, F2), change_of_frobenius_residual(*c, e, F2));
      }
    }
  }
  DeRhamChart k = kum5();
  for (int i = 0; i < 10; ++i) {
    FrobeniusLifting F2 = mfv::random_lifting(k.ring(), rng);
    Vec e = mfv::random_vec(k.residue_ring(), 2, rng);
    EXPECT_EQ(residual_difference(k, e, F2), change_of_frobenius_residual(k, e, F2));
    Vec e1 = {el(k.residue_ring(), "0"), mfv::random_element(k.residue_ring(), rng)};
    EXPECT_EQ(level_difference(k, e1, 1, F2), level_residual(k, e1, 1, F2));
  }
}

TEST(Property, PCurvatureIsLinear) {
  mfv::Rng rng(19);
  mfv::Model sym2 = load_model("sym2_p5.json");
  std::vector<Matrix> A = sym2.primary_derham().connection_mod_p();
  const RingPtr& R = A[0].ring();
  Matrix psi = p_curvature(A).psi[0];
  for (int i = 0; i < kTrials; ++i) {
    Vec v = mfv::random_vec(R, 3, rng);
    RingElement f = mfv::random_element(R, rng);
    EXPECT_EQ(apply_p_curvature(A, 0, scale(f, v)), scale(f, psi * v));
  }
  EXPECT_TRUE((psi * psi * psi).is_zero());
}

TEST(Property, HorizontalUnderRandomLiftings) {
  mfv::Rng rng(20);
  DeRhamChart base = kum5();
  Submodule G = Submodule::full(base.residue_ring(), 2);
  for (int i = 0; i < 10; ++i) {
    DeRhamChart k = transport_frobenius(base, mfv::random_lifting(base.ring(), rng));
    Submodule S = associated(k, G);
    EXPECT_TRUE(horizontality_certificate(k, S, G).ok());
    Submodule G0(k.residue_ring(), 2, {vec(k.residue_ring(), {"1", "0"})});
    EXPECT_EQ(associated(k, G0), associated(base, G0));
  }
}

TEST(Property, FrobeniusDigitsReassemble) {
  mfv::Rng rng(21);
  auto R = line_ring(7, 1);
  for (int i = 0; i < kTrials; ++i) {
    RingElement f = mfv::random_element(R, rng, 20, -10, 6);
    auto d = frobenius_digits(f);
    RingElement back(R);
    for (int r = 0; r < 7; ++r) back = back + RingElement::monomial(R, {r, 0}) * d[r].frobenius();
    EXPECT_EQ(back, f);
    EXPECT_EQ(defrobenius(f.frobenius()), f);
  }
}
