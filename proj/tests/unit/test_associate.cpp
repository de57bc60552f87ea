#include <gtest/gtest.h>

#include "mfh/associate.hpp"
#include "mfh/error.hpp"
#include "support.hpp"

using namespace mfh;
using namespace testing_support;

namespace {

const char* kAlt = "t^5 + 5*t^6";

Submodule sub(const RingPtr& R, const std::vector<std::vector<std::string>>& gens) {
  std::vector<Vec> g;
  for (const auto& v : gens) g.push_back(vec(R, v));
  return Submodule(R, static_cast<int>(gens.front().size()), g);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST(Associate, PhiTildeOfKum5) {
  DeRhamChart k = kum5();
  PhiTilde pt = phi_tilde(k);
  EXPECT_EQ(pt.matrix, Matrix::identity(k.residue_ring(), 2));
  EXPECT_EQ(pt.det, el(k.residue_ring(), "1"));
}

TEST(Associate, PhiTildeUnderAlternativeLifting) {
  DeRhamChart k = kum5(kAlt);
  const RingPtr R1 = k.residue_ring();
  PhiTilde pt = phi_tilde(k);
  EXPECT_EQ(pt.matrix, mat(R1, {{"1", "t"}, {"0", "1"}}));
  EXPECT_EQ(pt.matrix * pt.inverse, Matrix::identity(R1, 2));
  // anchor: Phi~_{F'}(e1) = e1 + t e0
  EXPECT_EQ(pt.matrix * vec(R1, {"0", "1"}), vec(R1, {"t", "1"}));
}

TEST(Associate, StrongDivisibilityFailure) {
  auto R = line_ring(5, 2);
  DeRhamChart c("T", 1, {1}, {mat(R, {{"0"}})}, FrobeniusLifting::standard(R), mat(R, {{"25"}}));
  EXPECT_EQ(kind_of([&] { phi_tilde(c); }), ErrorKind::StrongDivisibilityFailure);
}

TEST(Associate, Kum5Examples) {
  DeRhamChart k = kum5();
  const RingPtr R1 = k.residue_ring();
  EXPECT_EQ(associate_subsheaf(k, sub(R1, {{"1", "0"}})).S, sub(R1, {{"1", "0"}}));
  EXPECT_EQ(associate_subsheaf(k, Submodule::full(R1, 2)).S, Submodule::full(R1, 2));
  EXPECT_EQ(kind_of([&] { associate_subsheaf(k, sub(R1, {{"0", "1"}})); }), ErrorKind::ThetaUnstable);
}

TEST(Associate, LiftingIndependence) {
  DeRhamChart k = kum5();
  const RingPtr R1 = k.residue_ring();
  FrobeniusLifting alt = FrobeniusLifting::parse(k.ring(), {kAlt});
  for (const Submodule& G : {sub(R1, {{"1", "0"}}), Submodule::full(R1, 2)}) {
    AssociationCertificate c = associate_subsheaf(k, G, alt);
    ASSERT_TRUE(c.S_second);
    EXPECT_TRUE(c.lifting_independent);
    EXPECT_EQ(*c.S_second, c.S);
  }
}

TEST(Associate, ResidualAnchor) {
  DeRhamChart k = kum5();
  const RingPtr R1 = k.residue_ring();
  FrobeniusLifting alt = FrobeniusLifting::parse(k.ring(), {kAlt});
  Vec e1 = vec(R1, {"0", "1"});
  EXPECT_EQ(change_of_frobenius_residual(k, e1, alt), vec(R1, {"-t", "0"}));
  EXPECT_EQ(residual_difference(k, e1, alt), vec(R1, {"-t", "0"}));
  Vec e0 = vec(R1, {"1", "0"});
  EXPECT_TRUE(is_zero(change_of_frobenius_residual(k, e0, alt)));
  EXPECT_TRUE(is_zero(residual_difference(k, e0, alt)));
}

TEST(Associate, LevelResidualAnchor) {
  DeRhamChart k = kum5();
  const RingPtr R1 = k.residue_ring();
  FrobeniusLifting alt = FrobeniusLifting::parse(k.ring(), {kAlt});
  Vec e1 = vec(R1, {"0", "1"});
  EXPECT_EQ(level_residual(k, e1, 1, alt), level_difference(k, e1, 1, alt));
  EXPECT_EQ(level_difference(k, e1, 1, alt), vec(R1, {"-t", "0"}));
}

TEST(Associate, ResidualVanishesWithoutHiggsField) {
  auto R = line_ring(5, 2);
  DeRhamChart u("U", 0, {0, 0}, {mat(R, {{"0", "0"}, {"0", "0"}})}, FrobeniusLifting::standard(R),
                mat(R, {{"1", "0"}, {"0", "2"}}));
  FrobeniusLifting alt = FrobeniusLifting::parse(R, {kAlt});
  Vec e = vec(u.residue_ring(), {"t^3 + 1", "2*t^-1"});
  EXPECT_TRUE(is_zero(change_of_frobenius_residual(u, e, alt)));
  EXPECT_TRUE(is_zero(residual_difference(u, e, alt)));
}

TEST(Associate, HorizontalityCertificate) {
  for (const char* F : {"t^5", kAlt}) {
    DeRhamChart k = kum5(F);
    Submodule G = Submodule::full(k.residue_ring(), 2);
    Submodule S = associated(k, G);
    ValidationReport rep = horizontality_certificate(k, S, G);
    EXPECT_TRUE(rep.ok()) << F;
    EXPECT_NE(rep.find("commutation[g0,t]"), nullptr);
  }
}

TEST(Associate, CommutationIdentityByHand) {
  // nabla(e1) = t^-1 e0 and Phi~(theta e1 (x) f) with f = dF/p = t^4: t^4 t^-5 e0.
  DeRhamChart k = kum5();
  const RingPtr R1 = k.residue_ring();
  Vec lhs = apply_connection(k.connection_mod_p(), 0, vec(R1, {"0", "1"}));
  Vec rhs = scale(k.lifting().derivative_over_p(0, 0),
                  phi_tilde(k).matrix * frobenius_vec(vec(R1, {"t^-1", "0"})));
  EXPECT_EQ(lhs, rhs);
}

TEST(Associate, FlatGeneratorForZeroHiggs) {
  auto R = line_ring(5, 2);
  DeRhamChart u("U", 0, {0, 0}, {mat(R, {{"0", "0"}, {"0", "0"}})}, FrobeniusLifting::standard(R),
                mat(R, {{"1", "0"}, {"0", "2"}}));
  Submodule G = sub(u.residue_ring(), {{"1", "0"}});
  Submodule S = associated(u, G);
  for (const Vec& s : S.normal_form())
    EXPECT_TRUE(is_zero(apply_connection(u.connection_mod_p(), 0, s)));
}

TEST(Associate, HorizontalityViolation) {
  // S = <e1> is not stable under nabla.
  DeRhamChart k = kum5();
  const RingPtr R1 = k.residue_ring();
  Submodule G = Submodule::full(R1, 2);
  EXPECT_EQ(kind_of([&] { horizontality_certificate(k, sub(R1, {{"0", "1"}}), G); }),
            ErrorKind::HorizontalityViolation);
}

TEST(Associate, GluingOnCover) {
  mfv::Model m = load_model("kummer_cover.json");
  const Overlap& ov = m.glued().overlaps.at(0);
  GlueReport g = glue_associated(m.glued(), ov, m.submodule_on("G0", "U"), m.submodule_on("G0", "V"));
  EXPECT_EQ(g.S_first, g.S_second);
  EXPECT_EQ(g.S_first, g.S_overlap);
  RingPtr R = g.S_first.ring();
  EXPECT_EQ(g.S_first, sub(R, {{"1", "0"}}));
}

TEST(Associate, CorruptedGluing) {
  auto R = line_ring(5, 1, true, {{-1, 1}, {1, 1}});
  Matrix T = Matrix::identity(R, 2);
  EXPECT_EQ(kind_of([&] { check_glued_equal(T, sub(R, {{"1", "0"}}), sub(R, {{"0", "1"}})); }),
            ErrorKind::GluingMismatch);
  EXPECT_NO_THROW(check_glued_equal(T, sub(R, {{"1", "0"}}), sub(R, {{"1", "0"}})));
}

TEST(Associate, SaturateOption) {
  auto R = line_ring(5, 2, false);
  DeRhamChart u("U", 0, {0, 0}, {mat(R, {{"0", "0"}, {"0", "0"}})}, FrobeniusLifting::standard(R),
                mat(R, {{"1", "0"}, {"0", "2"}}));
  const RingPtr R1 = u.residue_ring();
  Submodule G = sub(R1, {{"t", "0"}});
  EXPECT_EQ(associate_subsheaf(u, G).S, sub(R1, {{"t^5", "0"}}));
  EXPECT_EQ(associate_subsheaf(u, G, {}, true).S, sub(R1, {{"1", "0"}}));
}
