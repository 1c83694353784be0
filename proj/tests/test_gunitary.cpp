#include <gtest/gtest.h>

#include <random>

#include "hforge/gunitary.hpp"

using namespace hforge;

namespace {

GLpMat random_glp(const FField& F, std::mt19937& rng) {
  for (;;) {
    GLpMat G{F.elem(rng() % F.q()), F.elem(rng() % F.q()), F.elem(rng() % F.q()), F.zero()};
    if (G.a.is_zero()) continue;
    FFElem D = F.from_int(1 + rng() % (F.p() - 1));
    G.d = (D + G.b * G.c) / G.a;
    return G;
  }
}

ExactVec random_vec(int d, int N, std::mt19937& rng) {
  ExactVec v(d, CycloNum(N));
  for (auto& x : v)
    for (int t = 0; t < 3; ++t) x += CycloNum::zeta(N, rng() % N).scaled(Rational(long(rng() % 7) - 3, 1 + long(rng() % 3)));
  return v;
}

}  // namespace

TEST(GUnitary, Construction) {
  auto F = field_create(3, 1);
  GaloisClifford C(F);
  const FField& f = *F;
  GUnitary I = gu_new(C, Mat2::identity(f));
  EXPECT_EQ(I.Usym, ExactMat::identity(3, 12));
  EXPECT_EQ(I.gal.exponent(), 1);
  GUnitary K = gu_new(C, {f.one(), f.zero(), f.zero(), f.from_int(2)});
  EXPECT_EQ(K.Usym, ExactMat::identity(3, 12));
  CycloNum w = CycloNum::zeta(12, 4);
  EXPECT_EQ(K.gal(w), w.conj());
  EXPECT_EQ(K.gal(CycloNum::zeta(12, 3)), CycloNum::zeta(12, 3));

  auto F9 = field_create(3, 2);
  GaloisClifford C9(F9);
  EXPECT_THROW(gu_new(C9, {F9->one(), F9->zero(), F9->zero(), F9->theta()}), std::invalid_argument);
}

TEST(GUnitary, ParityOperator) {
  auto F = field_create(5, 1);
  GaloisClifford C(F);
  const FField& f = *F;
  GUnitary P = gu_new(C, {-f.one(), f.zero(), f.zero(), -f.one()});
  EXPECT_EQ(P.gal.exponent(), 1);
  // A = (-1)^{(p-1)/2} U_P
  EXPECT_EQ(P.Usym, C.wh().parity());
}

TEST(GUnitary, ApplyBasics) {
  auto F = field_create(5, 1);
  GaloisClifford C(F);
  const FField& f = *F;
  const int N = 20;
  GUnitary K2 = gu_new(C, {f.one(), f.zero(), f.zero(), f.from_int(2)});
  ExactVec rat{CycloNum(N, 1L), CycloNum(N, Rational(1, 2)), CycloNum(N), CycloNum(N, -3L), CycloNum(N, 2L)};
  EXPECT_EQ(gu_apply(K2, rat), rat);

  auto w = [&](long k) { return CycloNum::zeta(N, 4 * k); };
  ExactVec v{w(2) + w(3), CycloNum(N, 1L), CycloNum(N, 1L), CycloNum(N, 1L), CycloNum(N, 1L)};
  ExactVec img = gu_apply(K2, v);
  EXPECT_EQ(img[0], w(4) + w(1));
  for (int x = 1; x < 5; ++x) EXPECT_EQ(img[x], CycloNum(N, 1L));
  // both real, far apart as complex numbers
  EXPECT_NEAR(v[0].to_complex().imag(), 0.0, 1e-14);
  EXPECT_GT(std::abs(v[0].to_complex() - img[0].to_complex()), 0.5);

  ExactVec bad(5, CycloNum(12));
  EXPECT_THROW(gu_apply(K2, bad), std::invalid_argument);
}

TEST(GUnitary, FaithfulnessOddN) {
  std::mt19937 rng(21);
  for (long p : {3L, 5L, 7L}) {
    auto F = field_create(p, 1);
    GaloisClifford C(F);
    for (int t = 0; t < 50; ++t) {
      GLpMat G1 = random_glp(*F, rng), G2 = random_glp(*F, rng);
      GUnitary A = gu_new(C, G1), B = gu_new(C, G2);
      GUnitary AB = gu_compose(A, B), direct = gu_new(C, G1 * G2);
      ASSERT_EQ(AB.Usym, direct.Usym) << p;
      ASSERT_EQ(AB.gal, direct.gal);
    }
  }
}

TEST(GUnitary, EvenNProductsAreExact) {
  std::mt19937 rng(22);
  auto F = field_create(3, 2);
  GaloisClifford C(F);
  int minus = 0;
  for (int t = 0; t < 200; ++t) {
    GLpMat G1 = random_glp(*F, rng), G2 = random_glp(*F, rng);
    GUnitary AB = gu_compose(gu_new(C, G1), gu_new(C, G2));
    ExactMat direct = gu_new(C, G1 * G2).Usym;
    if (AB.Usym == direct) continue;
    ASSERT_EQ(AB.Usym, direct.scaled(CycloNum(12, -1L)));
    ++minus;
  }
  // the Gauss-sum prefactor is Galois covariant, so no sign defect appears
  EXPECT_EQ(minus, 0);
}

TEST(GUnitary, InverseAdjointPower) {
  std::mt19937 rng(23);
  auto F = field_create(7, 1);
  GaloisClifford C(F);
  const int N = 28;
  for (int t = 0; t < 4; ++t) {
    GUnitary U = gu_new(C, random_glp(*F, rng));
    GUnitary Ui = gu_inverse(U);
    GUnitary direct = gu_new(C, gu_inverse(U).G);
    EXPECT_EQ(Ui.Usym, direct.Usym);
    for (int k = 0; k < 5; ++k) {
      ExactVec v = random_vec(7, N, rng), y = random_vec(7, N, rng);
      EXPECT_EQ(gu_apply(U, gu_apply(Ui, v)), v);
      EXPECT_EQ(gu_apply(Ui, gu_apply(U, v)), v);
      EXPECT_EQ(inner(gu_apply(U, v), y), U.gal(inner(v, gu_apply(Ui, y))));
      CycloNum nv = inner(v, v);
      if (nv.is_rational()) {
        EXPECT_EQ(inner(gu_apply(U, v), gu_apply(U, v)), nv);
      }
    }
    GUnitary Ud = gu_power(U, 6);
    EXPECT_EQ(Ud.gal.exponent() % 7, 1 % 7);
    EXPECT_EQ(galois_fixing_i(7, 1), GaloisAut(N, Ud.gal.exponent()));
  }
  // rational-norm preservation on a rational vector
  GUnitary U = gu_new(C, random_glp(*F, rng));
  ExactVec r(7, CycloNum(N));
  for (int x = 0; x < 7; ++x) r[x] = CycloNum(N, long(x) - 2);
  EXPECT_EQ(inner(gu_apply(U, r), gu_apply(U, r)), inner(r, r));
}

TEST(GUnitary, ConjugationOfDisplacementsAndPhasePoints) {
  std::mt19937 rng(24);
  for (long p : {3L, 5L}) {
    auto F = field_create(p, 1);
    GaloisClifford C(F);
    const auto& W = C.wh();
    GUnitary U = gu_new(C, random_glp(*F, rng));
    auto [z1, z2] = gu_conjugate(U, F->zero(), F->zero());
    EXPECT_TRUE(z1.is_zero() && z2.is_zero());
    EXPECT_EQ(gu_conjugate_matrix(U, W.parity()), W.parity());
    for (auto u1 : F->elements())
      for (auto u2 : F->elements()) {
        auto [v1, v2] = gu_conjugate(U, u1, u2);
        ASSERT_EQ(gu_conjugate_matrix(U, W.displacement(u1, u2)), W.displacement(v1, v2));
        if (p == 3) ASSERT_EQ(gu_conjugate_matrix(U, W.phase_point_op(u1, u2)), W.phase_point_op(v1, v2));
      }
  }
}

TEST(GUnitary, EmbeddingSimulation) {
  EXPECT_EQ(sigma_perm(5, 1), (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(sigma_perm(3, 2), (std::vector<int>{0, 2, 1}));
  std::mt19937 rng(25);
  for (long p : {3L, 7L}) {
    auto F = field_create(p, 1);
    GaloisClifford C(F);
    const int N = int(4 * p);
    ExactVec v = random_vec(int(p), N, rng);
    ExactVec T = embed_T(v, p);
    EXPECT_EQ(unembed_T(T, p), v);
    for (long x = 0; x < p; ++x) EXPECT_TRUE(T[(p - 1) * p + x].is_zero());
    for (int t = 0; t < 10; ++t) {
      GUnitary U = gu_new(C, random_glp(*F, rng));
      ExactVec w = random_vec(int(p), N, rng);
      ASSERT_EQ(gu_embed_roundtrip(U, w), gu_apply(U, w));
    }
  }
}
