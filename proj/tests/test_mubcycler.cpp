#include <gtest/gtest.h>

#include <random>

#include "hforge/mubcycler.hpp"

using namespace hforge;

namespace {

GLpMat random_glp(const FField& F, std::mt19937& rng) {
  for (;;) {
    GLpMat G{F.elem(rng() % F.q()), F.elem(rng() % F.q()), F.elem(rng() % F.q()), F.elem(rng() % F.q())};
    if (is_glp(G)) return G;
  }
}

// least m with G^m scalar, by repeated multiplication
long suborder_bruteforce(const GLpMat& G) {
  Mat2 A = G;
  for (long m = 1;; ++m) {
    if (A.is_scalar()) return m;
    A = A * G;
  }
}

}  // namespace

TEST(MubCycler, SmClosedFormMatchesRecurrence) {
  auto F = field_create(7, 1);
  QuadExt Q = quad_ext(F);
  const FField& E = *Q.ext;
  for (auto t : F->elements())
    for (auto D : F->elements()) {
      auto s = sm_sequence(t, D, 50);
      FFElem te = Q.embed(t), De = Q.embed(D);
      FFElem disc = te * te - De * E.from_int(4);
      FFElem j = *ff_sqrt(disc), half = E.from_int(2).inv();
      FFElem lp = (te + j) * half, lm = (te - j) * half;
      for (int m = 1; m <= 50; ++m) {
        FFElem closed = disc.is_zero() ? E.from_int(m) * lp.pow(m - 1) : (lp.pow(m) - lm.pow(m)) / (lp - lm);
        ASSERT_EQ(Q.embed(s[m]), closed) << t.v << " " << D.v << " " << m;
      }
    }
}

TEST(MubCycler, ClassifyExamples) {
  CyclerTools T(field_create(7, 1));
  const FField& F = *T.field();
  GLpMat Z{F.zero(), -F.one(), F.one(), -F.one()};
  auto R = T.classify(Z);
  EXPECT_EQ(R.suborder, 3);
  EXPECT_EQ(R.type, 1);
  EXPECT_FALSE(R.is_cycler);
  EXPECT_EQ(T.classify(Mat2::identity(F)).suborder, 1);
  EXPECT_EQ(T.classify(Mat2::identity(F)).type, 3);
  auto [G0, exists] = T.canonical();
  EXPECT_TRUE(exists);
  auto R0 = T.classify(G0);
  EXPECT_EQ(R0.suborder, 8);
  EXPECT_EQ(R0.type, 2);
  EXPECT_EQ(R0.r, 1);
  EXPECT_TRUE(R0.is_cycler);
  EXPECT_EQ(R0.m0, 3);
  EXPECT_THROW(T.classify({F.zero(), F.zero(), F.zero(), F.zero()}), std::invalid_argument);
}

TEST(MubCycler, SuborderBoundsAndType2Identity) {
  std::mt19937 rng(31);
  for (long p : {3L, 7L, 11L}) {
    CyclerTools T(field_create(p, 1));
    const FField& F = *T.field();
    const long d = p;
    int n2 = 0;
    while (n2 < 200) {
      GLpMat G = random_glp(F, rng);
      auto R = T.classify(G);
      ASSERT_EQ(R.suborder, suborder_bruteforce(G));
      if (R.type == 1) ASSERT_LE(R.suborder, d - 1);
      if (R.type == 3) ASSERT_LE(R.suborder, d);
      if (R.type != 2) continue;
      ++n2;
      ASSERT_LE(R.suborder, d + 1);
      FFElem D = G.det();
      ASSERT_EQ(G.pow(d + 1), (Mat2{D, F.zero(), F.zero(), D}));
      ASSERT_EQ(R.is_cycler, R.suborder == d + 1);
    }
  }
}

TEST(MubCycler, CanonicalForm) {
  for (auto [p, n] : std::vector<std::pair<long, int>>{{3, 1}, {7, 1}, {11, 1}, {3, 3}}) {
    CyclerTools T(field_create(p, n));
    const long d = T.d();
    auto [G0, exists] = T.canonical();
    EXPECT_TRUE(exists);
    EXPECT_EQ(T.classify(G0).suborder, d + 1);
    long order = 1;
    for (Mat2 A = G0; !(A == Mat2::identity(*T.field())); A = A * G0) ++order;
    EXPECT_EQ(order, (p - 1) * (d + 1));
  }
  // entries lie in F_3: Frobenius fixed points of F_9
  CyclerTools T3(field_create(3, 1));
  FFElem eta = T3.ext().eta;
  FFElem e1 = -eta.pow(4), e2 = eta + eta.pow(3);
  EXPECT_EQ(e1.pow(3), e1);
  EXPECT_EQ(e2.pow(3), e2);
  CyclerTools T9(field_create(3, 2));
  EXPECT_FALSE(T9.canonical().second);
}

TEST(MubCycler, EnumerateCyclers) {
  CyclerTools T3(field_create(3, 1));
  long brute = 0;
  for (auto& G : glp_elements(*T3.field()))
    if (suborder_bruteforce(G) == 4) ++brute;
  auto E3 = enumerate_cyclers(T3);
  EXPECT_EQ(E3.scanned, 48);
  EXPECT_EQ(E3.count, brute);
  EXPECT_EQ(enumerate_cyclers(CyclerTools(field_create(7, 1)), 2).count, 504);
  // no cycler when n is even: every type-2 element has suborder at most (d+1)/2
  CyclerTools T9(field_create(3, 2));
  long type2 = 0;
  for (auto& G : glp_elements(*T9.field())) {
    auto R = T9.classify(G);
    if (R.type != 2) continue;
    ++type2;
    ASSERT_LE(R.suborder, 5);
  }
  EXPECT_GT(type2, 0);
  EXPECT_EQ(enumerate_cyclers(T9).count, 0);
}

TEST(MubCycler, CyclingAndAntiSymplecticCyclers) {
  CyclerTools T(field_create(7, 1));
  const FField& F = *T.field();
  auto [G0, exists] = T.canonical();
  std::vector<int> seen;
  int b = 0;
  for (int k = 0; k < 8; ++k) {
    seen.push_back(b);
    b = mobius_action(G0, b);
  }
  EXPECT_EQ(b, 0);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));

  auto has_anti = [](const CyclerTools& C) {
    for (auto& G : glp_elements(*C.field()))
      if (G.det() == -C.field()->one() && C.classify(G).is_cycler) return true;
    return false;
  };
  EXPECT_TRUE(has_anti(T));
  EXPECT_FALSE(has_anti(CyclerTools(field_create(5, 1))));
  (void)F;
}

TEST(MubCycler, EigenvectorsD3) {
  CyclerTools T(field_create(3, 1));
  int n = 0;
  for (auto& G : glp_elements(*T.field())) {
    if (!T.classify(G).is_cycler) continue;
    ++n;
    auto E = cycler_eigenvector(T, G);
    ASSERT_EQ(E.null_dim, 1);
    ASSERT_EQ(gu_apply(E.U, E.psi), E.psi);
    ASSERT_TRUE(E.parity_ok);
  }
  EXPECT_GT(n, 0);
}

TEST(MubCycler, EigenvectorsD7) {
  CyclerTools T(field_create(7, 1));
  auto all = enumerate_cyclers(T, 1, 1000);
  std::mt19937 rng(32);
  for (int t = 0; t < 5; ++t) {
    const GLpMat& G = all.sample[rng() % all.sample.size()];
    auto E = cycler_eigenvector(T, G);
    ASSERT_EQ(E.null_dim, 1);
    ASSERT_EQ(gu_apply(E.U, E.psi), E.psi);
    ASSERT_TRUE(E.parity_ok);  // (-1)^3
  }
  // a second elimination order gives a scalar multiple
  auto [G0, ok] = T.canonical();
  auto E = cycler_eigenvector(T, G0);
  Mat2 G2 = G0.pow(2 * E.m0);
  ExactMat U2 = T.clifford().symp_unitary({G2.a, G2.b, G2.c, G2.d});
  ExactMat P(7, 7, 28);
  for (int i = 0; i < 7; ++i) P(i, 6 - i) = CycloNum(28, 1L);
  auto ns = exact_nullspace((U2 - ExactMat::identity(7, 28)) * P);
  ASSERT_EQ(ns.size(), 1u);
  ExactVec alt = P * ns[0];
  EXPECT_EQ(ray_key(alt), ray_key(E.phi));
}

TEST(MubCycler, Balancedness) {
  {
    CyclerTools T(field_create(7, 1));
    MUBSet M = mub_standard(T.clifford());
    auto E = cycler_eigenvector(T, T.canonical().first);
    auto B = verify_balanced(E.psi, M);
    EXPECT_TRUE(B.balanced);
    EXPECT_TRUE(B.renyi_ok);
  }
  {
    CyclerTools T(field_create(5, 1));
    MUBSet M = mub_standard(T.clifford());
    auto E = cycler_eigenvector(T, T.canonical().first);
    EXPECT_FALSE(verify_balanced(E.psi, M).balanced);
  }
  {
    MUBSet M = mub_standard(field_create(3, 1));
    ExactVec e0(3, CycloNum(12));
    e0[0] = CycloNum(12, 1L);
    auto B = verify_balanced(e0, M);
    EXPECT_FALSE(B.balanced);
    EXPECT_EQ(B.probs[0][0], CycloNum(12, 1L));
    EXPECT_EQ(B.probs[1][0], CycloNum(12, Rational(1, 3)));
  }
}

TEST(MubCycler, BalancedWigner) {
  CyclerTools T(field_create(7, 1));
  const GaloisWH& W = T.clifford().wh();
  auto R = balanced_wigner(W);
  const int N = 28;
  CycloNum total(N);
  for (auto& w : R.W) total += w;
  EXPECT_EQ(total, CycloNum(N, 1L));
  EXPECT_EQ(R.rho.trace(), CycloNum(N, 1L));
  EXPECT_EQ(R.rho * R.rho, R.rho);
  EXPECT_EQ(R.rho.adjoint(), R.rho);
  GLpMat G = T.rotation_cycler();
  EXPECT_TRUE(T.classify(G).is_cycler);
  GUnitary U = gu_new(T.clifford(), G);
  EXPECT_EQ(gu_conjugate_matrix(U, R.rho), R.rho);
  auto E = cycler_eigenvector(T, G);
  ExactMat proj = outer(E.psi, E.psi).scaled(inner(E.psi, E.psi).inverse());
  EXPECT_EQ(proj, R.rho);
  EXPECT_THROW(balanced_wigner(GaloisWH(field_create(5, 1))), std::invalid_argument);
}

TEST(MubCycler, OrbitCountD7) {
  CyclerTools T(field_create(7, 1));
  auto E = cycler_eigenvector(T, T.canonical().first);
  auto R = balanced_orbit_count(T.clifford(), E.psi);
  EXPECT_TRUE(R.complete);
  EXPECT_EQ(R.size, 7 * 7 * 7 * 6 / 2);
}

TEST(MubCycler, PackedVectorsRoundTrip) {
  std::mt19937 rng(33);
  const int N = 28;
  for (int t = 0; t < 20; ++t) {
    ExactVec v(7, CycloNum(N));
    for (auto& x : v)
      for (int k = 0; k < 3; ++k)
        x += CycloNum::zeta(N, rng() % N).scaled(Rational(long(rng() % 2001) - 1000, 1 + long(rng() % 97)));
    v[rng() % 7] = CycloNum(N);
    std::string key = pack_vec(v);
    EXPECT_EQ(unpack_vec(key, 7, N), v);
    EXPECT_EQ(pack_vec(unpack_vec(key, 7, N)), key);
  }
  ExactVec big(2, CycloNum(N, Rational(BigInt("123456789012345678901234567890"), BigInt(7))));
  big[1] = -big[1];
  EXPECT_EQ(unpack_vec(pack_vec(big), 2, N), big);
}
