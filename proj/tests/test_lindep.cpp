#include <gtest/gtest.h>

#include "hforge/lindep.hpp"

using namespace hforge;

namespace {

// every d-subset through a full SVD, no pruning
std::vector<std::vector<int>> brute_force(const OrbitContext& ctx) {
  const int d = ctx.d, n = d * d;
  std::vector<std::vector<int>> out;
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  for (;;) {
    CMat M(d, d);
    for (int j = 0; j < d; ++j) M.col(j) = ctx.orbit[idx[j]];
    Eigen::JacobiSVD<CMat> svd(M);
    if (svd.singularValues()(d - 1) < 1e-10 * svd.singularValues()(0)) out.push_back(idx);
    int i = d - 1;
    while (i >= 0 && idx[i] == n - d + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

std::vector<std::vector<int>> points_of(const std::vector<DepSet>& s) {
  std::vector<std::vector<int>> out;
  for (auto& x : s) out.push_back(x.points);
  return out;
}

bool is_subset(const std::vector<DepSet>& small, const std::vector<DepSet>& big) {
  std::set<std::vector<int>> b;
  for (auto& s : big) b.insert(s.points);
  for (auto& s : small)
    if (!b.count(s.points)) return false;
  return true;
}

}  // namespace

TEST(LinDep, ZaunerPermutesDisplacements) {
  for (int d : {3, 4, 6}) {
    auto Z = zauner(d);
    auto perm = affine_perm(d, zauner_symplectic(), 0);
    for (int p = 0; p < d * d; ++p) {
      CMat C = Z.U * ordinary_displacement(d, p / d, p % d) * Z.U.adjoint();
      CMat T = ordinary_displacement(d, perm[p] / d, perm[p] % d);
      cplx c = (T.adjoint() * C).trace() / double(d);
      EXPECT_NEAR(std::abs(c), 1.0, 1e-10);
      EXPECT_LT((C - c * T).norm(), 1e-10);
    }
  }
}

TEST(LinDep, SingletsAreZaunerFixedPoints) {
  for (int d : {4, 5, 6, 9}) {
    auto perm = affine_perm(d, zauner_symplectic(), 0);
    std::vector<int> fixed;
    for (int p = 0; p < d * d; ++p)
      if (perm[p] == p) fixed.push_back(p);
    if (d % 3) {
      EXPECT_EQ(fixed, std::vector<int>{0});
    } else {
      int k = d / 3;
      std::vector<int> want{0, k * d + 2 * k, 2 * k * d + k};
      std::sort(want.begin(), want.end());
      EXPECT_EQ(fixed, want);
    }
  }
  for (int d : {6, 9}) {
    auto M = *m_symplectic(d);
    auto perm = affine_perm(d, M, 0);
    std::vector<int> id(perm.size()), pw;
    for (int p = 0; p < d * d; ++p) id[p] = p;
    pw = id;
    int order = 0;
    do {
      for (auto& x : pw) x = perm[x];
      ++order;
    } while (pw != id);
    EXPECT_EQ(order, 3);  // M^3 = I on Z_d^2
  }
  EXPECT_FALSE(m_symplectic(5).has_value());
}

TEST(LinDep, ScannerMatchesBruteForce) {
  for (int d : {3, 4, 5})
    for (int l = 0; l < 3; ++l) {
      if (zauner_dims_table(d)[l] == 0) continue;
      auto ctx = make_context(d, ZLabel(l), 100 + l);
      EXPECT_EQ(points_of(exhaustive_search(ctx)), brute_force(ctx)) << d << " " << l;
    }
}

TEST(LinDep, CountsSmallDimensions) {
  auto count = [](int d, int l) { return exhaustive_search(make_context(d, ZLabel(l), 7)).size(); };
  EXPECT_EQ(count(4, 0), 0u);
  EXPECT_EQ(count(4, 1), 116u);
  EXPECT_EQ(count(4, 2), 116u);
  EXPECT_EQ(count(5, 0), 0u);
  EXPECT_EQ(count(5, 1), 0u);
  EXPECT_EQ(count(5, 2), 6600u);
  EXPECT_EQ(count(6, 0), 984u);
}

TEST(LinDep, PredictedCounts) {
  // frozen from an independent enumeration of triplet/singlet compositions
  auto pred = [](int d, int l) { return predicted_sets(make_context(d, ZLabel(l), 9)).size(); };
  EXPECT_EQ(pred(4, 0), 0u);
  EXPECT_EQ(pred(4, 1), 68u);
  EXPECT_EQ(pred(4, 2), 68u);
  EXPECT_EQ(pred(5, 0), 0u);
  EXPECT_EQ(pred(5, 1), 0u);
  EXPECT_EQ(pred(5, 2), 4200u);
  EXPECT_EQ(pred(6, 0), 768u);
  EXPECT_EQ(pred(6, 1), 75342u);
  EXPECT_EQ(pred(7, 1), 5796u);
  EXPECT_EQ(pred(7, 0), 0u);
}

TEST(LinDep, PredictedIsSubsetOfExhaustive) {
  for (int d : {4, 5, 6})
    for (int l = 0; l < 3; ++l) {
      if (d == 6 && l > 0) continue;
      auto ctx = make_context(d, ZLabel(l), 11);
      auto P = predicted_sets(ctx);
      auto E = exhaustive_search(ctx);
      EXPECT_GE(E.size(), P.size());
      EXPECT_TRUE(is_subset(P, E));
      for (auto& s : P) EXPECT_LT(s.rank, d);
    }
}

TEST(LinDep, GenericAcrossInitialVectors) {
  auto a = exhaustive_search(make_context(6, ZLabel::H1, 1));
  auto b = exhaustive_search(make_context(6, ZLabel::H1, 2));
  EXPECT_EQ(points_of(a), points_of(b));
}

TEST(LinDep, ThreadCountDoesNotChangeResult) {
  auto ctx = make_context(5, ZLabel::Heta2, 3);
  SearchOptions one, three;
  three.threads = 3;
  EXPECT_EQ(points_of(exhaustive_search(ctx, one)), points_of(exhaustive_search(ctx, three)));
  EXPECT_EQ(exhaustive_count(ctx, three), 6600);
}

TEST(LinDep, OutputIsColexSorted) {
  auto E = exhaustive_search(make_context(4, ZLabel::Heta, 5));
  for (size_t i = 1; i < E.size(); ++i) EXPECT_TRUE(colex_less(E[i - 1].points, E[i].points));
}

TEST(LinDep, SizeGuard) {
  auto ctx = make_context(8, ZLabel::Heta2, 1);
  EXPECT_THROW(exhaustive_search(ctx), std::length_error);
  auto c9 = make_context(9, ZLabel::H1, 1);
  SearchOptions o;
  o.long_run = true;
  EXPECT_THROW(exhaustive_count(c9, o), std::length_error);
}

TEST(LinDep, D6OrbitStructure) {
  auto ctx = make_context(6, ZLabel::H1, 7);
  auto E = exhaustive_search(ctx);
  auto O = orbit_grouping(E, 6);
  ASSERT_EQ(O.orbits.size(), 28u);
  int z = 0, m_only = 0, short_orbits = 0;
  for (auto& o : O.orbits) {
    EXPECT_TRUE(o.complete);
    z += o.z_inv;
    m_only += o.m_inv && !o.z_inv;
    EXPECT_TRUE(o.z_inv || o.m_inv);
    if (o.length == 12) ++short_orbits;
    else EXPECT_EQ(o.length, 36);
  }
  EXPECT_EQ(short_orbits, 1);
  EXPECT_EQ(z, 22);
  EXPECT_EQ(m_only, 6);
  // the short orbit is fixed by translations through (2,4) and (4,2)
  DepSet s{O.orbits[0].representative, 5};
  tag_set(s, 6);
  EXPECT_EQ(s.stabilizer, 3);
  EXPECT_EQ(translate(s.points, 6, 2 * 6 + 4), s.points);
  EXPECT_EQ(translate(s.points, 6, 4 * 6 + 2), s.points);
  // the Zauner-invariant orbits are the predicted ones
  long zsets = 0;
  for (auto& o : O.orbits)
    if (o.z_inv) zsets += o.length;
  EXPECT_EQ(zsets, 768);

  auto C = configuration(E, 6);
  EXPECT_EQ(C.points, 36);
  EXPECT_EQ(C.per_point, 164);
  EXPECT_EQ(C.sets, 984);
  EXPECT_EQ(C.per_set, 6);
}

TEST(LinDep, D6NormalOrthogonality) {
  auto ctx = make_context(6, ZLabel::H1, 7);
  auto E = exhaustive_search(ctx);
  auto N = normals_and_orthogonality(E, ctx);
  EXPECT_EQ(N.skipped, 0);
  ASSERT_EQ(N.normals.size(), 984u);
  for (size_t k = 0; k < N.normals.size(); ++k) {
    EXPECT_NEAR(N.normals[k].norm(), 1.0, 1e-12);
    for (int p : E[N.set_index[k]].points) EXPECT_LT(std::abs(N.normals[k].dot(ctx.orbit[p])), 1e-10);
  }
  EXPECT_GT(N.triples, 20000);
  EXPECT_EQ(N.quadruples, 0);
  auto N2 = normals_and_orthogonality(exhaustive_search(make_context(6, ZLabel::H1, 8)), make_context(6, ZLabel::H1, 8));
  EXPECT_EQ(N2.triples, N.triples);

  SicSearchOptions so;
  so.subspace = zauner(6).spaces[0];
  auto R = sic_search(6, 3, so);
  ASSERT_TRUE(R.fiducial);
  auto sctx = context_from_vector(*R.fiducial);
  EXPECT_EQ(sctx.label, ZLabel::H1);
  auto Es = exhaustive_search(sctx);
  EXPECT_EQ(points_of(Es), points_of(E));
  auto Ns = normals_and_orthogonality(Es, sctx);
  EXPECT_EQ(Ns.quadruples, 9);
  EXPECT_EQ(Ns.triples - Ns.triples_in_quadruples - N.triples, 216);
  auto O = orbit_grouping(Es, 6);
  std::set<long> orbits;
  for (auto& q : Ns.quadruple_list)
    for (long k : q) orbits.insert(O.orbit_of[Ns.set_index[k]]);
  ASSERT_EQ(orbits.size(), 1u);
  EXPECT_EQ(O.orbits[*orbits.begin()].length, 36);
}

TEST(LinDep, HesseConfiguration) {
  auto ctx = context_from_vector(sic3_family(0).vectors[0]);
  EXPECT_EQ(ctx.label, ZLabel::H1);
  auto E = exhaustive_search(ctx);
  auto C = configuration(E, 3);
  EXPECT_EQ(C.sets, 12);
  EXPECT_EQ(C.per_set, 3);
  EXPECT_EQ(C.per_point, 4);
  // any two points lie on exactly one line
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b) {
      int lines = 0;
      for (auto& s : E) lines += std::count(s.points.begin(), s.points.end(), a) && std::count(s.points.begin(), s.points.end(), b);
      EXPECT_EQ(lines, 1);
    }
  auto N = normals_and_orthogonality(E, ctx);
  EXPECT_TRUE(forms_complete_mub(N.normals, 3));
  auto O = orbit_grouping(E, 3);
  EXPECT_EQ(O.orbits.size(), 4u);
  for (auto& o : O.orbits) EXPECT_EQ(o.length, 3);

  // a generic member of the family only has the three trivial sets
  auto g = make_candidate(3, wh_orbit(sic3_family(0.1).vectors[0]));
  EXPECT_EQ(dependent_subsets(g), 3);
}

TEST(LinDep, RstAlgebra) {
  auto o = rst_ops();
  CMat I = CMat::Identity(6, 6);
  EXPECT_LT((o.S - o.T.adjoint()).norm(), 1e-10);
  EXPECT_LT((o.S * o.S).norm(), 1e-10);
  EXPECT_LT((o.T * o.T).norm(), 1e-10);
  EXPECT_LT((o.R * o.R - I).norm(), 1e-10);
  EXPECT_LT((o.S * o.T - I - o.R).norm(), 1e-10);
  EXPECT_LT((o.T * o.S - I + o.R).norm(), 1e-10);
  CMat P = o.S * o.T / 2.0;
  EXPECT_LT((P * P - P).norm(), 1e-10);
  EXPECT_NEAR(P.trace().real(), 3.0, 1e-10);
}

TEST(LinDep, SmallSics) {
  for (int seed = 0; seed < 10; ++seed) {
    auto a = small_sic_d6(make_context(6, ZLabel::Heta, seed).psi);
    EXPECT_TRUE(a.is_sic);
    EXPECT_EQ(a.span_dim, 2);
    EXPECT_NEAR(a.overlap, 1 / std::sqrt(3.0), 1e-10);
    EXPECT_TRUE(a.S_kills);
    EXPECT_EQ(a.R_sign, 1);
    auto b = small_sic_d6(make_context(6, ZLabel::Heta2, seed).psi);
    EXPECT_TRUE(b.is_sic);
    EXPECT_TRUE(b.T_kills);
    EXPECT_EQ(b.R_sign, -1);
    auto c = small_sic_d6(make_context(6, ZLabel::H1, seed).psi);
    EXPECT_TRUE(c.equiangular);
    EXPECT_EQ(c.span_dim, 4);
    EXPECT_FALSE(c.is_sic);
  }
  CVec x = CVec::Zero(6);
  x(0) = 1;
  x(1) = 1;
  EXPECT_THROW(small_sic_d6(x), std::invalid_argument);
  EXPECT_THROW(small_sic_d6(CVec::Ones(5)), std::invalid_argument);
}

TEST(LinDep, SmallSicsAmongNormals) {
  // normals of sets with three singlets give 2-dim SICs under {D_03, D_30, D_33}
  auto ctx = make_context(6, ZLabel::H1, 7);
  auto E = exhaustive_search(ctx);
  auto N = normals_and_orthogonality(E, ctx);
  std::set<std::vector<size_t>> sics;
  for (auto& n : N.normals) {
    std::vector<CVec> four{n, ordinary_displace(6, 0, 3, n), ordinary_displace(6, 3, 0, n), ordinary_displace(6, 3, 3, n)};
    CMat M(6, 4);
    for (int j = 0; j < 4; ++j) M.col(j) = four[j];
    if (rank_nullspace(M, 1e-9).rank != 2) continue;
    bool eq = true;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) eq &= std::abs(std::abs(four[i].dot(four[j])) - 1 / std::sqrt(3.0)) < 1e-9;
    if (!eq) continue;
    std::vector<size_t> members;
    for (auto& v : four)
      for (size_t k = 0; k < N.normals.size(); ++k)
        if (std::abs(std::abs(N.normals[k].dot(v)) - 1) < 1e-9) members.push_back(k);
    ASSERT_EQ(members.size(), 4u);
    std::sort(members.begin(), members.end());
    sics.insert(members);
  }
  EXPECT_EQ(sics.size(), 30u);
}
