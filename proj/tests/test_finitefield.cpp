#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hforge/finitefield.hpp"

using namespace hforge;

TEST(FiniteField, F4Tables) {
  auto F = field_create(2, 2);
  // codes: 0, 1, lambda = 2, lambda + 1 = 3
  const int add[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int mul[4][4] = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      EXPECT_EQ((F->elem(a) + F->elem(b)).v, add[a][b]);
      EXPECT_EQ((F->elem(a) * F->elem(b)).v, mul[a][b]);
    }
}

TEST(FiniteField, F9Modulus) {
  auto F = field_create(3, 2);
  EXPECT_EQ(F->modulus(), (poly::Poly{1, 0, 1}));
  EXPECT_THROW(field_create(6, 1), std::invalid_argument);
}

TEST(FiniteField, PrimitiveElementOrder) {
  for (auto [p, n] : std::vector<std::pair<long, int>>{{3, 1}, {3, 2}, {3, 3}, {5, 2}, {7, 1}, {7, 2}, {11, 1}}) {
    auto F = field_create(p, n);
    EXPECT_EQ(F->order(F->theta().v), F->q() - 1);
    // least: every smaller nonzero code has lower order
    for (long c = 1; c < F->theta().v; ++c) EXPECT_LT(F->order(int(c)), F->q() - 1);
  }
}

TEST(FiniteField, Trace) {
  auto F = field_create(3, 2);
  EXPECT_EQ(ff_trace(F->zero()), 0);
  for (long a = 0; a < 3; ++a) EXPECT_EQ(ff_trace(F->from_int(a)), mod(2 * a, 3));
  // element x with x^2 = -1: x + x^3 = x - x = 0
  EXPECT_EQ(ff_trace(F->from_coeffs({0, 1})), 0);
  auto F27 = field_create(3, 3);
  std::mt19937 rng(1);
  for (int t = 0; t < 200; ++t) {
    FFElem x = F27->elem(rng() % 27), y = F27->elem(rng() % 27);
    long a = rng() % 3;
    EXPECT_EQ(ff_trace(F27->from_int(a) * x + y), mod(a * ff_trace(x) + ff_trace(y), 3));
  }
}

TEST(FiniteField, LegendreAndSqrt) {
  auto F = field_create(7, 1);
  EXPECT_EQ(legendre(F->from_int(2)), 1);
  EXPECT_EQ(legendre(F->from_int(3)), -1);
  EXPECT_EQ(legendre(F->zero()), 0);
  EXPECT_EQ(ff_sqrt(F->from_int(2))->v, 3);
  EXPECT_FALSE(ff_sqrt(F->from_int(3)).has_value());
  EXPECT_EQ(ff_sqrt(F->zero())->v, 0);
  for (auto [p, n] : std::vector<std::pair<long, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {5, 2}, {3, 3}}) {
    auto G = field_create(p, n);
    std::set<int> squares;
    for (auto x : G->elements()) squares.insert((x * x).v);
    for (auto x : G->elements()) {
      int expect = x.is_zero() ? 0 : (squares.count(x.v) ? 1 : -1);
      EXPECT_EQ(legendre(x), expect);
      for (auto y : G->elements())
        if (!x.is_zero() && !y.is_zero()) EXPECT_EQ(legendre(x * y), legendre(x) * legendre(y));
    }
  }
}

TEST(FiniteField, FrobeniusProperties) {
  std::mt19937 rng(2);
  for (auto [p, n] : std::vector<std::pair<long, int>>{{3, 2}, {3, 3}, {7, 2}}) {
    auto F = field_create(p, n);
    for (int t = 0; t < 1000; ++t) {
      FFElem a = F->elem(rng() % F->q()), b = F->elem(rng() % F->q());
      ASSERT_EQ((a + b).pow(p), a.pow(p) + b.pow(p));
    }
    for (auto a : F->elements()) {
      EXPECT_EQ(a.pow(p) == a, F->in_prime_field(a));
      EXPECT_EQ(a.pow(F->q()), a);
    }
  }
  for (auto [p, n] : std::vector<std::pair<long, int>>{{5, 2}, {11, 1}, {13, 1}})
    for (auto a : field_create(p, n)->elements()) EXPECT_EQ(a.pow(field_create(p, n)->q()).v, a.v);
}

TEST(FiniteField, FieldAxioms) {
  auto F = field_create(5, 2);
  for (auto a : F->elements()) {
    EXPECT_EQ(a + (-a), F->zero());
    if (!a.is_zero()) EXPECT_EQ(a * a.inv(), F->one());
    for (auto b : F->elements()) EXPECT_EQ((a + b) * b, a * b + b * b);
  }
}

TEST(FiniteField, QuadExt) {
  auto Q3 = quad_ext(field_create(3, 1));
  EXPECT_EQ(Q3.ext->q(), 9);
  EXPECT_EQ(Q3.ext->order(Q3.eta.v), 8);
  auto Q7 = quad_ext(field_create(7, 1));
  EXPECT_EQ(Q7.ext->order(Q7.eta.v), 48);
  ASSERT_TRUE(Q7.iM.has_value());
  EXPECT_EQ(*Q7.iM * *Q7.iM, -Q7.ext->one());
  auto Q27 = quad_ext(field_create(3, 3));
  EXPECT_EQ(Q27.ext->order(Q27.eta.v), 2 * 28);
  // embedding is a ring homomorphism onto the Frobenius-fixed subfield
  for (auto a : Q27.base->elements())
    for (auto b : Q27.base->elements()) {
      ASSERT_EQ(Q27.embed(a * b), Q27.embed(a) * Q27.embed(b));
      ASSERT_EQ(Q27.embed(a + b), Q27.embed(a) + Q27.embed(b));
    }
  for (auto y : Q27.ext->elements()) EXPECT_EQ(y.pow(27) == y, Q27.restrict(y).has_value());
  EXPECT_THROW(quad_ext(field_create(2, 1)), std::invalid_argument);
}
