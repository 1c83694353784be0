#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "hforge/clifford.hpp"

namespace hforge {

// Element of GL_p(2, F_d): invertible with determinant in the prime subfield.
using GLpMat = Mat2;

inline bool is_glp(const GLpMat& G) {
  FFElem D = G.det();
  return !D.is_zero() && G.a.F->in_prime_field(D);
}

// U_G = Usym g, with g fixing i and sending omega to omega^Delta.
struct GUnitary {
  GLpMat G;
  SympMat S;  // G K_Delta^{-1}
  ExactMat Usym;
  GaloisAut gal{1, 1};
  long delta = 1;  // Delta as an integer in [1, p)
};

inline SympMat symp_part(const GLpMat& G) {
  if (!is_glp(G)) throw std::invalid_argument("determinant must be a nonzero element of the prime field");
  FFElem Di = G.det().inv();
  return {G.a, G.b * Di, G.c, G.d * Di};
}

inline GUnitary gu_new(const GaloisClifford& C, const GLpMat& G) {
  GUnitary U;
  U.G = G;
  U.S = symp_part(G);
  U.Usym = C.symp_unitary(U.S);
  U.delta = G.det().v;
  U.gal = galois_fixing_i(C.wh().p(), U.delta);
  return U;
}

inline void check_same_field(const GUnitary& A, const GUnitary& B) {
  if (A.G.a.F != B.G.a.F) throw std::invalid_argument("field mismatch");
}

// U_{G1} U_{G2} = U_{S1} g1(U_{S2}) g1 g2
inline GUnitary gu_compose(const GUnitary& A, const GUnitary& B) {
  check_same_field(A, B);
  GUnitary U;
  U.G = A.G * B.G;
  U.S = symp_part(U.G);
  U.Usym = A.Usym * B.Usym.galois(A.gal.exponent());
  U.gal = A.gal * B.gal;
  U.delta = U.G.det().v;
  return U;
}

// (U g)^{-1} = g^{-1}(U^dagger) g^{-1}
inline GUnitary gu_inverse(const GUnitary& A) {
  GUnitary U;
  FFElem Di = A.G.det().inv();
  U.G = {A.G.d * Di, -A.G.b * Di, -A.G.c * Di, A.G.a * Di};
  U.S = symp_part(U.G);
  U.gal = A.gal.inverse();
  U.Usym = A.Usym.adjoint().galois(U.gal.exponent());
  U.delta = U.G.det().v;
  return U;
}

inline GUnitary gu_power(const GUnitary& A, long k) {
  if (k < 0) return gu_power(gu_inverse(A), -k);
  const FField& F = *A.G.a.F;
  GUnitary R;
  R.G = Mat2::identity(F);
  R.S = SympMat::identity(F);
  R.Usym = ExactMat::identity(A.Usym.rows(), A.Usym.conductor());
  R.gal = GaloisAut(A.gal.conductor(), 1);
  for (long i = 0; i < k; ++i) R = gu_compose(R, A);
  return R;
}

inline ExactVec gu_apply(const GUnitary& U, const ExactVec& v) {
  for (const auto& x : v)
    if (x.conductor() != U.Usym.conductor()) throw std::invalid_argument("conductor mismatch");
  return U.Usym * galois_vec(v, U.gal.exponent());
}

// U M U^{-1} for a linear operator M.
inline ExactMat gu_conjugate_matrix(const GUnitary& U, const ExactMat& M) {
  return U.Usym * M.galois(U.gal.exponent()) * U.Usym.adjoint();
}

inline std::pair<FFElem, FFElem> gu_conjugate(const GUnitary& U, const FFElem& u1, const FFElem& u2) {
  return {U.G.a * u1 + U.G.b * u2, U.G.c * u1 + U.G.d * u2};
}

// sigma_Delta as an index map k -> Delta k mod p.
inline std::vector<int> sigma_perm(long p, long delta) {
  std::vector<int> s(p);
  for (long k = 0; k < p; ++k) s[k] = int(mod(delta * k, p));
  return s;
}

// Splits x in Q(zeta_4p) as sum_k q_k omega^k with q_k in Q(i) and q_{p-1} = 0.
inline std::vector<CycloNum> omega_split(const CycloNum& x, long p) {
  const int N = int(4 * p);
  if (x.conductor() != N) throw std::invalid_argument("conductor mismatch");
  const long inv4 = inv_mod(4, p), invp = inv_mod(p, 4);
  std::vector<std::vector<Rational>> q(p, std::vector<Rational>(N, Rational(0)));
  auto c = x.coeffs();
  for (int j = 0; j < N; ++j) {
    if (sgn(c[j]) == 0) continue;
    long s = mod(j * invp, 4), t = mod(j * inv4, p);
    q[t][p * s] += c[j];  // i^s = zeta^{p s}
  }
  for (long k = 0; k + 1 < p; ++k)
    for (int j = 0; j < N; ++j) q[k][j] -= q[p - 1][j];
  std::vector<CycloNum> out;
  for (long k = 0; k + 1 < p; ++k) out.push_back(CycloNum::from_coeffs(N, q[k]));
  out.push_back(CycloNum(N));
  return out;
}

// T(v): block k holds the omega^k coefficients of every component.
inline ExactVec embed_T(const ExactVec& v, long p) {
  const size_t d = v.size();
  ExactVec out(d * p, CycloNum(int(4 * p)));
  for (size_t x = 0; x < d; ++x) {
    auto q = omega_split(v[x], p);
    for (long k = 0; k < p; ++k) out[k * d + x] = q[k];
  }
  return out;
}

inline ExactVec unembed_T(const ExactVec& w, long p) {
  const size_t d = w.size() / p;
  const int N = int(4 * p);
  ExactVec out(d, CycloNum(N));
  for (long k = 0; k < p; ++k) {
    CycloNum wk = CycloNum::zeta(N, 4 * k);
    for (size_t x = 0; x < d; ++x)
      if (!w[k * d + x].is_zero()) out[x] += wk * w[k * d + x];
  }
  return out;
}

// (sigma_Delta (x) U_S) applied to an embedded vector.
inline ExactVec embed_apply(const GUnitary& U, const ExactVec& w, long p) {
  const size_t d = w.size() / p;
  auto s = sigma_perm(p, U.delta);
  ExactVec out(w.size(), CycloNum(int(4 * p)));
  for (long k = 0; k < p; ++k) {
    ExactVec blk(w.begin() + k * d, w.begin() + (k + 1) * d);
    ExactVec img = U.Usym * blk;
    std::copy(img.begin(), img.end(), out.begin() + s[k] * d);
  }
  return out;
}

inline ExactVec gu_embed_roundtrip(const GUnitary& U, const ExactVec& v) {
  const long p = U.gal.conductor() / 4;
  return unembed_T(embed_apply(U, embed_T(v, p), p), p);
}

}  // namespace hforge
