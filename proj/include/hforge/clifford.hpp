#pragma once

#include <stdexcept>
#include <vector>

#include "hforge/weylheisenberg.hpp"

namespace hforge {

// Symplectic matrix over Z_dbar: [[a, b], [c, d]].
struct SympInt {
  long a, b, c, d;
  SympInt reduced(long m) const { return {mod(a, m), mod(b, m), mod(c, m), mod(d, m)}; }
  long det() const { return a * d - b * c; }
  SympInt operator*(const SympInt& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  std::pair<long, long> apply(long u1, long u2) const { return {a * u1 + b * u2, c * u1 + d * u2}; }
};

inline bool invertible_mod(long x, long m) { return std::gcd(mod(x, m), m) == 1; }

// Ordinary-flavor U_S, defined up to a global phase.
inline CMat ordinary_symp_unitary(int d, SympInt S) {
  const long db = dbar(d);
  S = S.reduced(db);
  if (mod(S.det(), db) != 1) throw std::invalid_argument("matrix is not symplectic");
  if (!invertible_mod(S.b, db)) {
    for (long k = 0; k < db; ++k) {
      if (!invertible_mod(k * S.b + S.d, db)) continue;
      SympInt S1{0, -1, 1, k};
      SympInt S1inv{k, 1, -1, 0};
      return ordinary_symp_unitary(d, S1) * ordinary_symp_unitary(d, S1inv * S);
    }
    throw std::logic_error("no symplectic decomposition found");
  }
  const long binv = inv_mod(S.b, db);
  CMat U(d, d);
  const double norm = 1.0 / std::sqrt(double(d));
  for (long x = 0; x < d; ++x)
    for (long y = 0; y < d; ++y) {
      long e = binv * mod(S.a * y * y - 2 * x * y + S.d * x * x, db);
      U(x, y) = norm * tau_pow(d, e);
    }
  return U;
}

struct ZaunerSpectrum {
  CMat U;
  std::array<CMat, 3> spaces;  // bases of H_1, H_eta, H_eta^2
  std::array<int, 3> dims;
};

inline std::array<int, 3> zauner_dims_table(int d) {
  int k = d / 3;
  switch (d % 3) {
    case 0: return {k + 1, k, k - 1};
    case 1: return {k + 1, k, k};
    default: return {k + 1, k + 1, k};
  }
}

// Zauner unitary for [[0,-1],[1,-1]] with phase exp(i pi (d-1)/12).
inline ZaunerSpectrum zauner(int d, double tol = kDefaultTol) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  const long db = dbar(d);
  CMat U(d, d);
  const cplx phase = std::polar(1.0 / std::sqrt(double(d)), M_PI * (d - 1) / 12.0);
  for (long x = 0; x < d; ++x)
    for (long y = 0; y < d; ++y) U(x, y) = phase * tau_pow(d, mod(x * x + 2 * x * y, db));
  ZaunerSpectrum out;
  out.U = U;
  for (auto& s : out.spaces) s = CMat(d, 0);
  for (auto& e : eig_unitary(U, tol)) {
    int idx = -1;
    for (int k = 0; k < 3; ++k)
      if (std::abs(e.value - std::polar(1.0, 2 * M_PI * k / 3.0)) < 1e-6) idx = k;
    if (idx < 0) throw std::logic_error("Zauner eigenvalue is not a cube root of unity");
    out.spaces[idx] = e.basis;
  }
  for (int k = 0; k < 3; ++k) out.dims[k] = int(out.spaces[k].cols());
  return out;
}

// Symplectic matrix over F_d.
struct SympMat {
  FFElem a, b, c, d;
  FFElem det() const { return a * d - b * c; }
  SympMat operator*(const SympMat& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  bool operator==(const SympMat& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  SympMat inverse() const {
    FFElem di = det().inv();
    return {d * di, -b * di, -c * di, a * di};
  }
  std::pair<FFElem, FFElem> apply(const FFElem& u1, const FFElem& u2) const { return {a * u1 + b * u2, c * u1 + d * u2}; }
  static SympMat identity(const FField& F) { return {F.one(), F.zero(), F.zero(), F.one()}; }
};

// Exact faithful representation of SL(2, F_d), d odd prime power.
class GaloisClifford {
 public:
  explicit GaloisClifford(FieldPtr F) : wh_(std::move(F)) {
    // The beta != 0 prefactor is l(2 beta) / G with G = sum_x omega^{tr(x^2)}.
    // For n = 1 this is the prime-dimension phase (-1)^k l(-beta) / sqrt(p)
    // (d = 4k+1) or i (-1)^{k+1} l(-beta) / sqrt(p) (d = 4k+3).
    const FField& F_ = *wh_.field();
    CycloNum G(wh_.conductor());
    for (auto x : F_.elements()) G += wh_.omega(ff_trace(x * x));
    inv_gauss_ = G.inverse();
  }
  const GaloisWH& wh() const { return wh_; }
  const FieldPtr& field() const { return wh_.field(); }
  int conductor() const { return wh_.conductor(); }

  ExactMat symp_unitary(const SympMat& S) const {
    const FField& F = *field();
    if (S.det() != F.one()) throw std::invalid_argument("matrix is not symplectic");
    const int d = wh_.d(), N = conductor();
    ExactMat U(d, d, N);
    const FFElem half = wh_.half();
    if (S.b.is_zero()) {
      long l = legendre(S.a);
      for (auto x : F.elements()) {
        long e = ff_trace(S.a * S.c * x * x * half);
        U((S.a * x).v, x.v) = l > 0 ? wh_.omega(e) : -wh_.omega(e);
      }
      return U;
    }
    CycloNum h = legendre(S.b + S.b) > 0 ? inv_gauss_ : -inv_gauss_;
    FFElem inv2b = (S.b + S.b).inv();
    for (auto x : F.elements())
      for (auto y : F.elements()) {
        FFElem q = (S.d * x * x - (x * y + x * y) + S.a * y * y) * inv2b;
        U(x.v, y.v) = h * wh_.omega(ff_trace(q));
      }
    return U;
  }

 private:
  GaloisWH wh_;
  CycloNum inv_gauss_;
};

// Basis labels: field codes 0..d-1, and d for infinity.
struct MUBSet {
  int d = 0;
  std::vector<ExactMat> bases;  // columns are |b, v>
  std::vector<CMat> bases_c;
  int infinity() const { return d; }
};

inline SympMat mub_generator(const FField& F, int label) {
  if (label == int(F.q())) return {F.zero(), F.one(), -F.one(), F.zero()};
  return {F.one(), F.elem(label), F.zero(), F.one()};
}

inline MUBSet mub_standard(const GaloisClifford& C) {
  const FField& F = *C.field();
  MUBSet M;
  M.d = int(F.q());
  for (int b = 0; b <= M.d; ++b) {
    M.bases.push_back(C.symp_unitary(mub_generator(F, b)));
    M.bases_c.push_back(M.bases.back().to_cmat());
  }
  return M;
}

inline MUBSet mub_standard(const FieldPtr& F) { return mub_standard(GaloisClifford(F)); }

// 2x2 matrix over F_d acting on basis labels by b -> (a b + beta)/(c b + delta).
struct Mat2 {
  FFElem a, b, c, d;
  FFElem det() const { return a * d - b * c; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  bool operator!=(const Mat2& o) const { return !(*this == o); }
  static Mat2 from(const SympMat& S) { return {S.a, S.b, S.c, S.d}; }
  static Mat2 identity(const FField& F) { return {F.one(), F.zero(), F.zero(), F.one()}; }
  Mat2 pow(long k) const {
    Mat2 r = identity(*a.F), x = *this;
    for (; k > 0; k >>= 1) {
      if (k & 1) r = r * x;
      x = x * x;
    }
    return r;
  }
  bool is_scalar() const { return b.is_zero() && c.is_zero() && a == d; }
  std::string to_string() const {
    return "[[" + a.to_string() + "," + b.to_string() + "],[" + c.to_string() + "," + d.to_string() + "]]";
  }
};

inline int mobius_action(const Mat2& G, int label) {
  const FField& F = *G.a.F;
  const int inf = int(F.q());
  if (G.det().is_zero()) throw std::invalid_argument("singular matrix");
  if (label == inf) return G.c.is_zero() ? inf : (G.a / G.c).v;
  FFElem b = F.elem(label);
  FFElem den = G.c * b + G.d;
  if (den.is_zero()) return inf;
  return ((G.a * b + G.b) / den).v;
}

// Predicted image label and vector index of |b, v> under U_S (up to phase).
inline std::pair<int, int> mobius_vector_action(const Mat2& G, int label, int v) {
  const FField& F = *G.a.F;
  const int inf = int(F.q());
  FFElem vv = F.elem(v);
  if (label == inf) {
    if (!G.c.is_zero()) return {(G.a / G.c).v, (vv / G.c).v};
    return {inf, (G.d * vv).v};
  }
  FFElem b = F.elem(label);
  FFElem den = G.c * b + G.d;
  if (den.is_zero()) return {inf, (-G.c * vv).v};
  return {((G.a * b + G.b) / den).v, (vv / den).v};
}

}  // namespace hforge
