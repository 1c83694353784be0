#pragma once

#include <algorithm>
#include <cstring>
#include <deque>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "hforge/gunitary.hpp"
#include "hforge/parallel.hpp"

namespace hforge {

// s_0 = 0, s_1 = 1, s_{m+1} = t s_m - Delta s_{m-1}; returns s_0..s_M.
inline std::vector<FFElem> sm_sequence(const FFElem& t, const FFElem& D, int M) {
  const FField& F = *t.F;
  std::vector<FFElem> s{F.zero(), F.one()};
  while (int(s.size()) <= M) s.push_back(t * s.back() - D * s[s.size() - 2]);
  s.resize(M + 1);
  return s;
}

struct CyclerReport {
  GLpMat G;
  int type = 0;       // 1, 2 or 3
  long suborder = 0;  // least m with G^m scalar
  long r = -1;        // eigenvalues eta^r, eta^{dr} (type 2 only)
  bool is_cycler = false;
  long m0 = 0;  // half the multiplicative order of det G
};

class CyclerTools {
 public:
  explicit CyclerTools(FieldPtr F) : F_(F), Q_(quad_ext(F)), C_(F) {}
  const FieldPtr& field() const { return F_; }
  const QuadExt& ext() const { return Q_; }
  const GaloisClifford& clifford() const { return C_; }
  long d() const { return F_->q(); }
  long p() const { return F_->p(); }

  CyclerReport classify(const GLpMat& G) const {
    if (!is_glp(G)) throw std::invalid_argument("determinant must be a nonzero element of the prime field");
    CyclerReport R;
    R.G = G;
    const FFElem t = G.a + G.d, D = G.det();
    const int l = legendre(t * t - D * F_->from_int(4));
    R.type = l > 0 ? 1 : (l < 0 ? 2 : 3);
    const long d = this->d();
    if (G.is_scalar()) {
      R.suborder = 1;
    } else {
      auto s = sm_sequence(t, D, int(d + 1));
      for (long m = 1; m <= d + 1; ++m)
        if (s[m].is_zero()) {
          R.suborder = m;
          break;
        }
    }
    if (R.type == 2) {
      const FField& E = *Q_.ext;
      FFElem te = Q_.embed(t), De = Q_.embed(D);
      FFElem j = *ff_sqrt(te * te - De * E.from_int(4));
      FFElem half = E.from_int(2).inv();
      const long step = (d - 1) / (p() - 1), ord = (p() - 1) * (d + 1);
      long r1 = E.log(((te + j) * half).v), r2 = E.log(((te - j) * half).v);
      if (r1 % step || r2 % step) throw std::logic_error("eigenvalue outside the eta subgroup");
      R.r = std::min(r1 / step, r2 / step) % ord;
      R.is_cycler = F_->n() % 2 == 1 && std::gcd(R.r, d + 1) == 1;
    }
    R.m0 = F_->order(D.v) / 2;
    return R;
  }

  // G_0 = [[0, -eta^{d+1}], [1, eta + eta^d]]; a cycler exists iff n is odd.
  std::pair<GLpMat, bool> canonical() const {
    const long d = this->d();
    FFElem eta = Q_.eta;
    auto a = Q_.restrict(-eta.pow(d + 1));
    auto b = Q_.restrict(eta + eta.pow(d));
    if (!a || !b) throw std::logic_error("G_0 entries outside the base field");
    GLpMat G0{F_->zero(), *a, F_->one(), *b};
    return {G0, F_->n() % 2 == 1};
  }

  // The specific cycler [[alpha, beta], [-beta, alpha]] with alpha = (eta+eta^d)/2,
  // beta = i_M (eta - eta^d)/2; requires d = 3 mod 4.
  GLpMat rotation_cycler() const {
    if (!Q_.iM) throw std::invalid_argument("requires d = 3 mod 4");
    const FField& E = *Q_.ext;
    FFElem eta = Q_.eta, etad = eta.pow(d()), half = E.from_int(2).inv();
    auto a = Q_.restrict((eta + etad) * half);
    auto b = Q_.restrict(*Q_.iM * (eta - etad) * half);
    if (!a || !b) throw std::logic_error("rotation entries outside the base field");
    return {*a, *b, -*b, *a};
  }

 private:
  FieldPtr F_;
  QuadExt Q_;
  GaloisClifford C_;
};

inline std::vector<GLpMat> glp_elements(const FField& F) {
  std::vector<GLpMat> out;
  for (auto a : F.elements())
    for (auto b : F.elements())
      for (auto c : F.elements())
        for (auto d : F.elements()) {
          GLpMat G{a, b, c, d};
          if (is_glp(G)) out.push_back(G);
        }
  return out;
}

struct CyclerEnumeration {
  long scanned = 0;
  long count = 0;
  std::vector<GLpMat> sample;
};

// Scans GL_p(2, F_d); the first matrix entry partitions the work.
inline CyclerEnumeration enumerate_cyclers(const CyclerTools& T, int threads = 1, size_t sample_size = 16,
                                           long max_scan = 50'000'000) {
  const FField& F = *T.field();
  const long q = F.q();
  if (q * q * q * q > max_scan) throw std::length_error("GL scan size exceeds guard");
  std::vector<long> counts(q, 0), scanned(q, 0);
  std::vector<std::vector<GLpMat>> samples(q);
  parallel_for(q, threads, [&](long a) {
    FFElem A = F.elem(a);
    for (auto b : F.elements())
      for (auto c : F.elements())
        for (auto d : F.elements()) {
          GLpMat G{A, b, c, d};
          if (!is_glp(G)) continue;
          ++scanned[a];
          if (T.classify(G).is_cycler) {
            ++counts[a];
            if (samples[a].size() < sample_size) samples[a].push_back(G);
          }
        }
  });
  CyclerEnumeration out;
  for (long a = 0; a < q; ++a) {
    out.scanned += scanned[a];
    out.count += counts[a];
    for (auto& G : samples[a])
      if (out.sample.size() < sample_size) out.sample.push_back(G);
  }
  return out;
}

struct CyclerEigen {
  GUnitary U;
  ExactVec phi;     // unit eigenvector of U_{G^{2 m0}}
  CycloNum lambda;  // U_G phi = lambda phi
  CycloNum mu;      // lambda = mu / g(mu)
  ExactVec psi;     // U_G psi = psi
  int null_dim = 0;
  long m0 = 0;
  bool parity_ok = false;
};

inline CyclerEigen cycler_eigenvector(const CyclerTools& T, const GLpMat& G) {
  CyclerReport R = T.classify(G);
  if (!R.is_cycler) throw std::invalid_argument("matrix is not a MUB-cycler");
  const GaloisClifford& C = T.clifford();
  const int d = int(T.d()), N = C.conductor();
  CyclerEigen out;
  out.m0 = R.m0;
  out.U = gu_new(C, G);
  Mat2 G2 = G.pow(2 * R.m0);
  if (G2.det() != T.field()->one()) throw std::logic_error("G^{2 m0} is not symplectic");
  ExactMat U2 = C.symp_unitary({G2.a, G2.b, G2.c, G2.d});
  auto ns = exact_nullspace(U2 - ExactMat::identity(d, N));
  out.null_dim = int(ns.size());
  if (ns.size() != 1) throw std::logic_error("fixed space of U_{G^{2 m0}} is not one-dimensional");
  out.phi = ns[0];
  ExactVec img = gu_apply(out.U, out.phi);
  int k = 0;
  while (out.phi[k].is_zero()) ++k;
  out.lambda = img[k] / out.phi[k];
  if (img != scale(out.phi, out.lambda)) throw std::logic_error("phi is not an eigenvector of U_G");
  out.mu = hilbert90_split(out.lambda, out.U.gal, int(2 * R.m0));
  out.psi = scale(out.phi, out.mu);
  if (gu_apply(out.U, out.psi) != out.psi) throw std::logic_error("rescaled vector is not fixed by U_G");
  CycloNum sign(N, T.p() % 4 == 1 ? 1L : -1L);
  out.parity_ok = C.wh().parity() * out.psi == scale(out.psi, sign);
  return out;
}

struct BalanceReport {
  bool balanced = false;
  bool renyi_ok = false;  // sum_v p^2 = 2/(d+1) in every basis
  std::vector<std::vector<CycloNum>> probs;  // [basis][vector], exact real values
};

// p_{b,v} = |<b,v|psi>|^2 / <psi|psi>, compared as exact multisets.
inline BalanceReport verify_balanced(const ExactVec& psi, const MUBSet& M) {
  if (psi.empty()) throw std::invalid_argument("empty vector");
  const int d = M.d, N = psi[0].conductor();
  CycloNum inv_norm = inner(psi, psi).inverse();
  BalanceReport R;
  std::vector<std::vector<std::string>> keys;
  R.renyi_ok = true;
  CycloNum target(N, Rational(2, d + 1));
  for (int b = 0; b <= d; ++b) {
    const ExactMat& B = M.bases[b];
    std::vector<CycloNum> pb;
    std::vector<std::string> kb;
    CycloNum sq(N);
    for (int v = 0; v < d; ++v) {
      CycloNum ov(N);
      for (int x = 0; x < d; ++x)
        if (!B(x, v).is_zero() && !psi[x].is_zero()) ov += B(x, v).conj() * psi[x];
      CycloNum pr = ov * ov.conj() * inv_norm;
      sq += pr * pr;
      kb.push_back(pr.to_string());
      pb.push_back(pr);
    }
    if (sq != target) R.renyi_ok = false;
    std::sort(kb.begin(), kb.end());
    keys.push_back(kb);
    R.probs.push_back(pb);
  }
  R.balanced = std::all_of(keys.begin(), keys.end(), [&](const auto& k) { return k == keys[0]; });
  return R;
}

struct WignerResult {
  int d = 0;
  std::vector<CycloNum> W;  // index p1 * d + p2 over field codes
  std::vector<double> Wf;
  ExactMat rho;
};

// W_p = (1 - d delta_{p,0} + sum_{x != 0} l(x^2+1) omega^{tr(x p1^2 + x p2^2)}) / (d(d+1))
inline WignerResult balanced_wigner(const GaloisWH& W) {
  const FField& F = *W.field();
  const int d = W.d(), N = W.conductor();
  if (d % 4 != 3) throw std::invalid_argument("balanced Wigner function requires d = 3 mod 4");
  WignerResult R;
  R.d = d;
  R.W.assign(size_t(d) * d, CycloNum(N));
  R.rho = ExactMat(d, d, N);
  const Rational norm(1, long(d) * (d + 1));
  for (auto p1 : F.elements())
    for (auto p2 : F.elements()) {
      CycloNum w(N, (p1.is_zero() && p2.is_zero()) ? long(1 - d) : 1L);
      FFElem s = p1 * p1 + p2 * p2;
      for (auto x : F.elements()) {
        if (x.is_zero()) continue;
        int l = legendre(x * x + F.one());
        if (l == 0) continue;
        CycloNum t = W.omega(ff_trace(x * s));
        w += l > 0 ? t : -t;
      }
      w = w.scaled(norm);
      R.W[size_t(p1.v) * d + p2.v] = w;
      R.rho = R.rho + W.phase_point_op(p1, p2).scaled(w);
    }
  for (const auto& w : R.W) R.Wf.push_back(w.to_complex().real());
  return R;
}

// Representative of the ray: first nonzero component scaled to 1.
inline ExactVec ray_key(const ExactVec& v) {
  size_t k = 0;
  while (k < v.size() && v[k].is_zero()) ++k;
  if (k == v.size()) throw std::invalid_argument("zero vector has no ray");
  return scale(v, v[k].inverse());
}

struct ExactVecHash {
  size_t operator()(const ExactVec& v) const {
    size_t h = 0;
    for (const auto& x : v) h = h * 1000003u ^ x.hash();
    return h;
  }
};

struct OrbitResult {
  long size = 0;
  bool complete = true;  // false if the state limit was hit
};

namespace detail {

inline void pack_int(std::string& out, const BigInt& z) {
  size_t count = 0;
  std::vector<unsigned char> buf((mpz_sizeinbase(z.get_mpz_t(), 2) + 7) / 8 + 1);
  mpz_export(buf.data(), &count, 1, 1, 0, 0, z.get_mpz_t());
  out.push_back(char(sgn(z) + 1));
  auto n = std::uint32_t(count);
  out.append(reinterpret_cast<const char*>(&n), sizeof n);
  out.append(reinterpret_cast<const char*>(buf.data()), count);
}

inline BigInt unpack_int(const std::string& in, size_t& pos) {
  int sign = int(in[pos++]) - 1;
  std::uint32_t n;
  std::memcpy(&n, in.data() + pos, sizeof n);
  pos += sizeof n;
  BigInt z;
  mpz_import(z.get_mpz_t(), n, 1, 1, 0, 0, in.data() + pos);
  pos += n;
  if (sign < 0) z = -z;
  return z;
}

}  // namespace detail

// Exact byte encoding of a vector; the sparse numerators keep large orbits in memory.
inline std::string pack_vec(const ExactVec& v) {
  std::string out;
  for (const auto& x : v) {
    detail::pack_int(out, x.denominator());
    const auto& num = x.numerators();
    for (std::uint16_t j = 0; j < num.size(); ++j) {
      if (num[j] == 0) continue;
      out.append(reinterpret_cast<const char*>(&j), sizeof j);
      detail::pack_int(out, num[j]);
    }
    std::uint16_t end = 0xffff;
    out.append(reinterpret_cast<const char*>(&end), sizeof end);
  }
  return out;
}

inline ExactVec unpack_vec(const std::string& in, int d, int N) {
  ExactVec v;
  size_t pos = 0;
  for (int i = 0; i < d; ++i) {
    BigInt den = detail::unpack_int(in, pos);
    std::vector<Rational> c(N, Rational(0));
    for (;;) {
      std::uint16_t j;
      std::memcpy(&j, in.data() + pos, sizeof j);
      pos += sizeof j;
      if (j == 0xffff) break;
      c[j] = Rational(detail::unpack_int(in, pos), den);
    }
    v.push_back(CycloNum::from_coeffs(N, c));
  }
  return v;
}

// Orbit of a ray under displacements, symplectic generators and complex conjugation.
inline OrbitResult balanced_orbit_count(const GaloisClifford& C, const ExactVec& psi, int threads = 1,
                                        long max_states = 2'000'000) {
  const GaloisWH& W = C.wh();
  const FField& F = *W.field();
  const int d = W.d();
  std::vector<FFElem> basis;
  for (long i = 0, c = 1; i < F.n(); ++i, c *= F.p()) basis.push_back(F.elem(c));
  ExactMat Fm = C.symp_unitary({F.zero(), -F.one(), F.one(), F.zero()});
  std::vector<std::vector<CycloNum>> shear;  // diagonal of U for [[1,0],[e,1]]
  for (auto& e : basis) {
    std::vector<CycloNum> diag(d);
    for (auto x : F.elements()) diag[x.v] = W.omega(ff_trace(e * x * x * W.half()));
    shear.push_back(diag);
  }
  const int ngen = int(3 * basis.size() + 2);
  auto apply = [&](int g, const ExactVec& v) -> ExactVec {
    const int nb = int(basis.size());
    if (g < nb) return W.displace(basis[g], F.zero(), v);
    if (g < 2 * nb) return W.displace(F.zero(), basis[g - nb], v);
    if (g < 3 * nb) {
      ExactVec out = v;
      const auto& diag = shear[g - 2 * nb];
      for (int x = 0; x < d; ++x)
        if (!out[x].is_zero()) out[x] = out[x] * diag[x];
      return out;
    }
    if (g == 3 * nb) return Fm * v;
    return galois_vec(v, -1);
  };
  const int N = psi.at(0).conductor();
  std::unordered_set<std::string> seen;
  std::vector<std::string> frontier{pack_vec(ray_key(psi))};
  seen.insert(frontier[0]);
  OrbitResult R;
  const long chunk = 1024;
  while (!frontier.empty() && R.complete) {
    std::vector<std::string> nf;
    for (long lo = 0; lo < long(frontier.size()) && R.complete; lo += chunk) {
      const long m = std::min(chunk, long(frontier.size()) - lo);
      std::vector<std::vector<std::string>> next(m);
      parallel_for(m, threads, [&](long i) {
        ExactVec v = unpack_vec(frontier[lo + i], d, N);
        for (int g = 0; g < ngen; ++g) next[i].push_back(pack_vec(ray_key(apply(g, v))));
      });
      for (auto& batch : next)
        for (auto& k : batch)
          if (seen.insert(k).second) nf.push_back(std::move(k));
      if (long(seen.size()) > max_states) R.complete = false;
    }
    frontier = std::move(nf);
  }
  R.size = long(seen.size());
  return R;
}

}  // namespace hforge
