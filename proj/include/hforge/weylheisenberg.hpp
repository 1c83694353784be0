#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hforge/finitefield.hpp"
#include "hforge/linalg.hpp"

namespace hforge {

// Omega(u, v) = u2 v1 - u1 v2
inline long symplectic_form(long u1, long u2, long v1, long v2) { return u2 * v1 - u1 * v2; }
inline FFElem symplectic_form(const FFElem& u1, const FFElem& u2, const FFElem& v1, const FFElem& v2) {
  return u2 * v1 - u1 * v2;
}

inline int dbar(int d) { return d % 2 ? d : 2 * d; }

// tau^k with tau = -exp(i pi / d)
inline cplx tau_pow(int d, long k) {
  long m = mod(k * (d + 1), 2L * d);
  return std::polar(1.0, M_PI * double(m) / d);
}

// D_u = tau^{u1 u2} X^{u1} Z^{u2}, components taken mod dbar.
inline CMat ordinary_displacement(int d, long u1, long u2) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  CMat D = CMat::Zero(d, d);
  const int db = dbar(d);
  u1 = mod(u1, db);
  u2 = mod(u2, db);
  for (long x = 0; x < d; ++x) D(mod(x + u1, d), x) = tau_pow(d, u1 * u2 + 2 * u2 * x);
  return D;
}

// D_u psi without forming the matrix.
inline CVec ordinary_displace(int d, long u1, long u2, const CVec& psi) {
  CVec out(d);
  const int db = dbar(d);
  u1 = mod(u1, db);
  u2 = mod(u2, db);
  for (long x = 0; x < d; ++x) out(mod(x + u1, d)) = tau_pow(d, u1 * u2 + 2 * u2 * x) * psi(x);
  return out;
}

// Weyl-Heisenberg group over F_{p^n} with trace-based characters. Matrices are
// indexed by field element codes; exact entries live in Q(zeta_{4p}).
class GaloisWH {
 public:
  explicit GaloisWH(FieldPtr F) : F_(std::move(F)) {
    if (F_->p() == 2) throw std::invalid_argument("Galoisian displacements require odd characteristic");
    p_ = F_->p();
    d_ = int(F_->q());
    N_ = int(4 * p_);
    half_ = F_->from_int(2).inv();
    for (long k = 0; k < p_; ++k) omega_.push_back(CycloNum::zeta(N_, 4 * k));
  }
  const FieldPtr& field() const { return F_; }
  long p() const { return p_; }
  int d() const { return d_; }
  int conductor() const { return N_; }
  FFElem half() const { return half_; }
  const CycloNum& omega(long k) const { return omega_[mod(k, p_)]; }
  cplx omega_c(long k) const { return std::polar(1.0, 2 * M_PI * double(mod(k, p_)) / double(p_)); }

  // D_u |x> = omega^{tr(u1 u2 / 2) + tr(x u2)} |x + u1>: returns (target, exponent).
  std::pair<int, long> action(const FFElem& u1, const FFElem& u2, const FFElem& x) const {
    long e = ff_trace(u1 * u2 * half_) + ff_trace(x * u2);
    return {(x + u1).v, e % p_};
  }

  ExactMat displacement(const FFElem& u1, const FFElem& u2) const {
    ExactMat D(d_, d_, N_);
    for (auto x : F_->elements()) {
      auto [t, e] = action(u1, u2, x);
      D(t, x.v) = omega(e);
    }
    return D;
  }
  CMat displacement_c(const FFElem& u1, const FFElem& u2) const {
    CMat D = CMat::Zero(d_, d_);
    for (auto x : F_->elements()) {
      auto [t, e] = action(u1, u2, x);
      D(t, x.v) = omega_c(e);
    }
    return D;
  }
  ExactVec displace(const FFElem& u1, const FFElem& u2, const ExactVec& v) const {
    ExactVec out(d_, CycloNum(N_));
    for (auto x : F_->elements()) {
      if (v[x.v].is_zero()) continue;
      auto [t, e] = action(u1, u2, x);
      out[t] = e ? omega(e) * v[x.v] : v[x.v];
    }
    return out;
  }

  // A|x> = |-x>
  ExactMat parity() const {
    ExactMat A(d_, d_, N_);
    for (auto x : F_->elements()) A((-x).v, x.v) = CycloNum(N_, 1L);
    return A;
  }

  // A_u = D_u A_0 D_u^dagger, composed as monomial maps.
  ExactMat phase_point_op(const FFElem& u1, const FFElem& u2) const {
    ExactMat A(d_, d_, N_);
    for (auto x : F_->elements()) {
      // D_u^dagger = D_{-u}
      auto [y, e1] = action(-u1, -u2, x);
      FFElem yy = F_->elem(y);
      auto [z, e2] = action(u1, u2, -yy);
      A(z, x.v) = omega(e1 + e2);
    }
    return A;
  }
  CMat phase_point_op_c(const FFElem& u1, const FFElem& u2) const { return phase_point_op(u1, u2).to_cmat(); }

  // A_0 from its defining sum (1/d) sum_p D_p.
  ExactMat phase_point_sum() const {
    ExactMat A(d_, d_, N_);
    for (auto a : F_->elements())
      for (auto b : F_->elements()) A = A + displacement(a, b);
    return A.scaled(CycloNum(N_, Rational(1, d_)));
  }

 private:
  FieldPtr F_;
  long p_;
  int d_;
  int N_;
  FFElem half_;
  std::vector<CycloNum> omega_;
};

}  // namespace hforge
