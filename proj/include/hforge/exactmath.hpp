#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hforge {

using Rational = mpq_class;
using BigInt = mpz_class;

inline long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline long gcd_l(long a, long b) { return std::gcd(a, b); }

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

inline long inv_mod(long a, long m) {
  long old_r = m, r = mod(a, m), old_s = 0, s = 1;
  while (r != 0) {
    long q = old_r / r;
    long t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("inv_mod: not invertible");
  return mod(old_s, m);
}

inline std::vector<std::pair<long, int>> factorize(long n) {
  std::vector<std::pair<long, int>> out;
  for (long q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    out.push_back({q, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

// Structure tables for Q(zeta_N). Exponents j in Z_N are split by CRT into
// components a_q in Z_{q^e}; the canonical basis keeps a_q < phi(q^e) for
// every prime-power factor.
struct CycloField {
  struct Factor {
    int q, e, qe, M, phi;  // M = N / q^e
  };
  int N = 1;
  int phi = 1;
  std::vector<Factor> factors;
  std::vector<std::vector<int>> comp;  // comp[j][f]
  std::vector<char> canonical;
  std::vector<int> basis;
  // reduce[f] = list of (j, targets) for exponents non-canonical in factor f
  std::vector<std::vector<std::pair<int, std::vector<int>>>> reduce;
  // hgroup[f] = exponents k != 1 acting only on factor f
  std::vector<std::vector<int>> hgroup;

  explicit CycloField(int n) : N(n) {
    if (n < 1) throw std::invalid_argument("conductor must be positive");
    for (auto [q, e] : factorize(n)) {
      Factor f;
      f.q = int(q);
      f.e = e;
      f.qe = 1;
      for (int i = 0; i < e; ++i) f.qe *= f.q;
      f.M = n / f.qe;
      f.phi = f.qe / f.q * (f.q - 1);
      factors.push_back(f);
    }
    comp.assign(N, std::vector<int>(factors.size()));
    canonical.assign(N, 1);
    for (int j = 0; j < N; ++j) {
      for (size_t fi = 0; fi < factors.size(); ++fi) {
        const auto& f = factors[fi];
        int a = f.qe == 1 ? 0 : int(mod(long(j) * inv_mod(f.M, f.qe), f.qe));
        comp[j][fi] = a;
        if (a >= f.phi) canonical[j] = 0;
      }
      if (canonical[j]) basis.push_back(j);
    }
    phi = int(basis.size());
    reduce.resize(factors.size());
    hgroup.resize(factors.size());
    for (size_t fi = 0; fi < factors.size(); ++fi) {
      const auto& f = factors[fi];
      int step = f.qe / f.q;
      for (int j = 0; j < N; ++j) {
        int a = comp[j][fi];
        if (a < f.phi) continue;
        int s = a - f.phi;
        std::vector<int> targets;
        for (int k = 0; k + 1 < f.q; ++k) {
          int na = k * step + s;
          targets.push_back(int(mod(j + long(na - a) * f.M, N)));
        }
        reduce[fi].push_back({j, std::move(targets)});
      }
      for (int u = 2; u < f.qe; ++u) {
        if (std::gcd(u, f.qe) != 1) continue;
        // k = 1 mod M, k = u mod q^e
        for (int k = 1; k < N; k += f.M) {
          if (mod(k, f.qe) == u) {
            hgroup[fi].push_back(k);
            break;
          }
        }
      }
      if (f.qe == 2) hgroup[fi].clear();
    }
  }

  void reduce_in_place(std::vector<BigInt>& c) const {
    for (size_t fi = 0; fi < factors.size(); ++fi) {
      for (const auto& [j, targets] : reduce[fi]) {
        if (sgn(c[j]) == 0) continue;
        for (int t : targets) c[t] -= c[j];
        c[j] = 0;
      }
    }
  }
};

inline const CycloField& cyclo_field(int N) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycloField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, std::make_unique<CycloField>(N)).first;
  return *it->second;
}

class GaloisAut;

// Exact element of Q(zeta_N): integer coefficient vector over a common
// positive denominator, supported on the canonical basis.
class CycloNum {
 public:
  CycloNum() : CycloNum(1) {}
  explicit CycloNum(int N) : f_(&cyclo_field(N)), num_(f_->N), den_(1) {}
  CycloNum(int N, Rational r) : CycloNum(N) {
    r.canonicalize();
    num_[0] = r.get_num();
    den_ = r.get_den();
  }
  CycloNum(int N, long v) : CycloNum(N) { num_[0] = v; }

  static CycloNum zeta(int N, long j) {
    CycloNum z(N);
    z.num_[mod(j, N)] = 1;
    z.f_->reduce_in_place(z.num_);
    return z;
  }
  // Builds from an arbitrary (non-reduced) coefficient vector of length N.
  static CycloNum from_coeffs(int N, const std::vector<Rational>& c) {
    if (int(c.size()) != N) throw std::invalid_argument("coefficient length must equal conductor");
    CycloNum z(N);
    BigInt den = 1;
    for (const auto& r : c) den = lcm(den, BigInt(r.get_den()));
    for (int j = 0; j < N; ++j) z.num_[j] = c[j].get_num() * (den / c[j].get_den());
    z.den_ = den;
    z.f_->reduce_in_place(z.num_);
    z.normalize();
    return z;
  }

  int conductor() const { return f_->N; }
  const CycloField& field() const { return *f_; }
  const std::vector<BigInt>& numerators() const { return num_; }
  const BigInt& denominator() const { return den_; }
  Rational coeff(int j) const {
    Rational r(num_[mod(j, f_->N)], den_);
    r.canonicalize();
    return r;
  }
  std::vector<Rational> coeffs() const {
    std::vector<Rational> out(f_->N);
    for (int j = 0; j < f_->N; ++j) out[j] = coeff(j);
    return out;
  }

  bool is_zero() const {
    for (const auto& c : num_)
      if (sgn(c) != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (int j = 1; j < f_->N; ++j)
      if (sgn(num_[j]) != 0) return false;
    return true;
  }
  Rational rational_value() const {
    if (!is_rational()) throw std::domain_error("not a rational number");
    return coeff(0);
  }

  friend bool operator==(const CycloNum& a, const CycloNum& b) {
    return a.f_->N == b.f_->N && a.den_ == b.den_ && a.num_ == b.num_;
  }
  friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

  CycloNum operator-() const {
    CycloNum r = *this;
    for (auto& c : r.num_) c = -c;
    return r;
  }
  CycloNum& operator+=(const CycloNum& b) { return add_scaled(b, 1); }
  CycloNum& operator-=(const CycloNum& b) { return add_scaled(b, -1); }
  friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
  friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }

  friend CycloNum operator*(const CycloNum& a, const CycloNum& b) {
    check_same(a, b);
    const int N = a.f_->N;
    CycloNum r(N);
    if (a.is_zero() || b.is_zero()) return r;
    std::vector<int> ia, ib;
    for (int j = 0; j < N; ++j) {
      if (sgn(a.num_[j])) ia.push_back(j);
      if (sgn(b.num_[j])) ib.push_back(j);
    }
    for (int i : ia)
      for (int j : ib) {
        int k = i + j;
        if (k >= N) k -= N;
        mpz_addmul(r.num_[k].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
      }
    r.den_ = a.den_ * b.den_;
    r.f_->reduce_in_place(r.num_);
    r.normalize();
    return r;
  }
  CycloNum& operator*=(const CycloNum& b) { return *this = *this * b; }

  CycloNum scaled(const Rational& s) const {
    if (sgn(s) == 0) return CycloNum(f_->N);
    CycloNum r = *this;
    for (auto& c : r.num_) c *= s.get_num();
    r.den_ *= s.get_den();
    r.normalize();
    return r;
  }
  friend CycloNum operator*(const CycloNum& a, const Rational& s) { return a.scaled(s); }
  friend CycloNum operator*(const Rational& s, const CycloNum& a) { return a.scaled(s); }

  // Maps zeta -> zeta^k.
  CycloNum galois(long k) const {
    const int N = f_->N;
    k = mod(k, N);
    if (std::gcd(k, long(N)) != 1) throw std::domain_error("Galois exponent not coprime to conductor");
    if (k == 1) return *this;
    CycloNum r(N);
    for (int j = 0; j < N; ++j)
      if (sgn(num_[j])) r.num_[mod(long(j) * k, N)] += num_[j];
    r.den_ = den_;
    r.f_->reduce_in_place(r.num_);
    r.normalize();
    return r;
  }
  CycloNum conj() const { return galois(f_->N - 1); }

  CycloNum inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    CycloNum x = *this;
    CycloNum acc(f_->N, 1L);
    for (size_t fi = 0; fi < f_->factors.size(); ++fi) {
      bool fixed = true;
      for (int j = 0; j < f_->N && fixed; ++j)
        if (sgn(x.num_[j]) && f_->comp[j][fi] != 0) fixed = false;
      if (fixed) continue;
      CycloNum b(f_->N, 1L);
      for (int k : f_->hgroup[fi]) b *= x.galois(k);
      acc *= b;
      x *= b;
    }
    Rational n = x.rational_value();
    return acc.scaled(1 / n);
  }
  friend CycloNum operator/(const CycloNum& a, const CycloNum& b) {
    check_same(a, b);
    return a * b.inverse();
  }

  std::complex<double> to_complex() const {
    const int N = f_->N;
    std::complex<long double> s = 0;
    mpf_class den(den_, 256);
    for (int j = 0; j < N; ++j) {
      if (!sgn(num_[j])) continue;
      mpf_class q(num_[j], 256);
      q /= den;
      long double ang = 2.0L * 3.14159265358979323846264338327950288L * j / N;
      s += (long double)q.get_d() * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    return {double(s.real()), double(s.imag())};
  }

  size_t hash() const {
    size_t h = std::hash<int>()(f_->N);
    auto mix = [&h](const BigInt& z) {
      size_t v = size_t(mpz_size(z.get_mpz_t()) ? mpz_getlimbn(z.get_mpz_t(), 0) : 0);
      v ^= size_t(sgn(z) + 1) << 7;
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(den_);
    for (const auto& c : num_) mix(c);
    return h;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int j = 0; j < f_->N; ++j) {
      if (!sgn(num_[j])) continue;
      Rational c = coeff(j);
      if (!first) os << (sgn(c) < 0 ? " - " : " + ");
      else if (sgn(c) < 0) os << "-";
      first = false;
      Rational a = abs(c);
      if (j == 0) os << a.get_str();
      else {
        if (a != 1) os << a.get_str() << "*";
        os << "z" << f_->N << "^" << j;
      }
    }
    return os.str();
  }

  // Rational vector of canonical-basis coordinates.
  std::vector<Rational> basis_coords() const {
    std::vector<Rational> out;
    for (int j : f_->basis) out.push_back(coeff(j));
    return out;
  }

 private:
  static void check_same(const CycloNum& a, const CycloNum& b) {
    if (a.f_->N != b.f_->N) throw std::invalid_argument("conductor mismatch");
  }
  CycloNum& add_scaled(const CycloNum& b, int sign) {
    check_same(*this, b);
    if (den_ != b.den_) {
      for (auto& c : num_)
        if (sgn(c)) c *= b.den_;
    }
    for (int j = 0; j < f_->N; ++j) {
      if (!sgn(b.num_[j])) continue;
      BigInt t = den_ == b.den_ ? b.num_[j] : BigInt(b.num_[j] * den_);
      if (sign > 0) num_[j] += t;
      else num_[j] -= t;
    }
    if (den_ != b.den_) den_ *= b.den_;
    normalize();
    return *this;
  }
  void normalize() {
    BigInt g = den_;
    bool any = false;
    for (const auto& c : num_)
      if (sgn(c)) {
        any = true;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) return;
      }
    if (!any) {
      den_ = 1;
      return;
    }
    if (g == 1) return;
    for (auto& c : num_)
      if (sgn(c)) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }

  const CycloField* f_;
  std::vector<BigInt> num_;
  BigInt den_;
};

struct CycloHash {
  size_t operator()(const CycloNum& x) const { return x.hash(); }
};

// Galois automorphism zeta_N -> zeta_N^k.
class GaloisAut {
 public:
  GaloisAut(int N, long k) : N_(N), k_(mod(k, N)) {
    if (std::gcd(k_, long(N)) != 1) throw std::domain_error("Galois exponent not coprime to conductor");
  }
  int conductor() const { return N_; }
  long exponent() const { return k_; }
  CycloNum operator()(const CycloNum& x) const {
    if (x.conductor() != N_) throw std::invalid_argument("conductor mismatch");
    return x.galois(k_);
  }
  GaloisAut operator*(const GaloisAut& o) const {
    if (o.N_ != N_) throw std::invalid_argument("conductor mismatch");
    return GaloisAut(N_, k_ * o.k_);
  }
  GaloisAut inverse() const { return GaloisAut(N_, inv_mod(k_, N_)); }
  GaloisAut pow(long m) const {
    long k = 1;
    for (long i = 0; i < m; ++i) k = mod(k * k_, N_);
    return GaloisAut(N_, k);
  }
  int order() const {
    long k = k_;
    int m = 1;
    while (k != 1) {
      k = mod(k * k_, N_);
      ++m;
    }
    return m;
  }
  bool operator==(const GaloisAut& o) const { return N_ == o.N_ && k_ == o.k_; }

 private:
  int N_;
  long k_;
};

inline CycloNum galois_apply(const GaloisAut& g, const CycloNum& x) { return g(x); }

enum class ArithOp { add, sub, mul, div };

inline CycloNum cyclo_arith(const CycloNum& a, const CycloNum& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
  }
  throw std::invalid_argument("unknown op");
}

// Automorphism of Q(zeta_4p) that fixes i and sends omega_p to omega_p^delta.
inline GaloisAut galois_fixing_i(long p, long delta) {
  long N = 4 * p;
  for (long k = 1; k < N; k += 4)
    if (mod(k - delta, p) == 0) return GaloisAut(int(N), k);
  throw std::domain_error("no automorphism for given exponent");
}

// Sum over x in F_p of omega^{x^2}, in Q(zeta_4p).
inline CycloNum gaussian_sum(long p) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("gaussian_sum requires an odd prime");
  int N = int(4 * p);
  CycloNum s(N);
  for (long x = 0; x < p; ++x) s += CycloNum::zeta(N, 4 * mod(x * x, p));
  return s;
}

// sqrt(p) as an element of Q(zeta_4p).
inline CycloNum sqrt_prime(long p) {
  CycloNum g = gaussian_sum(p);
  if (p % 4 == 1) return g;
  return CycloNum::zeta(int(4 * p), 3 * p) * g;  // -i * (i sqrt p)
}

// Returns mu with lambda = mu / g(mu), given lambda g(lambda) ... g^{m-1}(lambda) = 1.
inline CycloNum hilbert90_split(const CycloNum& lambda, const GaloisAut& g, int m) {
  const int N = lambda.conductor();
  if (g.conductor() != N) throw std::invalid_argument("conductor mismatch");
  if (m < 1 || g.pow(m).exponent() != 1) throw std::invalid_argument("g does not have the given order");
  std::vector<CycloNum> a(m);
  a[0] = CycloNum(N, 1L);
  CycloNum gl = lambda;
  for (int i = 1; i < m; ++i) {
    a[i] = a[i - 1] * gl;
    gl = g(gl);
  }
  if (a[m - 1] * gl != CycloNum(N, 1L)) throw std::domain_error("norm condition violated");
  for (int j : lambda.field().basis) {
    CycloNum x = CycloNum::zeta(N, j);
    CycloNum t(N);
    for (int i = 0; i < m; ++i) {
      t += a[i] * x;
      x = g(x);
    }
    if (!t.is_zero()) {
      // scale so the leading canonical coefficient is 1
      for (int b : lambda.field().basis)
        if (sgn(t.coeff(b)) != 0) {
          t = t.scaled(1 / t.coeff(b));
          break;
        }
      if (lambda * g(t) != t) throw std::logic_error("hilbert90 postcondition failed");
      return t;
    }
  }
  throw std::logic_error("hilbert90: no basis element gave a nonzero sum");
}

inline std::complex<double> to_complex(const CycloNum& x) { return x.to_complex(); }

inline std::ostream& operator<<(std::ostream& os, const CycloNum& x) { return os << x.to_string(); }

}  // namespace hforge
