#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hforge/exactmath.hpp"

namespace hforge {

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
namespace poly {

using Poly = std::vector<long>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& f, long p) {
  Poly r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  long lead_inv = inv_mod(f.back(), p);
  while (r.size() >= f.size()) {
    long c = r.back() * lead_inv % p;
    size_t shift = r.size() - f.size();
    for (size_t i = 0; i < f.size(); ++i) r[shift + i] = mod(r[shift + i] - c * f[i], p);
    trim(r);
  }
  return r;
}

inline Poly rem(Poly a, const Poly& f, long p) {
  trim(a);
  long lead_inv = inv_mod(f.back(), p);
  while (a.size() >= f.size()) {
    long c = a.back() * lead_inv % p;
    size_t shift = a.size() - f.size();
    for (size_t i = 0; i < f.size(); ++i) a[shift + i] = mod(a[shift + i] - c * f[i], p);
    trim(a);
  }
  return a;
}

inline Poly gcd(Poly a, Poly b, long p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline bool irreducible(const Poly& f, long p) {
  int n = int(f.size()) - 1;
  if (n <= 1) return n == 1;
  Poly xp = {0, 1};
  for (int k = 1; k <= n / 2; ++k) {
    Poly acc = {1}, base = xp;
    for (long e = p; e > 0; e >>= 1) {
      if (e & 1) acc = mulmod(acc, base, f, p);
      base = mulmod(base, base, f, p);
    }
    xp = acc;  // x^{p^k} mod f
    Poly h = xp;
    h.resize(std::max<size_t>(h.size(), 2), 0);
    h[1] = mod(h[1] - 1, p);
    trim(h);
    if (h.empty()) return false;
    if (gcd(f, h, p).size() > 1) return false;
  }
  return true;
}

}  // namespace poly

class FField;

struct FFElem {
  const FField* F = nullptr;
  int v = 0;  // code sum c_i p^i

  bool is_zero() const { return v == 0; }
  bool operator==(const FFElem& o) const { return v == o.v && F == o.F; }
  bool operator!=(const FFElem& o) const { return !(*this == o); }
  bool operator<(const FFElem& o) const { return v < o.v; }
  FFElem operator+(const FFElem& o) const;
  FFElem operator-(const FFElem& o) const;
  FFElem operator-() const;
  FFElem operator*(const FFElem& o) const;
  FFElem operator/(const FFElem& o) const;
  FFElem& operator+=(const FFElem& o) { return *this = *this + o; }
  FFElem& operator-=(const FFElem& o) { return *this = *this - o; }
  FFElem& operator*=(const FFElem& o) { return *this = *this * o; }
  FFElem inv() const;
  FFElem pow(long e) const;
  std::vector<long> coeffs() const;
  std::string to_string() const;
};

class FField {
 public:
  FField(long p, int n) : p_(p), n_(n) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
    if (n < 1) throw std::invalid_argument("field degree must be at least 1");
    q_ = 1;
    for (int i = 0; i < n; ++i) q_ *= p;
    if (q_ > 200000) throw std::invalid_argument("field too large");
    // least monic irreducible, ordered by the code of its lower coefficients
    for (long c = 0; c < q_; ++c) {
      poly::Poly f = digits(c);
      f.resize(n + 1, 0);
      f[n] = 1;
      if (poly::irreducible(f, p)) {
        modulus_ = f;
        break;
      }
    }
    add_.assign(size_t(q_ * q_), 0);
    for (long a = 0; a < q_; ++a) {
      auto da = digits(a);
      for (long b = 0; b < q_; ++b) {
        auto db = digits(b);
        poly::Poly s(n, 0);
        for (int i = 0; i < n; ++i) s[i] = (da[i] + db[i]) % p;
        add_[a * q_ + b] = int(code(s));
      }
    }
    neg_.resize(q_);
    for (long a = 0; a < q_; ++a)
      for (long b = 0; b < q_; ++b)
        if (add_[a * q_ + b] == 0) neg_[a] = int(b);
    // least element of full multiplicative order
    auto fac = factorize(q_ - 1);
    for (long c = 1; c < q_; ++c) {
      bool prim = true;
      for (auto [r, e] : fac)
        if (raw_pow(c, (q_ - 1) / r) == 1) {
          prim = false;
          break;
        }
      if (prim) {
        theta_ = int(c);
        break;
      }
    }
    exp_.resize(q_ - 1);
    log_.assign(q_, -1);
    long x = 1;
    for (long k = 0; k < q_ - 1; ++k) {
      exp_[k] = int(x);
      log_[x] = int(k);
      x = raw_mul(x, theta_);
    }
    if (x != 1) throw std::logic_error("primitive element order check failed");
    trace_.resize(q_);
    for (long a = 0; a < q_; ++a) {
      long s = 0, y = a;
      for (int k = 0; k < n; ++k) {
        s = add_[s * q_ + y];
        y = raw_pow(y, p);
      }
      if (s >= p) throw std::logic_error("trace left the prime field");
      trace_[a] = int(s);
    }
  }

  long p() const { return p_; }
  int n() const { return n_; }
  long q() const { return q_; }
  const poly::Poly& modulus() const { return modulus_; }
  FFElem theta() const { return {this, theta_}; }
  FFElem zero() const { return {this, 0}; }
  FFElem one() const { return {this, 1}; }
  FFElem elem(long code) const {
    if (code < 0 || code >= q_) throw std::out_of_range("field element code");
    return {this, int(code)};
  }
  FFElem from_int(long k) const { return {this, int(mod(k, p_))}; }
  FFElem from_coeffs(const std::vector<long>& c) const {
    poly::Poly d(n_, 0);
    for (size_t i = 0; i < c.size() && i < size_t(n_); ++i) d[i] = mod(c[i], p_);
    return {this, int(code(d))};
  }
  std::vector<FFElem> elements() const {
    std::vector<FFElem> out;
    for (long c = 0; c < q_; ++c) out.push_back({this, int(c)});
    return out;
  }
  bool in_prime_field(const FFElem& x) const { return x.v < p_; }

  int add(int a, int b) const { return add_[size_t(a) * q_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int mul(int a, int b) const {
    if (a == 0 || b == 0) return 0;
    long k = log_[a] + log_[b];
    if (k >= q_ - 1) k -= q_ - 1;
    return exp_[k];
  }
  int inv(int a) const {
    if (a == 0) throw std::domain_error("inverse of zero in finite field");
    return exp_[log_[a] == 0 ? 0 : q_ - 1 - log_[a]];
  }
  int pow(int a, long e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    long k = mod(long(log_[a]) * mod(e, q_ - 1), q_ - 1);
    return exp_[k];
  }
  int log(int a) const { return log_[a]; }
  int trace(int a) const { return trace_[a]; }
  int legendre(int a) const {
    if (a == 0) return 0;
    return log_[a] % 2 == 0 ? 1 : -1;
  }
  long order(int a) const {
    if (a == 0) throw std::domain_error("order of zero");
    return (q_ - 1) / std::gcd(long(log_[a]), q_ - 1);
  }
  std::vector<long> digits(long c) const {
    std::vector<long> d(n_, 0);
    for (int i = 0; i < n_; ++i) {
      d[i] = c % p_;
      c /= p_;
    }
    return d;
  }

 private:
  long code(const poly::Poly& d) const {
    long c = 0, m = 1;
    for (int i = 0; i < n_; ++i) {
      c += (i < int(d.size()) ? mod(d[i], p_) : 0) * m;
      m *= p_;
    }
    return c;
  }
  long raw_mul(long a, long b) const {
    poly::Poly pa = digits(a), pb = digits(b);
    poly::trim(pa);
    poly::trim(pb);
    return code(poly::mulmod(pa, pb, modulus_, p_));
  }
  long raw_pow(long a, long e) const {
    long r = 1;
    for (; e > 0; e >>= 1) {
      if (e & 1) r = raw_mul(r, a);
      a = raw_mul(a, a);
    }
    return r;
  }

  long p_;
  int n_;
  long q_;
  poly::Poly modulus_;
  int theta_ = 1;
  std::vector<int> add_, neg_, exp_, log_, trace_;
};

using FieldPtr = std::shared_ptr<const FField>;

inline FieldPtr field_create(long p, int n) { return std::make_shared<const FField>(p, n); }

inline FFElem FFElem::operator+(const FFElem& o) const { return {F, F->add(v, o.v)}; }
inline FFElem FFElem::operator-(const FFElem& o) const { return {F, F->add(v, F->neg(o.v))}; }
inline FFElem FFElem::operator-() const { return {F, F->neg(v)}; }
inline FFElem FFElem::operator*(const FFElem& o) const { return {F, F->mul(v, o.v)}; }
inline FFElem FFElem::operator/(const FFElem& o) const { return {F, F->mul(v, F->inv(o.v))}; }
inline FFElem FFElem::inv() const { return {F, F->inv(v)}; }
inline FFElem FFElem::pow(long e) const { return {F, F->pow(v, e)}; }
inline std::vector<long> FFElem::coeffs() const { return F->digits(v); }
inline std::string FFElem::to_string() const {
  if (F->n() == 1) return std::to_string(v);
  std::string s = "(";
  auto d = coeffs();
  for (size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

// Field trace as an integer in [0, p).
inline long ff_trace(const FFElem& x) { return x.F->trace(x.v); }

inline int legendre(const FFElem& x) { return x.F->legendre(x.v); }

inline std::optional<FFElem> ff_sqrt(const FFElem& x) {
  for (long c = 0; c < x.F->q(); ++c)
    if (x.F->mul(int(c), int(c)) == x.v) return FFElem{x.F, int(c)};
  return std::nullopt;
}

// F_{d^2} over F_d, with an explicit embedding of the base field.
struct QuadExt {
  FieldPtr base, ext;
  FFElem thetabar, eta;
  std::optional<FFElem> iM;  // square root of -1, when d = 3 mod 4
  std::vector<int> up;       // base code -> ext code
  std::vector<int> down;     // ext code -> base code or -1

  FFElem embed(const FFElem& x) const { return {ext.get(), up[x.v]}; }
  std::optional<FFElem> restrict(const FFElem& y) const {
    int c = down[y.v];
    if (c < 0) return std::nullopt;
    return FFElem{base.get(), c};
  }
  long d() const { return base->q(); }
};

inline QuadExt quad_ext(const FieldPtr& F) {
  if (F->p() == 2) throw std::invalid_argument("quadratic extension requires odd characteristic");
  QuadExt Q;
  Q.base = F;
  Q.ext = field_create(F->p(), 2 * F->n());
  const FField& E = *Q.ext;
  const long p = F->p(), d = F->q();
  // least root of the base modulus in the extension
  int rho = -1;
  const auto& fm = F->modulus();
  for (long c = 0; c < E.q() && rho < 0; ++c) {
    int acc = 0, pw = 1;
    for (size_t i = 0; i < fm.size(); ++i) {
      acc = E.add(acc, E.mul(int(fm[i]), pw));
      pw = E.mul(pw, int(c));
    }
    if (acc == 0) rho = int(c);
  }
  if (rho < 0) throw std::logic_error("base modulus has no root in the extension");
  Q.up.resize(d);
  Q.down.assign(E.q(), -1);
  for (long c = 0; c < d; ++c) {
    auto dg = F->digits(c);
    int acc = 0, pw = 1;
    for (int i = 0; i < F->n(); ++i) {
      acc = E.add(acc, E.mul(int(dg[i]), pw));
      pw = E.mul(pw, rho);
    }
    Q.up[c] = acc;
    Q.down[acc] = int(c);
  }
  Q.thetabar = E.theta();
  Q.eta = Q.thetabar.pow((d - 1) / (p - 1));
  if (E.order(Q.eta.v) != (p - 1) * (d + 1)) throw std::logic_error("eta has wrong order");
  if (Q.down[Q.thetabar.pow(d + 1).v] < 0) throw std::logic_error("norm of thetabar outside base field");
  if (F->order(Q.down[Q.thetabar.pow(d + 1).v]) != d - 1) throw std::logic_error("norm of thetabar not primitive");
  if (d % 4 == 3) {
    Q.iM = Q.eta.pow((p - 1) * (d + 1) / 4);
    if (*Q.iM * *Q.iM != -E.one()) throw std::logic_error("i_M squared is not -1");
  }
  return Q;
}

}  // namespace hforge
