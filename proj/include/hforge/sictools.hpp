#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "hforge/clifford.hpp"
#include "hforge/parallel.hpp"

namespace hforge {

struct SicCandidate {
  int d = 0;
  std::vector<CVec> vectors;
  CMat overlaps;  // |<psi_i|psi_j>|^2
};

inline CMat overlap_matrix(const std::vector<CVec>& vs) {
  const int n = int(vs.size());
  CMat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = std::norm(vs[i].dot(vs[j]));
  return M;
}

inline SicCandidate make_candidate(int d, std::vector<CVec> vs) {
  SicCandidate c{d, std::move(vs), {}};
  c.overlaps = overlap_matrix(c.vectors);
  return c;
}

// The d=3 family: rows (0, 1, -e^{i theta} eta^k) and its two cyclic shifts.
inline SicCandidate sic3_family(double theta) {
  std::vector<CVec> vs;
  for (int s = 0; s < 3; ++s)
    for (int k = 0; k < 3; ++k) {
      cplx c = -std::polar(1.0, theta + 2 * M_PI * k / 3.0);
      CVec v(3);
      v(s) = 0;
      v((s + 1) % 3) = 1;
      v((s + 2) % 3) = c;
      vs.push_back(v / std::sqrt(2.0));
    }
  return make_candidate(3, std::move(vs));
}

// All d^2 vectors D_u psi, u = (u1, u2) in lexicographic order.
inline std::vector<CVec> wh_orbit(const CVec& psi) {
  const int d = int(psi.size());
  std::vector<CVec> out;
  out.reserve(size_t(d) * d);
  for (long u1 = 0; u1 < d; ++u1)
    for (long u2 = 0; u2 < d; ++u2) out.push_back(ordinary_displace(d, u1, u2, psi));
  return out;
}

inline bool is_sic(const SicCandidate& c, double tol = 1e-9) {
  const int d = c.d;
  if (d < 1 || long(c.vectors.size()) != long(d) * d) throw std::invalid_argument("a SIC needs d^2 vectors");
  for (auto& v : c.vectors) {
    if (v.size() != d) throw std::invalid_argument("vector length differs from d");
    if (std::abs(v.squaredNorm() - 1.0) > tol) throw std::invalid_argument("vectors must be normalized");
  }
  const double target = 1.0 / std::sqrt(double(d + 1));
  const int n = d * d;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(std::abs(c.vectors[i].dot(c.vectors[j])) - target) > tol) return false;
  return true;
}

// Fiducial form: |<psi|D_u psi>|^2 = 1/(d+1) for every u != 0.
inline bool is_sic_fiducial(const CVec& psi, double tol = 1e-9) {
  const int d = int(psi.size());
  if (d < 1) throw std::invalid_argument("empty fiducial");
  if (std::abs(psi.squaredNorm() - 1.0) > tol) throw std::invalid_argument("fiducial must be normalized");
  const double target = 1.0 / double(d + 1);
  for (long u1 = 0; u1 < d; ++u1)
    for (long u2 = 0; u2 < d; ++u2) {
      if (u1 == 0 && u2 == 0) continue;
      if (std::abs(std::norm(psi.dot(ordinary_displace(d, u1, u2, psi))) - target) > tol) return false;
    }
  return true;
}

// Number of d-subsets whose smallest singular value is below rtol times the largest.
inline long dependent_subsets(const SicCandidate& c, double rtol = 1e-10) {
  const int d = c.d, n = int(c.vectors.size());
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  long count = 0;
  CMat M(d, d);
  for (;;) {
    for (int j = 0; j < d; ++j) M.col(j) = c.vectors[idx[j]];
    Eigen::JacobiSVD<CMat> svd(M);
    auto s = svd.singularValues();
    if (s(d - 1) < rtol * s(0)) ++count;
    int i = d - 1;
    while (i >= 0 && idx[i] == n - d + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  return count;
}

struct KtReport {
  double t = 1;
  double value = 0;
  double bound = 0;
  bool saturated = false;
};

inline double kt_bound(int d, double t) { return double(d) * d * (d - 1) / std::pow(double(d + 1), t - 1); }

inline KtReport kt_measure(const std::vector<CMat>& ops, double t, double tol = 1e-9) {
  if (t < 1) throw std::invalid_argument("t must be at least 1");
  if (ops.empty()) throw std::invalid_argument("no operators");
  const int d = int(ops[0].rows());
  if (long(ops.size()) != long(d) * d) throw std::invalid_argument("K_t needs d^2 operators");
  for (auto& A : ops) {
    if (A.rows() != d || A.cols() != d) throw std::invalid_argument("operator shape mismatch");
    if ((A - A.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("operator is not Hermitian");
    if (std::abs((A * A).trace().real() - 1.0) > tol) throw std::invalid_argument("operator is not normalized");
    Eigen::SelfAdjointEigenSolver<CMat> es(A, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol) throw std::invalid_argument("operator is not positive");
  }
  KtReport r;
  r.t = t;
  r.bound = kt_bound(d, t);
  const int n = d * d;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double x = std::max(0.0, (ops[i] * ops[j]).trace().real());
      r.value += std::pow(x, t);
    }
  r.saturated = std::abs(r.value - r.bound) <= tol * std::max(1.0, r.bound);
  return r;
}

inline std::vector<CMat> projectors(const std::vector<CVec>& vs) {
  std::vector<CMat> out;
  for (auto& v : vs) out.push_back(v * v.adjoint());
  return out;
}

// g(psi) = sum_{u != 0} |<psi|D_u psi>|^4 and its gradient. Displacements are
// tabulated once per dimension.
class FramePotential {
 public:
  explicit FramePotential(int d) : d_(d) {
    if (d < 2) throw std::invalid_argument("dimension must be at least 2");
    for (long u1 = 0; u1 < d; ++u1)
      for (long u2 = 0; u2 < d; ++u2) {
        if (u1 == 0 && u2 == 0) continue;
        Disp D{int(u1), {}};
        for (long x = 0; x < d; ++x) D.phase.push_back(tau_pow(d, u1 * u2 + 2 * u2 * x));
        disp_.push_back(std::move(D));
      }
  }

  int d() const { return d_; }
  double target() const { return double(d_ - 1) / double(d_ + 1); }

  double value(const CVec& psi) const {
    double g = 0;
    for (auto& D : disp_) g += std::pow(std::norm(overlap(D, psi)), 2);
    return g;
  }

  // Returns dg/d(conj psi); the real gradient in (Re, Im) coordinates is twice this.
  CVec wirtinger(const CVec& psi, double* g = nullptr) const {
    CVec G = CVec::Zero(d_);
    double total = 0;
    for (auto& D : disp_) {
      cplx a = overlap(D, psi);
      double n2 = std::norm(a);
      total += n2 * n2;
      add_overlap_grad(D, psi, a, 2 * n2, G);
    }
    if (g) *g = total;
    return G;
  }

  // Gauss-Newton on the residuals |<psi|D_u psi>|^2 - 1/(d+1) and |psi|^2 - 1.
  // Used after descent to bring a near-fiducial to machine precision.
  CVec polish(CVec psi, int iters = 30) const {
    const int m = int(disp_.size()) + 1;
    const double t = 1.0 / double(d_ + 1);
    auto residual = [&](const CVec& v) {
      Eigen::VectorXd r(m);
      for (int k = 0; k + 1 < m; ++k) r(k) = std::norm(overlap(disp_[k], v)) - t;
      r(m - 1) = v.squaredNorm() - 1.0;
      return r;
    };
    Eigen::VectorXd r = residual(psi);
    for (int it = 0; it < iters && r.norm() > 1e-15; ++it) {
      Eigen::MatrixXd J(m, 2 * d_);
      for (int k = 0; k + 1 < m; ++k) {
        CVec w = CVec::Zero(d_);
        add_overlap_grad(disp_[k], psi, overlap(disp_[k], psi), 1.0, w);
        J.row(k) << 2 * w.real().transpose(), 2 * w.imag().transpose();
      }
      J.row(m - 1) << 2 * psi.real().transpose(), 2 * psi.imag().transpose();
      Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
      CVec next(d_);
      for (int x = 0; x < d_; ++x) next(x) = psi(x) + cplx(step(x), step(d_ + x));
      Eigen::VectorXd rn = residual(next);
      if (rn.norm() >= r.norm()) break;
      psi = next;
      r = rn;
    }
    return psi / psi.norm();
  }

 private:
  struct Disp {
    int shift;
    std::vector<cplx> phase;
  };
  // out += c * (conj(a) D psi + a D^H psi), the conj(psi)-derivative of |a|^2 scaled by c
  void add_overlap_grad(const Disp& D, const CVec& psi, cplx a, double c, CVec& out) const {
    for (int x = 0; x < d_; ++x) {
      int y = (x + D.shift) % d_, z = (x - D.shift + d_) % d_;
      out(y) += c * std::conj(a) * D.phase[x] * psi(x);
      out(z) += c * a * std::conj(D.phase[z]) * psi(x);
    }
  }
  cplx overlap(const Disp& D, const CVec& psi) const {
    cplx a = 0;
    for (int x = 0; x < d_; ++x) a += std::conj(psi((x + D.shift) % d_)) * D.phase[x] * psi(x);
    return a;
  }
  int d_;
  std::vector<Disp> disp_;
};

struct SicSearchOptions {
  int restarts = 50;
  int max_iter = 20000;
  double step_tol = 1e-12;
  double success_tol = 1e-9;
  int threads = 1;
  CMat subspace;  // optional orthonormal columns; the search stays in their span
};

struct SicSearchResult {
  std::optional<CVec> fiducial;
  double objective = std::numeric_limits<double>::infinity();
  int restart = -1;
  long iterations = 0;
};

namespace detail {

inline CVec random_unit(const CMat& basis, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  const int k = basis.cols() ? int(basis.cols()) : d;
  CVec c(k);
  for (int i = 0; i < k; ++i) c(i) = cplx(N(rng), N(rng));
  CVec v = basis.cols() ? CVec(basis * c) : c;
  return v / v.norm();
}

// Projected gradient descent with Armijo backtracking on the unit sphere.
inline std::pair<CVec, double> descend(const FramePotential& fp, CVec psi, const SicSearchOptions& o, long& iters) {
  const bool restricted = o.subspace.cols() > 0;
  double g = 0;
  double step = 0.1;
  const double tgt = fp.target();
  for (int it = 0; it < o.max_iter; ++it) {
    ++iters;
    CVec grad = 2.0 * fp.wirtinger(psi, &g);
    if (restricted) grad = o.subspace * (o.subspace.adjoint() * grad);
    grad -= psi * psi.dot(grad).real();  // drop the radial component
    const double gn2 = grad.squaredNorm();
    if (g - tgt < 1e-15 || gn2 < 1e-30) break;
    double s = step;
    CVec next;
    double gnext = 0;
    bool accepted = false;
    while (s * std::sqrt(gn2) > o.step_tol) {
      next = psi - s * grad;
      next /= next.norm();
      gnext = fp.value(next);
      if (gnext <= g - 1e-4 * s * gn2) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;
    psi = next;
    g = gnext;
    step = std::min(4 * s, 10.0);
  }
  return {psi, fp.value(psi)};
}

}  // namespace detail

// Seeds are derived per restart, so the result does not depend on the thread count.
inline SicSearchResult sic_search(int d, std::uint64_t seed, const SicSearchOptions& opts = {}) {
  if (d < 2 || d > 8) throw std::invalid_argument("sic_search supports 2 <= d <= 8");
  if (opts.subspace.cols() > 0 && opts.subspace.rows() != d) throw std::invalid_argument("subspace has wrong row count");
  FramePotential fp(d);
  struct Run {
    CVec psi;
    double g = std::numeric_limits<double>::infinity();
    long iters = 0;
  };
  std::vector<Run> runs(opts.restarts);
  parallel_for(opts.restarts, opts.threads, [&](long r) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + std::uint64_t(r));
    CVec start = detail::random_unit(opts.subspace, d, rng);
    auto [psi, g] = detail::descend(fp, start, opts, runs[r].iters);
    runs[r].psi = psi;
    runs[r].g = g;
  });
  SicSearchResult out;
  for (int r = 0; r < opts.restarts; ++r) {
    out.iterations += runs[r].iters;
    if (runs[r].g < out.objective) {
      out.objective = runs[r].g;
      out.restart = r;
    }
  }
  if (out.restart >= 0 && out.objective - fp.target() <= opts.success_tol) {
    CVec psi = fp.polish(runs[out.restart].psi);
    if (opts.subspace.cols() > 0) {
      psi = opts.subspace * (opts.subspace.adjoint() * psi);
      psi /= psi.norm();
    }
    if (is_sic_fiducial(psi, 1e-9)) {
      out.fiducial = psi;
      out.objective = fp.value(psi);
    }
  }
  return out;
}

}  // namespace hforge
