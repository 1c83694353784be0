#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hforge/exactmath.hpp"

namespace hforge {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

constexpr double kDefaultTol = 1e-10;

// Dense matrix of CycloNums sharing one conductor, row-major.
class ExactMat {
 public:
  ExactMat() = default;
  ExactMat(int rows, int cols, int N) : r_(rows), c_(cols), N_(N), a_(size_t(rows) * cols, CycloNum(N)) {}
  static ExactMat identity(int n, int N) {
    ExactMat m(n, n, N);
    for (int i = 0; i < n; ++i) m(i, i) = CycloNum(N, 1L);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  int conductor() const { return N_; }
  CycloNum& operator()(int i, int j) { return a_[size_t(i) * c_ + j]; }
  const CycloNum& operator()(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  friend ExactMat operator*(const ExactMat& A, const ExactMat& B) {
    if (A.c_ != B.r_) throw std::invalid_argument("shape mismatch");
    if (A.N_ != B.N_) throw std::invalid_argument("conductor mismatch");
    ExactMat C(A.r_, B.c_, A.N_);
    for (int i = 0; i < A.r_; ++i)
      for (int k = 0; k < A.c_; ++k) {
        const CycloNum& a = A(i, k);
        if (a.is_zero()) continue;
        for (int j = 0; j < B.c_; ++j) {
          const CycloNum& b = B(k, j);
          if (!b.is_zero()) C(i, j) += a * b;
        }
      }
    return C;
  }
  friend ExactMat operator+(ExactMat A, const ExactMat& B) {
    check_shape(A, B);
    for (size_t i = 0; i < A.a_.size(); ++i) A.a_[i] += B.a_[i];
    return A;
  }
  friend ExactMat operator-(ExactMat A, const ExactMat& B) {
    check_shape(A, B);
    for (size_t i = 0; i < A.a_.size(); ++i) A.a_[i] -= B.a_[i];
    return A;
  }
  ExactMat scaled(const CycloNum& s) const {
    ExactMat m = *this;
    for (auto& x : m.a_)
      if (!x.is_zero()) x = x * s;
    return m;
  }
  ExactMat adjoint() const {
    ExactMat m(c_, r_, N_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j).conj();
    return m;
  }
  ExactMat transpose() const {
    ExactMat m(c_, r_, N_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  ExactMat galois(long k) const {
    ExactMat m = *this;
    for (auto& x : m.a_)
      if (!x.is_zero()) x = x.galois(k);
    return m;
  }
  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }
  CycloNum trace() const {
    CycloNum t(N_);
    for (int i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
    return t;
  }
  friend bool operator==(const ExactMat& A, const ExactMat& B) {
    return A.r_ == B.r_ && A.c_ == B.c_ && A.N_ == B.N_ && A.a_ == B.a_;
  }
  friend bool operator!=(const ExactMat& A, const ExactMat& B) { return !(A == B); }

  CMat to_cmat() const {
    CMat m(r_, c_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(i, j) = (*this)(i, j).to_complex();
    return m;
  }

 private:
  static void check_shape(const ExactMat& A, const ExactMat& B) {
    if (A.r_ != B.r_ || A.c_ != B.c_) throw std::invalid_argument("shape mismatch");
    if (A.N_ != B.N_) throw std::invalid_argument("conductor mismatch");
  }
  int r_ = 0, c_ = 0, N_ = 1;
  std::vector<CycloNum> a_;
};

using ExactVec = std::vector<CycloNum>;

inline ExactVec operator*(const ExactMat& A, const ExactVec& v) {
  if (int(v.size()) != A.cols()) throw std::invalid_argument("shape mismatch");
  ExactVec out(A.rows(), CycloNum(A.conductor()));
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (!A(i, j).is_zero() && !v[j].is_zero()) out[i] += A(i, j) * v[j];
  return out;
}

inline ExactVec galois_vec(const ExactVec& v, long k) {
  ExactVec out = v;
  for (auto& x : out)
    if (!x.is_zero()) x = x.galois(k);
  return out;
}

// <a|b> = sum conj(a_i) b_i
inline CycloNum inner(const ExactVec& a, const ExactVec& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("shape mismatch");
  CycloNum s(a[0].conductor());
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i].conj() * b[i];
  return s;
}

inline ExactVec scale(const ExactVec& v, const CycloNum& s) {
  ExactVec out = v;
  for (auto& x : out)
    if (!x.is_zero()) x = x * s;
  return out;
}

inline CVec to_cvec(const ExactVec& v) {
  CVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_complex();
  return out;
}

inline ExactMat outer(const ExactVec& a, const ExactVec& b) {
  int N = a[0].conductor();
  ExactMat m(int(a.size()), int(b.size()), N);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      if (!a[i].is_zero() && !b[j].is_zero()) m(int(i), int(j)) = a[i] * b[j].conj();
  return m;
}

struct ExactElimination {
  int rank = 0;
  std::vector<ExactVec> nullspace;
};

// Reduced row echelon form; nullspace basis vectors follow free columns in order.
inline ExactElimination exact_eliminate(ExactMat M) {
  const int R = M.rows(), C = M.cols(), N = M.conductor();
  std::vector<int> pivcol;
  int row = 0;
  for (int col = 0; col < C && row < R; ++col) {
    int piv = -1;
    for (int i = row; i < R; ++i)
      if (!M(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < C; ++j) std::swap(M(piv, j), M(row, j));
    CycloNum inv = M(row, col).inverse();
    for (int j = col; j < C; ++j)
      if (!M(row, j).is_zero()) M(row, j) = M(row, j) * inv;
    for (int i = 0; i < R; ++i) {
      if (i == row || M(i, col).is_zero()) continue;
      CycloNum f = M(i, col);
      for (int j = col; j < C; ++j)
        if (!M(row, j).is_zero()) M(i, j) -= f * M(row, j);
    }
    pivcol.push_back(col);
    ++row;
  }
  ExactElimination out;
  out.rank = int(pivcol.size());
  std::vector<char> is_piv(C, 0);
  for (int c : pivcol) is_piv[c] = 1;
  for (int f = 0; f < C; ++f) {
    if (is_piv[f]) continue;
    ExactVec v(C, CycloNum(N));
    v[f] = CycloNum(N, 1L);
    for (int k = 0; k < out.rank; ++k) v[pivcol[k]] = -M(k, f);
    out.nullspace.push_back(std::move(v));
  }
  return out;
}

inline std::vector<ExactVec> exact_nullspace(const ExactMat& M) { return exact_eliminate(M).nullspace; }
inline int exact_rank(const ExactMat& M) { return exact_eliminate(M).rank; }

struct RankNull {
  int rank = 0;
  CMat nullspace;  // columns
  std::vector<double> singular_values;
};

inline RankNull rank_nullspace(const CMat& M, double tol = kDefaultTol) {
  RankNull out;
  const int C = int(M.cols());
  if (M.size() == 0) {
    out.nullspace = CMat::Identity(C, C);
    return out;
  }
  Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  for (int i = 0; i < s.size(); ++i) out.singular_values.push_back(s[i]);
  double smax = s.size() ? s[0] : 0.0;
  for (int i = 0; i < s.size(); ++i)
    if (smax > 0 && s[i] > tol * smax) ++out.rank;
  out.nullspace = svd.matrixV().rightCols(C - out.rank);
  return out;
}

struct Eigenspace {
  cplx value;
  CMat basis;  // orthonormal columns
};

inline double phase_of(cplx z) {
  double a = std::arg(z);
  if (a < 0) a += 2 * M_PI;
  if (a >= 2 * M_PI - 1e-12) a = 0;  // fold values just below 2 pi onto 0
  return a;
}

// Spectral decomposition of a unitary through its two Hermitian parts.
inline std::vector<Eigenspace> eig_unitary(const CMat& M, double tol = kDefaultTol) {
  const int n = int(M.rows());
  if (M.cols() != n) throw std::invalid_argument("matrix not square");
  if ((M.adjoint() * M - CMat::Identity(n, n)).cwiseAbs().maxCoeff() >= tol)
    throw std::invalid_argument("matrix is not unitary");
  const double ctol = std::max(tol, 1e-9);
  CMat H1 = (M + M.adjoint()) / 2.0;
  CMat H2 = (M - M.adjoint()) / cplx(0, 2);
  Eigen::SelfAdjointEigenSolver<CMat> es1(H1);
  std::vector<Eigenspace> raw;
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && es1.eigenvalues()[j] - es1.eigenvalues()[j - 1] < ctol) ++j;
    CMat Q = es1.eigenvectors().middleCols(i, j - i);
    double c = es1.eigenvalues().segment(i, j - i).mean();
    CMat h = Q.adjoint() * H2 * Q;
    h = (h + h.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<CMat> es2(h);
    int a = 0, m = j - i;
    while (a < m) {
      int b = a + 1;
      while (b < m && es2.eigenvalues()[b] - es2.eigenvalues()[b - 1] < ctol) ++b;
      double s = es2.eigenvalues().segment(a, b - a).mean();
      cplx lam(c, s);
      lam /= std::abs(lam);
      raw.push_back({lam, Q * es2.eigenvectors().middleCols(a, b - a)});
      a = b;
    }
    i = j;
  }
  std::sort(raw.begin(), raw.end(),
            [](const Eigenspace& x, const Eigenspace& y) { return phase_of(x.value) < phase_of(y.value); });
  std::vector<Eigenspace> out;
  for (auto& e : raw) {
    if (!out.empty() && std::abs(out.back().value - e.value) < ctol) {
      CMat merged(n, out.back().basis.cols() + e.basis.cols());
      merged << out.back().basis, e.basis;
      out.back().basis = merged;
    } else {
      out.push_back(e);
    }
  }
  // the phase 0 cluster may also appear at the top of the range
  if (out.size() > 1 && std::abs(out.back().value - out.front().value) < ctol) {
    CMat merged(n, out.front().basis.cols() + out.back().basis.cols());
    merged << out.front().basis, out.back().basis;
    out.front().basis = merged;
    out.pop_back();
  }
  return out;
}

}  // namespace hforge
