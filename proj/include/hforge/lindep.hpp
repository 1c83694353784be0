#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hforge/clifford.hpp"
#include "hforge/parallel.hpp"
#include "hforge/sictools.hpp"

namespace hforge {

// Eigenspaces of the Zauner unitary, eigenvalue eta^k.
enum class ZLabel { H1 = 0, Heta = 1, Heta2 = 2 };

inline std::string to_string(ZLabel l) {
  switch (l) {
    case ZLabel::H1: return "H1";
    case ZLabel::Heta: return "Heta";
    default: return "Heta2";
  }
}

inline ZLabel parse_zlabel(const std::string& s) {
  if (s == "H1" || s == "1") return ZLabel::H1;
  if (s == "Heta" || s == "eta") return ZLabel::Heta;
  if (s == "Heta2" || s == "eta2") return ZLabel::Heta2;
  throw std::invalid_argument("unknown eigenspace: " + s);
}

struct OrbitContext {
  int d = 0;
  ZLabel label = ZLabel::H1;
  CVec psi;
  std::vector<CVec> orbit;  // index u1 * d + u2
  std::uint64_t seed = 0;
};

inline OrbitContext context_from_vector(const CVec& psi, double tol = 1e-8) {
  const int d = int(psi.size());
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  auto Z = zauner(d);
  CVec v = psi / psi.norm();
  CVec w = Z.U * v;
  cplx lam = v.dot(w);
  if ((w - lam * v).norm() > tol) throw std::invalid_argument("vector is not a Zauner eigenvector");
  int k = -1;
  for (int j = 0; j < 3; ++j)
    if (std::abs(lam - std::polar(1.0, 2 * M_PI * j / 3.0)) < 1e-6) k = j;
  if (k < 0) throw std::invalid_argument("eigenvalue is not a cube root of unity");
  return {d, ZLabel(k), v, wh_orbit(v), 0};
}

// Seeded complex Gaussian projected onto the eigenspace.
inline OrbitContext make_context(int d, ZLabel label, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  auto Z = zauner(d);
  const CMat& B = Z.spaces[int(label)];
  if (B.cols() == 0) throw std::invalid_argument("eigenspace is empty for this dimension");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  CVec c(B.cols());
  for (int i = 0; i < c.size(); ++i) c(i) = cplx(N(rng), N(rng));
  CVec v = B * c;
  v /= v.norm();
  return {d, label, v, wh_orbit(v), seed};
}

// Phase-space points are indexed u1 * d + u2.
struct IntMat2 {
  long a, b, c, d;
};

inline IntMat2 zauner_symplectic() { return {0, -1, 1, -1}; }

// The order-6 symplectic whose invariant sets supplement the Zauner ones.
inline std::optional<IntMat2> m_symplectic(int d) {
  if (d == 6) return IntMat2{3, 8, 4, 11};
  if (d % 3 == 0 && d % 2 == 1) {
    long k = d / 3;
    return IntMat2{k + 1, k, 2 * k, 2 * k + 1};
  }
  return std::nullopt;
}

// p -> q + A (p - q) on Z_d^2, as an index permutation.
inline std::vector<int> affine_perm(int d, const IntMat2& A, int q) {
  const long q1 = q / d, q2 = q % d;
  std::vector<int> out(size_t(d) * d);
  for (long p1 = 0; p1 < d; ++p1)
    for (long p2 = 0; p2 < d; ++p2) {
      long x = p1 - q1, y = p2 - q2;
      long r1 = mod(q1 + A.a * x + A.b * y, d), r2 = mod(q2 + A.c * x + A.d * y, d);
      out[p1 * d + p2] = int(r1 * d + r2);
    }
  return out;
}

inline std::vector<int> translate(const std::vector<int>& pts, int d, int u) {
  const int u1 = u / d, u2 = u % d;
  std::vector<int> out;
  out.reserve(pts.size());
  for (int p : pts) out.push_back(((p / d + u1) % d) * d + (p % d + u2) % d);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool invariant_under(const std::vector<int>& pts, const std::vector<int>& perm) {
  for (int p : pts)
    if (!std::binary_search(pts.begin(), pts.end(), perm[p])) return false;
  return true;
}

// Invariance under p -> q + A(p - q) for some centre q.
inline bool affine_invariant(const std::vector<int>& pts, int d, const IntMat2& A) {
  for (int q = 0; q < d * d; ++q)
    if (invariant_under(pts, affine_perm(d, A, q))) return true;
  return false;
}

// Distinct affine maps p -> q + A(p - q); centres differing by a fixed point of A coincide.
inline std::vector<std::vector<int>> distinct_affine_maps(int d, const IntMat2& A) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  for (int q = 0; q < d * d; ++q) {
    auto perm = affine_perm(d, A, q);
    if (seen.insert(perm).second) out.push_back(std::move(perm));
  }
  return out;
}

// Cycles of a permutation, in order of their smallest point.
inline std::vector<std::vector<int>> perm_cycles(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  std::vector<std::vector<int>> out;
  for (int p = 0; p < int(perm.size()); ++p) {
    if (seen[p]) continue;
    std::vector<int> cyc;
    for (int x = p; !seen[x]; x = perm[x]) {
      seen[x] = 1;
      cyc.push_back(x);
    }
    std::sort(cyc.begin(), cyc.end());
    out.push_back(std::move(cyc));
  }
  return out;
}

struct DepSet {
  std::vector<int> points;  // ascending
  int rank = 0;
  bool z_inv = false;
  bool m_inv = false;
  int stabilizer = 1;  // number of translations fixing the set
};

// colex: compare from the largest element down
inline bool colex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

inline CMat set_matrix(const OrbitContext& ctx, const std::vector<int>& pts) {
  CMat M(ctx.d, int(pts.size()));
  for (int j = 0; j < int(pts.size()); ++j) M.col(j) = ctx.orbit[pts[j]];
  return M;
}

inline int set_rank(const OrbitContext& ctx, const std::vector<int>& pts, double rtol = 1e-10) {
  return rank_nullspace(set_matrix(ctx, pts), rtol).rank;
}

inline void tag_set(DepSet& s, int d) {
  s.z_inv = affine_invariant(s.points, d, zauner_symplectic());
  auto M = m_symplectic(d);
  s.m_inv = M && affine_invariant(s.points, d, *M);
  s.stabilizer = 0;
  for (int u = 0; u < d * d; ++u)
    if (translate(s.points, d, u) == s.points) ++s.stabilizer;
}

// Sets forced dependent by the eigenspace dimension count, around every Zauner
// centre: with t whole triplets and s singlets the eigenspace of psi receives
// t + s vectors and the other two receive t each.
inline std::vector<DepSet> predicted_sets(const OrbitContext& ctx, double rtol = 1e-10) {
  const int d = ctx.d, n = d * d;
  const auto dims = zauner_dims_table(d);
  const int lab = int(ctx.label);
  std::set<std::vector<int>> found;
  for (auto& perm : distinct_affine_maps(d, zauner_symplectic())) {
    std::vector<std::vector<int>> trip;
    std::vector<int> sing;
    for (auto& c : perm_cycles(perm)) {
      if (c.size() == 1)
        sing.push_back(c[0]);
      else
        trip.push_back(c);
    }
    for (int t = 0; 3 * t <= d; ++t)
      for (int s = 0; s <= int(sing.size()) && 3 * t + s <= d; ++s) {
        std::array<int, 3> cnt{t, t, t};
        cnt[lab] += s;
        bool dep = false;
        for (int k = 0; k < 3; ++k) dep |= cnt[k] > dims[k];
        if (!dep) continue;
        // minimal configurations only; supersets come from the completion step
        bool minimal = true;
        if (t > 0) {
          std::array<int, 3> c2{t - 1, t - 1, t - 1};
          c2[lab] += s;
          bool d2 = false;
          for (int k = 0; k < 3; ++k) d2 |= c2[k] > dims[k];
          minimal &= !d2;
        }
        if (s > 0) {
          std::array<int, 3> c3{t, t, t};
          c3[lab] += s - 1;
          bool d3 = false;
          for (int k = 0; k < 3; ++k) d3 |= c3[k] > dims[k];
          minimal &= !d3;
        }
        if (!minimal) continue;
        std::vector<int> ti(t), si(s);
        std::function<void(int, int)> pick_s;
        auto complete = [&](std::vector<int> base) {
          std::sort(base.begin(), base.end());
          std::vector<int> rest;
          for (int p = 0; p < n; ++p)
            if (!std::binary_search(base.begin(), base.end(), p)) rest.push_back(p);
          const int need = d - int(base.size());
          std::vector<int> idx(need);
          for (int i = 0; i < need; ++i) idx[i] = i;
          for (;;) {
            std::vector<int> set = base;
            for (int i : idx) set.push_back(rest[i]);
            std::sort(set.begin(), set.end());
            found.insert(std::move(set));
            int i = need - 1;
            while (i >= 0 && idx[i] == int(rest.size()) - need + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < need; ++j) idx[j] = idx[j - 1] + 1;
          }
        };
        std::function<void(int, int)> pick_t = [&](int k, int from) {
          if (k == t) {
            pick_s(0, 0);
            return;
          }
          for (int i = from; i < int(trip.size()); ++i) {
            ti[k] = i;
            pick_t(k + 1, i + 1);
          }
        };
        pick_s = [&](int k, int from) {
          if (k == s) {
            std::vector<int> base;
            for (int i : ti) base.insert(base.end(), trip[i].begin(), trip[i].end());
            for (int i : si) base.push_back(sing[i]);
            complete(std::move(base));
            return;
          }
          for (int i = from; i < int(sing.size()); ++i) {
            si[k] = i;
            pick_s(k + 1, i + 1);
          }
        };
        pick_t(0, 0);
      }
  }
  std::vector<DepSet> out;
  out.reserve(found.size());
  for (auto& pts : found) {
    DepSet s{pts, set_rank(ctx, pts, rtol)};
    if (s.rank >= d) throw std::logic_error("predicted set is numerically independent");
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const DepSet& a, const DepSet& b) { return colex_less(a.points, b.points); });
  return out;
}

struct SearchOptions {
  double rtol = 1e-10;    // singular-value test, relative to the largest
  double filter = 1e-6;   // residual below which a candidate goes to the SVD test
  int threads = 1;
  bool long_run = false;  // permits d = 8
};

namespace detail {

// Depth-first scan of d-subsets in descending index order. Each prefix keeps an
// orthonormal basis of its span; the last vector only needs one inner product
// with the hyperplane normal. Near-dependent prefixes hand all their completions
// to the SVD test.
class SubsetScanner {
 public:
  SubsetScanner(const OrbitContext& ctx, const SearchOptions& o) : d_(ctx.d), n_(ctx.d * ctx.d), opt_(o) {
    if (d_ > kMax) throw std::length_error("dimension too large for the scanner");
    V_.resize(size_t(n_) * d_);
    for (int i = 0; i < n_; ++i)
      for (int x = 0; x < d_; ++x) V_[size_t(i) * d_ + x] = ctx.orbit[i](x);
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> N(0, 1);
    for (int x = 0; x < d_; ++x) e_[x] = cplx(N(rng), N(rng));
  }

  // Visits every candidate whose largest index is m; fn receives indices in descending order.
  template <class Fn>
  void shard(int m, Fn&& fn) {
    State st;
    st.chosen[0] = m;
    const cplx* v = vec(m);
    double nv = 0;
    for (int x = 0; x < d_; ++x) nv += std::norm(v[x]);
    nv = std::sqrt(nv);
    if (nv < opt_.filter) {
      completions(st, 1, m, fn);
      return;
    }
    for (int x = 0; x < d_; ++x) st.Q[0][x] = v[x] / nv;
    rec(st, 1, fn);
  }

  long shards() const { return n_; }

 private:
  static constexpr int kMax = 8;
  struct State {
    cplx Q[kMax][kMax];
    int chosen[kMax];
  };

  const cplx* vec(int i) const { return &V_[size_t(i) * d_]; }

  template <class Fn>
  void rec(State& st, int level, Fn& fn) {
    const int last = st.chosen[level - 1];
    if (level == d_ - 1) {
      cplx nrm[kMax];
      if (!normal(st, level, nrm)) {
        completions(st, level, last, fn);
        return;
      }
      for (int j = 0; j < last; ++j) {
        const cplx* v = vec(j);
        cplx ip = 0;
        for (int x = 0; x < d_; ++x) ip += std::conj(nrm[x]) * v[x];
        if (std::abs(ip) < opt_.filter) {
          st.chosen[level] = j;
          fn(st.chosen);
        }
      }
      return;
    }
    const int need = d_ - 1 - level;  // indices still to pick below j
    for (int j = last - 1; j >= need; --j) {
      cplx r[kMax];
      const cplx* v = vec(j);
      for (int x = 0; x < d_; ++x) r[x] = v[x];
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k < level; ++k) {
          cplx ip = 0;
          for (int x = 0; x < d_; ++x) ip += std::conj(st.Q[k][x]) * r[x];
          for (int x = 0; x < d_; ++x) r[x] -= ip * st.Q[k][x];
        }
      double nr = 0;
      for (int x = 0; x < d_; ++x) nr += std::norm(r[x]);
      nr = std::sqrt(nr);
      st.chosen[level] = j;
      if (nr < opt_.filter) {
        completions(st, level + 1, j, fn);
        continue;
      }
      for (int x = 0; x < d_; ++x) st.Q[level][x] = r[x] / nr;
      rec(st, level + 1, fn);
    }
  }

  // Unit vector orthogonal to the d-1 basis vectors.
  bool normal(const State& st, int level, cplx* out) const {
    auto project = [&](const cplx* e) {
      for (int x = 0; x < d_; ++x) out[x] = e[x];
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k < level; ++k) {
          cplx ip = 0;
          for (int x = 0; x < d_; ++x) ip += std::conj(st.Q[k][x]) * out[x];
          for (int x = 0; x < d_; ++x) out[x] -= ip * st.Q[k][x];
        }
      double nn = 0;
      for (int x = 0; x < d_; ++x) nn += std::norm(out[x]);
      return std::sqrt(nn);
    };
    double e2 = 0;
    for (int x = 0; x < d_; ++x) e2 += std::norm(e_[x]);
    double nn = project(e_);
    if (nn < 1e-3 * std::sqrt(e2)) {
      cplx unit[kMax];
      double best = 0;
      int bx = 0;
      for (int y = 0; y < d_; ++y) {
        for (int x = 0; x < d_; ++x) unit[x] = x == y ? 1.0 : 0.0;
        double m = project(unit);
        if (m > best) best = m, bx = y;
      }
      for (int x = 0; x < d_; ++x) unit[x] = x == bx ? 1.0 : 0.0;
      nn = project(unit);
    }
    if (nn < 1e-12) return false;
    for (int x = 0; x < d_; ++x) out[x] /= nn;
    return true;
  }

  // All ways to fill chosen[level..d-1] from indices below `below`, descending.
  template <class Fn>
  void completions(State& st, int level, int below, Fn& fn) {
    if (level == d_) {
      fn(st.chosen);
      return;
    }
    for (int j = below - 1; j >= d_ - 1 - level; --j) {
      st.chosen[level] = j;
      completions(st, level + 1, j, fn);
    }
  }

  int d_, n_;
  SearchOptions opt_;
  std::vector<cplx> V_;
  cplx e_[kMax];
};

inline void check_search_guard(int d, const SearchOptions& o) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (d > 8) throw std::length_error("exhaustive search is limited to d <= 8");
  if (d == 8 && !o.long_run) throw std::length_error("d = 8 exhaustive search needs the long-run flag");
}

// Runs the scan with SVD confirmation; emit(shard, descending points, rank).
template <class Emit>
void scan_confirmed(const OrbitContext& ctx, const SearchOptions& o, Emit&& emit) {
  check_search_guard(ctx.d, o);
  SubsetScanner sc(ctx, o);
  const int d = ctx.d;
  // descending shards put the heavy ones first
  const long S = sc.shards();
  parallel_for_dynamic(S, o.threads, [&](long i) {
    int m = int(S - 1 - i);
    CMat M(d, d);
    sc.shard(m, [&](const int* chosen) {
      for (int j = 0; j < d; ++j) M.col(j) = ctx.orbit[chosen[j]];
      Eigen::JacobiSVD<CMat> svd(M);
      const auto& s = svd.singularValues();
      int rank = 0;
      for (int k = 0; k < d; ++k)
        if (s(k) > o.rtol * s(0)) ++rank;
      if (rank < d) emit(m, chosen, rank);
    });
  });
}

}  // namespace detail

// All d-subsets of the orbit whose smallest singular value is below rtol times the
// largest, in colex order. The result does not depend on the thread count.
inline std::vector<DepSet> exhaustive_search(const OrbitContext& ctx, const SearchOptions& o = {}) {
  const int d = ctx.d, n = d * d;
  std::vector<std::vector<DepSet>> shards(n);
  detail::scan_confirmed(ctx, o, [&](int m, const int* chosen, int rank) {
    DepSet s;
    s.points.assign(chosen, chosen + d);
    std::reverse(s.points.begin(), s.points.end());
    s.rank = rank;
    shards[m].push_back(std::move(s));
  });
  std::vector<DepSet> out;
  for (auto& sh : shards) {
    std::sort(sh.begin(), sh.end(), [](const DepSet& a, const DepSet& b) { return colex_less(a.points, b.points); });
    for (auto& s : sh) out.push_back(std::move(s));
  }
  return out;
}

// Count-only variant for large runs.
inline long exhaustive_count(const OrbitContext& ctx, const SearchOptions& o = {}) {
  const int n = ctx.d * ctx.d;
  std::vector<long> counts(n, 0);
  detail::scan_confirmed(ctx, o, [&](int m, const int*, int) { ++counts[m]; });
  long total = 0;
  for (long c : counts) total += c;
  return total;
}

// Sets invariant under an affine Zauner or M map, tested numerically. Used where
// the exhaustive scan is out of reach. Unions of cycles are built depth first with
// a running orthonormal basis, so only near-dependent candidates reach the SVD.
inline std::vector<DepSet> targeted_search(const OrbitContext& ctx, const SearchOptions& o = {}) {
  const int d = ctx.d;
  std::vector<IntMat2> gens{zauner_symplectic()};
  if (auto M = m_symplectic(d)) gens.push_back(*M);
  std::set<std::vector<int>> found;
  for (auto& A : gens)
    for (auto& perm : distinct_affine_maps(d, A)) {
      auto cyc = perm_cycles(perm);
      std::vector<int> cur;
      std::vector<CVec> Q;
      // dep: the current points are already (nearly) dependent
      std::function<void(size_t, bool)> rec = [&](size_t i, bool dep) {
        if (int(cur.size()) == d) {
          if (!dep) return;
          auto s = cur;
          std::sort(s.begin(), s.end());
          if (set_rank(ctx, s, o.rtol) < d) found.insert(std::move(s));
          return;
        }
        for (size_t j = i; j < cyc.size(); ++j) {
          if (int(cur.size() + cyc[j].size()) > d) continue;
          const size_t q0 = Q.size();
          bool dj = dep;
          for (int p : cyc[j]) {
            cur.push_back(p);
            if (dj) continue;
            CVec r = ctx.orbit[p];
            for (int pass = 0; pass < 2; ++pass)
              for (auto& q : Q) r -= q * q.dot(r);
            double nr = r.norm();
            if (nr < o.filter)
              dj = true;
            else
              Q.push_back(r / nr);
          }
          rec(j + 1, dj);
          cur.resize(cur.size() - cyc[j].size());
          Q.resize(q0);
        }
      };
      rec(0, false);
    }
  std::vector<DepSet> out;
  for (auto& pts : found) out.push_back({pts, set_rank(ctx, pts, o.rtol)});
  std::sort(out.begin(), out.end(), [](const DepSet& a, const DepSet& b) { return colex_less(a.points, b.points); });
  return out;
}

struct SetOrbit {
  std::vector<int> representative;  // colex-least member
  int length = 0;
  bool z_inv = false;
  bool m_inv = false;
  bool complete = true;             // every translate is in the input list
  std::vector<long> members;        // indices into the input list
};

struct OrbitSummary {
  std::vector<SetOrbit> orbits;     // sorted by (length, representative)
  std::vector<long> orbit_of;       // input index -> orbit index
};

struct VecIntHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ULL;
    for (int x : v) h = (h ^ size_t(x)) * 1099511628211ULL;
    return h;
  }
};

// Partition under translation p_i -> p_i + u and tag Zauner / M invariance.
inline OrbitSummary orbit_grouping(const std::vector<DepSet>& sets, int d) {
  std::unordered_map<std::vector<int>, long, VecIntHash> index;
  for (long i = 0; i < long(sets.size()); ++i) index.emplace(sets[i].points, i);
  std::vector<long> assigned(sets.size(), -1);
  std::vector<SetOrbit> raw;
  for (long i = 0; i < long(sets.size()); ++i) {
    if (assigned[i] >= 0) continue;
    SetOrbit o;
    std::set<std::vector<int>> trans;
    for (int u = 0; u < d * d; ++u) trans.insert(translate(sets[i].points, d, u));
    o.length = int(trans.size());
    for (auto& t : trans) {
      auto it = index.find(t);
      if (it == index.end()) {
        o.complete = false;
        continue;
      }
      o.members.push_back(it->second);
      assigned[it->second] = long(raw.size());
    }
    std::sort(o.members.begin(), o.members.end());
    o.representative = *std::min_element(trans.begin(), trans.end(), colex_less);
    o.z_inv = affine_invariant(o.representative, d, zauner_symplectic());
    auto M = m_symplectic(d);
    o.m_inv = M && affine_invariant(o.representative, d, *M);
    raw.push_back(std::move(o));
  }
  std::vector<long> order(raw.size());
  for (long i = 0; i < long(order.size()); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    if (raw[a].length != raw[b].length) return raw[a].length < raw[b].length;
    return colex_less(raw[a].representative, raw[b].representative);
  });
  std::vector<long> rank_of(raw.size());
  OrbitSummary out;
  for (long k = 0; k < long(order.size()); ++k) {
    rank_of[order[k]] = k;
    out.orbits.push_back(std::move(raw[order[k]]));
  }
  out.orbit_of.resize(sets.size());
  for (size_t i = 0; i < sets.size(); ++i) out.orbit_of[i] = rank_of[assigned[i]];
  return out;
}

// Points, sets, points per set and sets per point (-1 when not uniform).
struct Configuration {
  long points = 0;
  long sets = 0;
  int per_set = -1;
  long per_point = -1;
};

inline Configuration configuration(const std::vector<DepSet>& sets, int d) {
  Configuration c;
  c.points = long(d) * d;
  c.sets = long(sets.size());
  std::vector<long> inc(c.points, 0);
  std::set<size_t> sizes;
  for (auto& s : sets) {
    sizes.insert(s.points.size());
    for (int p : s.points) ++inc[p];
  }
  if (sizes.size() == 1) c.per_set = int(*sizes.begin());
  if (std::all_of(inc.begin(), inc.end(), [&](long x) { return x == inc[0]; })) c.per_point = inc[0];
  return c;
}

// Unit normal of a rank d-1 set, phase-fixed so the first nonzero entry is real positive.
inline std::optional<CVec> set_normal(const OrbitContext& ctx, const std::vector<int>& pts, double rtol = 1e-10) {
  CMat M = set_matrix(ctx, pts);
  Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const int d = ctx.d;
  int rank = 0;
  for (int k = 0; k < s.size(); ++k)
    if (s(k) > rtol * s(0)) ++rank;
  if (rank != d - 1) return std::nullopt;
  CVec n = svd.matrixU().col(d - 1);
  for (int x = 0; x < d; ++x)
    if (std::abs(n(x)) > 1e-9) {
      n *= std::abs(n(x)) / n(x);
      break;
    }
  return n;
}

struct NormalsReport {
  std::vector<CVec> normals;
  std::vector<long> set_index;  // normal k belongs to sets[set_index[k]]
  long skipped = 0;             // sets of rank below d-1
  long orthogonal_pairs = 0;
  long triples = 0;
  long quadruples = 0;
  long triples_in_quadruples = 0;  // distinct triples contained in some quadruple
  std::vector<std::array<long, 4>> quadruple_list;  // normal indices
};

inline NormalsReport normals_and_orthogonality(const std::vector<DepSet>& sets, const OrbitContext& ctx,
                                               double tol = 1e-8) {
  NormalsReport r;
  for (long i = 0; i < long(sets.size()); ++i) {
    auto n = set_normal(ctx, sets[i].points);
    if (!n) {
      ++r.skipped;
      continue;
    }
    r.normals.push_back(*n);
    r.set_index.push_back(i);
  }
  const long N = long(r.normals.size());
  std::vector<std::vector<long>> nb(N);  // higher-indexed orthogonal neighbours
  CMat A(ctx.d, N);
  for (long k = 0; k < N; ++k) A.col(k) = r.normals[k];
  CMat G = A.adjoint() * A;
  for (long i = 0; i < N; ++i)
    for (long j = i + 1; j < N; ++j)
      if (std::abs(G(i, j)) < tol) nb[i].push_back(j);
  for (long i = 0; i < N; ++i) {
    r.orthogonal_pairs += long(nb[i].size());
    for (size_t a = 0; a < nb[i].size(); ++a) {
      long j = nb[i][a];
      std::vector<long> common;
      std::set_intersection(nb[i].begin() + a + 1, nb[i].end(), nb[j].begin(), nb[j].end(), std::back_inserter(common));
      r.triples += long(common.size());
      for (size_t b = 0; b < common.size(); ++b) {
        long k = common[b];
        for (size_t c = b + 1; c < common.size(); ++c)
          if (std::binary_search(nb[k].begin(), nb[k].end(), common[c])) {
            ++r.quadruples;
            r.quadruple_list.push_back({i, j, k, common[c]});
          }
      }
    }
  }
  std::set<std::array<long, 3>> inner;
  for (auto& q : r.quadruple_list)
    for (int skip = 0; skip < 4; ++skip) {
      std::array<long, 3> t;
      for (int a = 0, b = 0; a < 4; ++a)
        if (a != skip) t[b++] = q[a];
      inner.insert(t);
    }
  r.triples_in_quadruples = long(inner.size());
  return r;
}

// True when the vectors split into d+1 orthonormal bases, mutually unbiased.
inline bool forms_complete_mub(const std::vector<CVec>& vs, int d, double tol = 1e-8) {
  if (long(vs.size()) != long(d) * (d + 1)) return false;
  std::vector<int> basis(vs.size(), -1);
  int nb = 0;
  for (size_t i = 0; i < vs.size(); ++i) {
    if (basis[i] >= 0) continue;
    basis[i] = nb;
    int size = 1;
    for (size_t j = i + 1; j < vs.size(); ++j)
      if (basis[j] < 0 && std::abs(vs[i].dot(vs[j])) < tol) {
        basis[j] = nb;
        ++size;
      }
    if (size != d) return false;
    ++nb;
  }
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) {
      double o = std::norm(vs[i].dot(vs[j]));
      double want = basis[i] == basis[j] ? 0.0 : 1.0 / d;
      if (std::abs(o - want) > tol) return false;
    }
  return true;
}

// R, S, T built from D_03, D_30, D_33 in d = 6, omega = e^{2 pi i / 6}.
struct RstOps {
  CMat R, S, T;
};

inline RstOps rst_ops() {
  const int d = 6;
  CMat A = ordinary_displacement(d, 0, 3), B = ordinary_displacement(d, 3, 0), C = ordinary_displacement(d, 3, 3);
  auto w = [](int k) { return std::polar(1.0, 2 * M_PI * k / 6.0); };
  const double s = 1.0 / std::sqrt(3.0);
  return {s * (A + B + C), s * (A + w(2) * B + w(4) * C), s * (A + w(4) * B + w(2) * C)};
}

struct SmallSicReport {
  std::vector<CVec> vectors;  // psi, D_03 psi, D_30 psi, D_33 psi
  ZLabel label = ZLabel::H1;
  bool equiangular = false;
  double overlap = 0;         // common |<a|b>| when equiangular
  int span_dim = 0;
  bool is_sic = false;        // equiangular with overlap 1/sqrt(3) in a 2-dim span
  bool S_kills = false, T_kills = false;
  int R_sign = 0;             // +1 or -1 when R psi = +-psi
};

inline SmallSicReport small_sic_d6(const CVec& psi, double tol = 1e-10) {
  if (psi.size() != 6) throw std::invalid_argument("small SIC construction needs d = 6");
  OrbitContext ctx = context_from_vector(psi, 1e-8);
  const CVec& v = ctx.psi;
  SmallSicReport r;
  r.label = ctx.label;
  r.vectors = {v, ordinary_displace(6, 0, 3, v), ordinary_displace(6, 3, 0, v), ordinary_displace(6, 3, 3, v)};
  r.overlap = std::abs(r.vectors[0].dot(r.vectors[1]));
  r.equiangular = true;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) r.equiangular &= std::abs(std::abs(r.vectors[i].dot(r.vectors[j])) - r.overlap) < tol;
  CMat M(6, 4);
  for (int j = 0; j < 4; ++j) M.col(j) = r.vectors[j];
  r.span_dim = rank_nullspace(M, tol).rank;
  r.is_sic = r.equiangular && r.span_dim == 2 && std::abs(r.overlap - 1.0 / std::sqrt(3.0)) < tol;
  auto ops = rst_ops();
  r.S_kills = (ops.S * v).norm() < tol;
  r.T_kills = (ops.T * v).norm() < tol;
  CVec Rv = ops.R * v;
  if ((Rv - v).norm() < tol) r.R_sign = 1;
  if ((Rv + v).norm() < tol) r.R_sign = -1;
  return r;
}

}  // namespace hforge
