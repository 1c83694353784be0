// hforge command-line front end.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hforge/lindep.hpp"
#include "hforge/mubcycler.hpp"
#include "hforge/sictools.hpp"

using json = nlohmann::ordered_json;
using namespace hforge;

namespace {

#ifndef HFORGE_VERSION
#define HFORGE_VERSION "dev"
#endif

struct RunConfig {
  std::string command;
  long p = 3;
  int n = 1;
  int d = 3;
  std::string eigenspace = "H1";
  double theta = 0;
  double t = 2;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int threads = default_threads();
  int restarts = 50;
  bool long_run = false;
  bool targeted = false;
  bool sic = false;
  bool zauner = false;
  std::string out;
  std::string jsonl;
  std::string svg;
  std::string format = "json";
  std::string expect;
  std::string g, g1, g2;
  std::string fiducial;
  int index = 0;
  int samples = 10;
};

struct ExpectMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Doubles are rounded to 15 significant digits so output is stable across runs.
double r15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::stod(buf);
}

json cplx_json(cplx z) { return json::array({r15(z.real()), r15(z.imag())}); }

json cvec_json(const CVec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(cplx_json(v(i)));
  return a;
}

json exact_vec_json(const ExactVec& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(x.to_string());
  return a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

// A "table" array of flat objects becomes rows; otherwise top-level scalars become key,value rows.
std::string to_csv(const json& result) {
  std::ostringstream os;
  if (result.contains("table") && result["table"].is_array() && !result["table"].empty()) {
    const json& T = result["table"];
    std::vector<std::string> keys;
    for (auto it = T[0].begin(); it != T[0].end(); ++it) keys.push_back(it.key());
    for (size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_field(keys[i]);
    os << "\r\n";
    for (auto& row : T) {
      for (size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_field(scalar_text(row[keys[i]]));
      os << "\r\n";
    }
    return os.str();
  }
  os << "key,value\r\n";
  for (auto it = result.begin(); it != result.end(); ++it)
    if (!it.value().is_structured()) os << csv_field(it.key()) << "," << csv_field(scalar_text(it.value())) << "\r\n";
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open " + path);
  f << text;
}

// Rect grid with a two-colour linear ramp; min and max written under the grid.
std::string heatmap_svg(const std::vector<std::vector<double>>& grid, const std::string& title) {
  const int rows = int(grid.size()), cols = rows ? int(grid[0].size()) : 0;
  double lo = 1e300, hi = -1e300;
  for (auto& r : grid)
    for (double x : r) lo = std::min(lo, x), hi = std::max(hi, x);
  const int cell = 32, margin = 40;
  const int W = 2 * margin + cols * cell, H = 2 * margin + rows * cell + 20;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  auto colour = [&](double x) {
    double f = hi > lo ? (x - lo) / (hi - lo) : 0.5;
    int r = int(std::lround(49 + f * (215 - 49))), g = int(std::lround(54 + f * (48 - 54))),
        b = int(std::lround(149 + f * (39 - 149)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      os << "<rect x=\"" << margin + j * cell << "\" y=\"" << margin + (rows - 1 - i) * cell << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"" << colour(grid[i][j]) << "\"><title>(" << i << "," << j << ") "
         << r15(grid[i][j]) << "</title></rect>\n";
  os << "<text x=\"" << margin << "\" y=\"" << H - 12 << "\" font-family=\"sans-serif\" font-size=\"12\">min "
     << r15(lo) << "  max " << r15(hi) << "</text>\n</svg>\n";
  return os.str();
}

long parse_long(const std::string& s) {
  size_t pos = 0;
  long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

std::vector<long> parse_list(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_long(item));
  return out;
}

// "a,b,c,d" as field-element codes, row major.
GLpMat parse_matrix(const FField& F, const std::string& s) {
  if (s.empty()) throw std::invalid_argument("matrix required (a,b,c,d as field codes)");
  auto v = parse_list(s);
  if (v.size() != 4) throw std::invalid_argument("matrix needs four entries");
  for (long x : v)
    if (x < 0 || x >= F.q()) throw std::invalid_argument("matrix entry out of range");
  return {F.elem(v[0]), F.elem(v[1]), F.elem(v[2]), F.elem(v[3])};
}

// "re,im;re,im;..."
CVec parse_cvec(const std::string& s) {
  std::vector<cplx> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    auto c = item.find(',');
    double re = std::stod(item.substr(0, c));
    double im = c == std::string::npos ? 0.0 : std::stod(item.substr(c + 1));
    vals.push_back({re, im});
  }
  if (vals.empty()) throw std::invalid_argument("empty vector");
  CVec v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
  return v;
}

json mat_json(const GLpMat& G) { return json::array({G.a.v, G.b.v, G.c.v, G.d.v}); }

json report_json(const CyclerReport& R) {
  return {{"matrix", mat_json(R.G)}, {"type", R.type},         {"suborder", R.suborder},
          {"r", R.r},                {"is_cycler", R.is_cycler}, {"m0", R.m0}};
}

void check_odd_field(const RunConfig& c) {
  if (c.p == 2) throw std::invalid_argument("even characteristic is not supported");
}

FieldPtr make_field(const RunConfig& c) {
  check_odd_field(c);
  return field_create(c.p, c.n);
}

// Each handler fills `result` and returns the value compared against --expect.
using Handler = std::function<std::string(const RunConfig&, json&)>;

std::string field_info(const RunConfig& c, json& r) {
  auto F = field_create(c.p, c.n);
  r["p"] = F->p();
  r["n"] = F->n();
  r["q"] = F->q();
  r["modulus"] = F->modulus();
  r["primitive"] = F->theta().to_string();
  json tr = json::array();
  for (auto& x : F->elements()) tr.push_back({{"code", x.v}, {"element", x.to_string()}, {"trace", ff_trace(x)}});
  if (F->q() <= 64) r["table"] = tr;
  return std::to_string(F->q());
}

std::string mub_build(const RunConfig& c, json& r) {
  auto F = make_field(c);
  GaloisClifford C(F);
  MUBSet M = mub_standard(C);
  const int d = M.d, N = C.conductor();
  CycloNum inv_d(N, Rational(1, d));
  bool unbiased = true;
  for (int b = 0; b <= d && unbiased; ++b)
    for (int bp = b; bp <= d && unbiased; ++bp) {
      ExactMat G = M.bases[b].adjoint() * M.bases[bp];
      for (int v = 0; v < d; ++v)
        for (int w = 0; w < d; ++w) {
          if (b == bp) unbiased &= G(v, w) == CycloNum(N, v == w ? 1L : 0L);
          else unbiased &= (G(v, w) * G(v, w).conj() - inv_d).is_zero();
        }
    }
  r["d"] = d;
  r["bases"] = int(M.bases.size());
  r["conductor"] = N;
  r["exact_unbiased"] = unbiased;
  if (!unbiased) throw ExpectMismatch("exact unbiasedness failed");
  return "true";
}

std::string zauner_spectrum(const RunConfig& c, json& r) {
  auto Z = zauner(c.d);
  auto want = zauner_dims_table(c.d);
  r["d"] = c.d;
  r["dims"] = Z.dims;
  r["table_dims"] = want;
  r["matches_table"] = Z.dims == want;
  std::ostringstream os;
  os << Z.dims[0] << "," << Z.dims[1] << "," << Z.dims[2];
  return os.str();
}

OrbitContext lindep_context(const RunConfig& c, json& r) {
  OrbitContext ctx;
  if (c.sic) {
    if (c.d < 2 || c.d > 8) throw std::invalid_argument("SIC search supports 2 <= d <= 8");
    SicSearchOptions o;
    o.subspace = zauner(c.d).spaces[int(parse_zlabel(c.eigenspace))];
    o.restarts = c.restarts;
    o.threads = c.threads;
    auto R = sic_search(c.d, c.seed, o);
    if (!R.fiducial) throw std::runtime_error("no SIC fiducial found in the Zauner subspace");
    ctx = context_from_vector(*R.fiducial);
    ctx.seed = c.seed;
    r["initial_vector"] = "sic_fiducial";
  } else {
    ctx = make_context(c.d, parse_zlabel(c.eigenspace), c.seed);
    r["initial_vector"] = "generic";
  }
  r["d"] = ctx.d;
  r["eigenspace"] = to_string(ctx.label);
  r["psi"] = cvec_json(ctx.psi);
  return ctx;
}

SearchOptions search_options(const RunConfig& c) {
  SearchOptions o;
  o.rtol = c.tol;
  o.threads = c.threads;
  o.long_run = c.long_run;
  return o;
}

void write_jsonl(const std::string& path, const std::vector<DepSet>& sets, int d) {
  std::ostringstream os;
  for (auto s : sets) {
    tag_set(s, d);
    json line = {{"points", json::array()}, {"rank", s.rank}, {"z_inv", s.z_inv}, {"m_inv", s.m_inv},
                 {"stabilizer", s.stabilizer}};
    for (int p : s.points) line["points"].push_back(json::array({p / d, p % d}));
    os << line.dump() << "\n";
  }
  write_text(path, os.str());
}

std::vector<DepSet> lindep_sets(const RunConfig& c, const OrbitContext& ctx, json& r) {
  if (c.targeted) {
    r["mode"] = "targeted";
    r["partial"] = true;
    SearchOptions o = search_options(c);
    return targeted_search(ctx, o);
  }
  r["mode"] = "exhaustive";
  r["partial"] = false;
  return exhaustive_search(ctx, search_options(c));
}

void incidence_svg(const RunConfig& c, const std::vector<DepSet>& sets, int d) {
  if (c.svg.empty()) return;
  std::vector<std::vector<double>> grid(d, std::vector<double>(d, 0));
  for (auto& s : sets)
    for (int p : s.points) grid[p / d][p % d] += 1;
  write_text(c.svg, heatmap_svg(grid, "dependent sets per point, d = " + std::to_string(d)));
}

std::string lindep_search(const RunConfig& c, json& r) {
  OrbitContext ctx = lindep_context(c, r);
  if (c.d == 8 && !c.targeted) {
    long n = exhaustive_count(ctx, search_options(c));
    r["mode"] = "exhaustive";
    r["count"] = n;
    return std::to_string(n);
  }
  auto sets = lindep_sets(c, ctx, r);
  r["count"] = long(sets.size());
  auto conf = configuration(sets, c.d);
  r["sets_per_point"] = conf.per_point;
  if (!c.jsonl.empty()) write_jsonl(c.jsonl, sets, c.d);
  incidence_svg(c, sets, c.d);
  return std::to_string(sets.size());
}

std::string lindep_predict(const RunConfig& c, json& r) {
  OrbitContext ctx = lindep_context(c, r);
  auto sets = predicted_sets(ctx, c.tol);
  r["count"] = long(sets.size());
  if (!c.jsonl.empty()) write_jsonl(c.jsonl, sets, c.d);
  return std::to_string(sets.size());
}

std::string lindep_orbits(const RunConfig& c, json& r) {
  OrbitContext ctx = lindep_context(c, r);
  auto sets = lindep_sets(c, ctx, r);
  auto O = orbit_grouping(sets, c.d);
  r["sets"] = long(sets.size());
  r["orbits"] = long(O.orbits.size());
  int z = 0, m_only = 0;
  json table = json::array();
  for (size_t i = 0; i < O.orbits.size(); ++i) {
    auto& o = O.orbits[i];
    z += o.z_inv;
    m_only += o.m_inv && !o.z_inv;
    std::string rep;
    for (int p : o.representative) rep += (rep.empty() ? "" : " ") + std::to_string(p / c.d) + std::to_string(p % c.d);
    table.push_back({{"orbit", i + 1}, {"length", o.length}, {"z_inv", o.z_inv}, {"m_inv", o.m_inv},
                     {"complete", o.complete}, {"representative", rep}});
  }
  r["z_invariant"] = z;
  r["m_only"] = m_only;
  auto conf = configuration(sets, c.d);
  r["configuration"] = {{"points", conf.points}, {"per_point", conf.per_point}, {"sets", conf.sets}, {"per_set", conf.per_set}};
  r["table"] = table;
  return std::to_string(O.orbits.size());
}

std::string lindep_normals(const RunConfig& c, json& r) {
  OrbitContext ctx = lindep_context(c, r);
  auto sets = lindep_sets(c, ctx, r);
  auto N = normals_and_orthogonality(sets, ctx);
  r["sets"] = long(sets.size());
  r["normals"] = long(N.normals.size());
  r["skipped"] = N.skipped;
  r["orthogonal_pairs"] = N.orthogonal_pairs;
  r["triples"] = N.triples;
  r["triples_outside_quadruples"] = N.triples - N.triples_in_quadruples;
  r["quadruples"] = N.quadruples;
  if (N.quadruples) {
    auto O = orbit_grouping(sets, c.d);
    std::set<long> orbits;
    for (auto& q : N.quadruple_list)
      for (long k : q) orbits.insert(O.orbit_of[N.set_index[k]]);
    json a = json::array();
    for (long o : orbits) a.push_back({{"orbit", o + 1}, {"length", O.orbits[o].length}});
    r["quadruple_orbits"] = a;
  }
  if (c.d == 3) r["normals_form_complete_mub"] = forms_complete_mub(N.normals, 3);
  return std::to_string(N.quadruples);
}

std::string sic_family(const RunConfig& c, json& r) {
  auto s = sic3_family(c.theta);
  bool ok = is_sic(s, c.tol);
  long dep = dependent_subsets(s, c.tol);
  r["theta"] = r15(c.theta);
  r["is_sic"] = ok;
  r["dependent_triples"] = dep;
  json vs = json::array();
  for (auto& v : s.vectors) vs.push_back(cvec_json(v));
  r["vectors"] = vs;
  return std::to_string(dep);
}

std::string sic_verify(const RunConfig& c, json& r) {
  CVec v = c.fiducial.empty() ? sic3_family(c.theta).vectors[0] : parse_cvec(c.fiducial);
  v /= v.norm();
  bool ok = is_sic_fiducial(v, c.tol < 1e-9 ? 1e-9 : c.tol);
  FramePotential fp(int(v.size()));
  r["d"] = int(v.size());
  r["is_sic_fiducial"] = ok;
  r["objective"] = r15(fp.value(v));
  r["target"] = r15(fp.target());
  return ok ? "true" : "false";
}

std::string sic_search_cmd(const RunConfig& c, json& r) {
  SicSearchOptions o;
  o.restarts = c.restarts;
  o.threads = c.threads;
  if (c.zauner) o.subspace = zauner(c.d).spaces[0];
  auto R = sic_search(c.d, c.seed, o);
  r["d"] = c.d;
  r["restarts"] = c.restarts;
  r["zauner_restricted"] = c.zauner;
  r["found"] = bool(R.fiducial);
  r["objective"] = r15(R.objective);
  r["target"] = r15(FramePotential(c.d).target());
  r["best_restart"] = R.restart;
  if (R.fiducial) r["fiducial"] = cvec_json(*R.fiducial);
  return R.fiducial ? "true" : "false";
}

std::string sic_kt(const RunConfig& c, json& r) {
  auto K = kt_measure(projectors(sic3_family(c.theta).vectors), c.t);
  r["theta"] = r15(c.theta);
  r["t"] = r15(K.t);
  r["value"] = r15(K.value);
  r["bound"] = r15(K.bound);
  r["saturated"] = K.saturated;
  std::ostringstream os;
  os << r15(K.value);
  return os.str();
}

std::string gu_compose_cmd(const RunConfig& c, json& r) {
  auto F = make_field(c);
  GaloisClifford C(F);
  GLpMat G1 = parse_matrix(*F, c.g1), G2 = parse_matrix(*F, c.g2);
  GUnitary AB = gu_compose(gu_new(C, G1), gu_new(C, G2));
  ExactMat direct = gu_new(C, G1 * G2).Usym;
  std::string rel = AB.Usym == direct                                             ? "equal"
                    : AB.Usym == direct.scaled(CycloNum(C.conductor(), -1L)) ? "minus"
                                                                                 : "other";
  r["g1"] = mat_json(G1);
  r["g2"] = mat_json(G2);
  r["product"] = mat_json(G1 * G2);
  r["relation"] = rel;
  r["galois_exponent"] = AB.gal.exponent();
  return rel;
}

std::string gu_apply_cmd(const RunConfig& c, json& r) {
  auto F = make_field(c);
  GaloisClifford C(F);
  GUnitary U = gu_new(C, parse_matrix(*F, c.g));
  const int d = int(F->q());
  if (c.index < 0 || c.index >= d) throw std::invalid_argument("basis index out of range");
  ExactVec e(d, CycloNum(C.conductor()));
  e[c.index] = CycloNum(C.conductor(), 1L);
  ExactVec img = gu_apply(U, e);
  r["matrix"] = mat_json(U.G);
  r["delta"] = U.delta;
  r["index"] = c.index;
  r["image"] = exact_vec_json(img);
  return std::to_string(c.index);
}

std::string gu_embed_cmd(const RunConfig& c, json& r) {
  if (c.n != 1) throw std::invalid_argument("embedding is implemented for prime dimensions");
  auto F = make_field(c);
  GaloisClifford C(F);
  std::mt19937_64 rng(c.seed);
  const int N = C.conductor(), d = int(c.p);
  int ok = 0;
  for (int t = 0; t < c.samples; ++t) {
    GLpMat G;
    do {
      G = {F->elem(rng() % d), F->elem(rng() % d), F->elem(rng() % d), F->elem(rng() % d)};
    } while (!is_glp(G));
    ExactVec v(d, CycloNum(N));
    for (auto& x : v)
      for (int k = 0; k < 3; ++k) x += CycloNum::zeta(N, long(rng() % N)).scaled(Rational(long(rng() % 7) - 3, 1 + long(rng() % 3)));
    GUnitary U = gu_new(C, G);
    ok += gu_embed_roundtrip(U, v) == gu_apply(U, v);
  }
  r["samples"] = c.samples;
  r["exact_matches"] = ok;
  r["all_match"] = ok == c.samples;
  return ok == c.samples ? "true" : "false";
}

std::string cycler_classify(const RunConfig& c, json& r) {
  auto F = make_field(c);
  CyclerTools T(F);
  GLpMat G = c.g.empty() ? T.canonical().first : parse_matrix(*F, c.g);
  auto R = T.classify(G);
  r.update(report_json(R));
  return std::to_string(R.suborder);
}

std::string cycler_enumerate(const RunConfig& c, json& r) {
  auto F = make_field(c);
  CyclerTools T(F);
  auto E = enumerate_cyclers(T, c.threads, 8, c.long_run ? 2'000'000'000L : 50'000'000L);
  r["d"] = T.d();
  r["scanned"] = E.scanned;
  r["count"] = E.count;
  json s = json::array();
  for (auto& G : E.sample) s.push_back(mat_json(G));
  r["sample"] = s;
  return std::to_string(E.count);
}

GLpMat cycler_matrix(const RunConfig& c, const CyclerTools& T) {
  if (!c.g.empty()) return parse_matrix(*T.field(), c.g);
  auto [G0, exists] = T.canonical();
  if (!exists) throw std::invalid_argument("no MUB-cycler exists for even n");
  return G0;
}

std::string cycler_eigvec(const RunConfig& c, json& r) {
  CyclerTools T(make_field(c));
  auto E = cycler_eigenvector(T, cycler_matrix(c, T));
  r["matrix"] = mat_json(E.U.G);
  r["null_dim"] = E.null_dim;
  r["m0"] = E.m0;
  r["parity_ok"] = E.parity_ok;
  r["mu"] = E.mu.to_string();
  r["psi"] = exact_vec_json(E.psi);
  return std::to_string(E.null_dim);
}

std::string cycler_balanced(const RunConfig& c, json& r) {
  CyclerTools T(make_field(c));
  auto E = cycler_eigenvector(T, cycler_matrix(c, T));
  auto B = verify_balanced(E.psi, mub_standard(T.clifford()));
  r["d"] = T.d();
  r["balanced"] = B.balanced;
  r["renyi_ok"] = B.renyi_ok;
  json probs = json::array();
  for (auto& v : B.probs[0]) probs.push_back(v.to_string());
  r["basis0_probabilities"] = probs;
  return B.balanced ? "true" : "false";
}

std::string cycler_orbit(const RunConfig& c, json& r) {
  CyclerTools T(make_field(c));
  if (T.d() > 11 && !c.long_run) throw std::length_error("orbit count for d > 11 needs the long-run flag");
  auto E = cycler_eigenvector(T, cycler_matrix(c, T));
  auto O = balanced_orbit_count(T.clifford(), E.psi, c.threads, c.long_run ? 50'000'000L : 2'000'000L);
  if (!O.complete) throw std::length_error("orbit state limit reached");
  const long d = T.d();
  r["d"] = d;
  r["orbit_size"] = O.size;
  r["formula"] = d * d * d * (d - 1) / 2;
  return std::to_string(O.size);
}

std::string cycler_wigner(const RunConfig& c, json& r) {
  auto F = make_field(c);
  GaloisWH W(F);
  auto R = balanced_wigner(W);
  const int d = R.d, N = W.conductor();
  CycloNum total(N);
  for (auto& w : R.W) total += w;
  std::vector<std::vector<double>> grid(d, std::vector<double>(d));
  json table = json::array();
  double lo = 1e300, hi = -1e300;
  for (int p1 = 0; p1 < d; ++p1)
    for (int p2 = 0; p2 < d; ++p2) {
      double w = R.Wf[size_t(p1) * d + p2];
      grid[p1][p2] = w;
      lo = std::min(lo, w), hi = std::max(hi, w);
      table.push_back({{"p1", p1}, {"p2", p2}, {"w", r15(w)}, {"w_exact", R.W[size_t(p1) * d + p2].to_string()}});
    }
  r["d"] = d;
  r["sum_exact"] = total.to_string();
  r["sum_is_one"] = total == CycloNum(N, 1L);
  r["min"] = r15(lo);
  r["max"] = r15(hi);
  if (!c.svg.empty() || !c.out.empty()) {
    std::string base = !c.svg.empty() ? c.svg : c.out;
    std::string stem = base.size() > 4 && base.substr(base.size() - 4) == ".svg" ? base.substr(0, base.size() - 4) : base;
    write_text(stem + ".svg", heatmap_svg(grid, "Wigner function, d = " + std::to_string(d)));
    write_text(stem + ".csv", to_csv(json{{"table", table}}));
    r["svg"] = stem + ".svg";
    r["csv"] = stem + ".csv";
  }
  r["table"] = table;
  return r["sum_is_one"].get<bool>() ? "true" : "false";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string cmdline;
  for (int i = 0; i < argc; ++i) cmdline += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"hforge: finite-field quantum designs toolkit"};
  app.require_subcommand(1);
  std::map<CLI::App*, Handler> handlers;

  auto field_opts = [&](CLI::App* s) {
    s->add_option("--p", cfg.p, "field characteristic")->check(CLI::PositiveNumber);
    s->add_option("--n", cfg.n, "field degree")->check(CLI::PositiveNumber);
  };
  auto common = [&](CLI::App* s) {
    s->add_option("--out", cfg.out, "output path (stdout when absent)");
    s->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--expect", cfg.expect, "expected primary value; mismatch exits 3");
    s->add_option("--threads", cfg.threads, "worker threads (default HFORGE_THREADS)")->check(CLI::PositiveNumber);
    s->add_option("--seed", cfg.seed, "random seed");
    s->add_option("--tol", cfg.tol, "numerical tolerance");
    s->add_flag("--long-run", cfg.long_run, "allow runs beyond the default size guards");
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, Handler h) {
    CLI::App* s = parent->add_subcommand(name, help);
    common(s);
    handlers[s] = std::move(h);
    return s;
  };

  auto* field = app.add_subcommand("field", "finite fields");
  field->require_subcommand(1);
  field_opts(leaf(field, "info", "field tables", field_info));

  auto* mub = app.add_subcommand("mub", "mutually unbiased bases");
  mub->require_subcommand(1);
  field_opts(leaf(mub, "build", "build and verify the standard MUBs", mub_build));

  auto* zau = app.add_subcommand("zauner", "Zauner unitary");
  zau->require_subcommand(1);
  leaf(zau, "spectrum", "eigenspace dimensions", zauner_spectrum)->add_option("--d", cfg.d)->required();

  auto* lin = app.add_subcommand("lindep", "linear dependencies in WH orbits");
  lin->require_subcommand(1);
  auto lin_opts = [&](CLI::App* s) {
    s->add_option("--d", cfg.d)->required()->check(CLI::Range(2, 12));
    s->add_option("--eigenspace", cfg.eigenspace, "H1, Heta or Heta2");
    s->add_flag("--sic", cfg.sic, "start from a SIC fiducial in the chosen eigenspace");
    s->add_option("--restarts", cfg.restarts);
    s->add_option("--jsonl", cfg.jsonl, "write one dependent set per line");
    s->add_flag("--targeted", cfg.targeted, "test only Zauner- or M-invariant candidates (partial)");
    s->add_option("--svg", cfg.svg, "heatmap of sets per phase-space point");
  };
  lin_opts(leaf(lin, "search", "exhaustive search", lindep_search));
  lin_opts(leaf(lin, "predict", "sets predicted by eigenspace dimension counting", lindep_predict));
  lin_opts(leaf(lin, "orbits", "WH orbits of dependent sets", lindep_orbits));
  lin_opts(leaf(lin, "normals", "normal-vector orthogonality", lindep_normals));

  auto* sic = app.add_subcommand("sic", "SIC tools");
  sic->require_subcommand(1);
  leaf(sic, "family", "the d = 3 family", sic_family)->add_option("--theta", cfg.theta);
  auto* ver = leaf(sic, "verify", "check a fiducial", sic_verify);
  ver->add_option("--fiducial", cfg.fiducial, "re,im;re,im;...");
  ver->add_option("--theta", cfg.theta, "use the d = 3 family fiducial when no vector is given");
  auto* srch = leaf(sic, "search", "frame-potential search", sic_search_cmd);
  srch->add_option("--d", cfg.d)->required();
  srch->add_option("--restarts", cfg.restarts);
  srch->add_flag("--zauner", cfg.zauner, "restrict to the Zauner subspace");
  auto* kt = leaf(sic, "kt", "K_t for the d = 3 family", sic_kt);
  kt->add_option("--theta", cfg.theta);
  kt->add_option("--t", cfg.t);

  auto* gu = app.add_subcommand("gu", "Galois-unitaries");
  gu->require_subcommand(1);
  auto* comp = leaf(gu, "compose", "compare U_G1 U_G2 with U_G1G2", gu_compose_cmd);
  field_opts(comp);
  comp->add_option("--g1", cfg.g1)->required();
  comp->add_option("--g2", cfg.g2)->required();
  auto* app_ = leaf(gu, "apply", "image of a basis vector", gu_apply_cmd);
  field_opts(app_);
  app_->add_option("--g", cfg.g)->required();
  app_->add_option("--index", cfg.index);
  auto* emb = leaf(gu, "embed", "real-embedding simulation check", gu_embed_cmd);
  field_opts(emb);
  emb->add_option("--samples", cfg.samples);

  auto* cyc = app.add_subcommand("cycler", "MUB-cyclers");
  cyc->require_subcommand(1);
  auto cyc_opts = [&](CLI::App* s) {
    field_opts(s);
    s->add_option("--g", cfg.g, "matrix a,b,c,d as field codes (default: canonical cycler)");
  };
  cyc_opts(leaf(cyc, "classify", "type, suborder, cycler flag", cycler_classify));
  field_opts(leaf(cyc, "enumerate", "count cyclers in GL", cycler_enumerate));
  cyc_opts(leaf(cyc, "eigvec", "exact fixed vector", cycler_eigvec));
  cyc_opts(leaf(cyc, "balanced", "MUB-balancedness of the fixed vector", cycler_balanced));
  cyc_opts(leaf(cyc, "orbit", "Clifford orbit of the balanced state", cycler_orbit));
  auto* wig = leaf(cyc, "wigner", "Wigner function of the balanced state", cycler_wigner);
  field_opts(wig);
  wig->add_option("--svg", cfg.svg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* chosen = nullptr;
  for (auto& [s, h] : handlers)
    if (s->parsed()) chosen = s;
  if (!chosen) {
    std::cerr << "no command given\n";
    return 1;
  }
  cfg.command = chosen->get_parent()->get_name() + " " + chosen->get_name();

  json result;
  std::string primary;
  int code = 0;
  try {
    primary = handlers[chosen](cfg, result);
  } catch (const ExpectMismatch& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    code = 3;
  } catch (const std::length_error& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  json doc;
  doc["provenance"] = {{"command", cmdline},
                       {"subcommand", cfg.command},
                       {"seed", cfg.seed},
                       {"tolerances", {{"tol", cfg.tol}}},
                       {"threads_affect_output", false},
                       {"version", HFORGE_VERSION}};
  doc["result"] = result;
  doc["primary"] = primary;

  std::string text = cfg.format == "csv" ? to_csv(result) : doc.dump(2) + "\n";
  bool wigner_files = cfg.command == "cycler wigner";
  if (!cfg.out.empty() && !wigner_files)
    write_text(cfg.out, text);
  else
    std::cout << text;

  if (!cfg.expect.empty() && code == 0 && cfg.expect != primary) {
    std::cerr << "expect mismatch: expected " << cfg.expect << ", got " << primary << "\n";
    return 3;
  }
  return code;
}
