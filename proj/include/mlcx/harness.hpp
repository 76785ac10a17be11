// Fixtures, suite runner and reports for the acceptance criteria, the
// two-algebras experiment on the walking isomorphism, and the theory of a
// finite groupoid.
#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <set>
#include <random>
#include <string>
#include <vector>

#include "derived.hpp"
#include "enumerate.hpp"
#include "json.hpp"
#include "monad.hpp"
#include "relevance.hpp"
#include "semantics.hpp"

namespace mlcx {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---- fixtures ----

struct Fixture {
  std::string name;
  std::string gset_file, theory_file;  // relative to the fixture directory
  int level = 1;
  GlobularSet gset;
  std::vector<Equation> equations;
  int budget = 7;
  std::size_t word_bound = 256;
  bool forest = true;

  Theory theory() const { return at_level(level); }
  Theory at_level(int l) const {
    Theory T = adjoin_globular(l, gset);
    T.equations = equations;
    return T;
  }
};

namespace detail {

struct FixtureSpec {
  const char* gset;
  int budget;
  std::size_t word_bound;
};

inline const std::map<std::string, FixtureSpec>& fixture_specs() {
  static const std::map<std::string, FixtureSpec> m{
      {"W", {"cell a : 0\ncell b : 0\ncell f : 1 a b\n", 11, 256}},
      {"Wc", {"cell a : 0\ncell b : 0\ncell c : 0\ncell f : 1 a b\n", 9, 256}},
      {"P3", {"cell a : 0\ncell b : 0\ncell c : 0\ncell f : 1 a b\ncell g : 1 b c\n", 11, 256}},
      {"discrete2", {"cell u : 0\ncell v : 0\n", 11, 256}},
      {"C2", {"cell a : 0\ncell b : 0\ncell f : 1 a b\ncell g : 1 a b\ncell al : 2 f g\n", 9, 256}},
      {"iso", {"cell a : 0\ncell b : 0\ncell f : 1 a b\ncell g : 1 b a\n", 9, 6}},
      {"loop", {"cell a : 0\ncell e : 1 a a\n", 7, 256}},
      {"loop2", {"cell a : 0\ncell b : 0\ncell f : 1 a b\ncell l : 2 f f\n", 7, 256}},
      {"path_isolated", {"cell a : 0\ncell b : 0\ncell c : 0\ncell d : 0\ncell f : 1 a b\ncell g : 1 b c\n", 9, 256}},
      {"point", {"cell p : 0\n", 7, 256}},
  };
  return m;
}

// f and g mutually inverse
inline std::vector<Equation> iso_equations() {
  Expr G = base(), a = basic("a"), b = basic("b"), f = basic("f"), g = basic("g");
  return {{compose(G, a, b, a, f, g), refl(a), id_type(G, a, a)}, {compose(G, b, a, b, g, f), refl(b), id_type(G, b, b)}};
}

}  // namespace detail

inline std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (auto& [k, v] : detail::fixture_specs()) out.push_back(k);
  return out;
}

inline std::string fixture_gset_text(const std::string& name) {
  auto& m = detail::fixture_specs();
  auto it = m.find(name);
  if (it == m.end()) throw ConfigError("unknown fixture '" + name + "'");
  return std::string("gset v1\n") + it->second.gset;
}

inline Fixture fixture(const std::string& name) {
  auto& m = detail::fixture_specs();
  auto it = m.find(name);
  if (it == m.end()) throw ConfigError("unknown fixture '" + name + "'");
  Fixture f;
  f.name = name;
  f.gset_file = name + ".gset";
  f.theory_file = name + ".theory";
  f.gset = validate_globular(parse_globular_text(fixture_gset_text(name)));
  if (name == "iso") f.equations = detail::iso_equations();
  f.budget = it->second.budget;
  f.word_bound = it->second.word_bound;
  f.forest = is_forest(f.gset);
  return f;
}

inline std::string fixture_theory_text(const std::string& name) {
  Fixture f = fixture(name);
  std::string s = "theory v1 flavor=" + std::to_string(f.level) + "\ngset " + f.gset_file + "\n";
  for (auto& e : f.equations) s += "eq " + print(e.lhs) + " = " + print(e.rhs) + " : " + print(e.type) + "\n";
  return s;
}

// ---- reports ----

struct SuiteConfig {
  int size = 0;  // 0 selects the suite default
  int jobs = 1;
  int samples = 100;
  unsigned seed = 1;
  std::string fixture_dir = "fixtures";

  nlohmann::json to_json() const {
    return {{"size", size}, {"jobs", jobs}, {"samples", samples}, {"seed", seed}};
  }
};

struct Failure {
  std::string term, type, detail, reproduce;
};

struct SuiteReport {
  std::string suite, fixture;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, long long> counts;
  std::vector<Failure> failures;
  std::vector<std::string> notes;
  double elapsed_ms = 0;

  bool pass() const { return failures.empty(); }

  void fail(Failure f) { failures.push_back(std::move(f)); }
  void count(const std::string& k, long long n = 1) { counts[k] += n; }

  // associative; fixture names and notes are concatenated in argument order
  void merge(const SuiteReport& o) {
    if (fixture.empty()) fixture = o.fixture;
    else if (!o.fixture.empty()) fixture += "," + o.fixture;
    for (auto& [k, v] : o.counts) counts[k] += v;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
    elapsed_ms += o.elapsed_ms;
  }

  nlohmann::json to_json(bool timing = true) const {
    nlohmann::json j;
    j["suite"] = suite;
    j["fixture"] = fixture;
    j["config"] = config;
    j["counts"] = counts;
    j["failures"] = nlohmann::json::array();
    for (auto& f : failures)
      j["failures"].push_back({{"term", f.term}, {"type", f.type}, {"detail", f.detail}, {"reproduce", f.reproduce}});
    j["notes"] = notes;
    j["verdict"] = pass() ? "pass" : "fail";
    if (timing) j["elapsed_ms"] = elapsed_ms;
    return j;
  }

  std::string summary() const {
    std::string s = suite + " " + (pass() ? "PASS" : "FAIL") + " [" + fixture + "]";
    for (auto& [k, v] : counts) s += " " + k + "=" + std::to_string(v);
    if (!pass()) s += " failures=" + std::to_string(failures.size());
    return s;
  }
};

// ---- sharded enumeration ----

// Size strata are dealt round-robin to workers, each with its own enumerator.
inline std::vector<Expr> enumerate_sharded(const Theory& T, const Expr& A, int size_bound, int jobs) {
  jobs = std::max(1, jobs);
  std::vector<std::future<std::vector<std::vector<Expr>>>> futs;
  for (int j = 0; j < jobs; ++j)
    futs.push_back(std::async(std::launch::async, [&, j] {
      Enumerator en(T);
      std::vector<std::vector<Expr>> strata(static_cast<std::size_t>(size_bound) + 1);
      for (int s = 1 + j; s <= size_bound; s += jobs) strata[static_cast<std::size_t>(s)] = en.exactly({}, A, s);
      return strata;
    }));
  std::vector<std::vector<Expr>> all(static_cast<std::size_t>(std::max(size_bound, 0)) + 1);
  for (int j = 0; j < jobs; ++j) {
    auto part = futs[static_cast<std::size_t>(j)].get();
    for (std::size_t s = 0; s < part.size(); ++s)
      if (!part[s].empty()) all[s] = std::move(part[s]);
  }
  std::vector<Expr> out;
  for (auto& v : all) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Runs f on contiguous chunks of items, each worker with its own state from
// init(), and merges the partial reports in chunk order.
template <class Init, class F>
SuiteReport parallel_chunks(std::size_t n, int jobs, Init init, F f) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(n, 1))));
  std::size_t chunk = (n + static_cast<std::size_t>(jobs) - 1) / static_cast<std::size_t>(jobs);
  std::vector<std::future<SuiteReport>> futs;
  for (int j = 0; j < jobs; ++j) {
    std::size_t lo = static_cast<std::size_t>(j) * chunk, hi = std::min(n, lo + chunk);
    futs.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, [=, &init, &f] {
      SuiteReport r;
      if (lo >= hi) return r;
      auto state = init();
      for (std::size_t i = lo; i < hi; ++i) f(*state, i, r);
      return r;
    }));
  }
  SuiteReport out;
  for (auto& fu : futs) {
    SuiteReport r = fu.get();
    for (auto& [k, v] : r.counts) out.counts[k] += v;
    out.failures.insert(out.failures.end(), r.failures.begin(), r.failures.end());
  }
  return out;
}

// ---- the theory of a finite groupoid ----

struct GroupoidTheory {
  Theory theory;
  std::vector<std::string> object_cell;  // per object
  std::vector<std::string> arrow_cell;   // per arrow; empty for identities
};

// Vertices are objects, edges the non-identity arrows, with one equation
// <g o f> = <f>.<g> per composable pair of non-identity arrows.
inline GroupoidTheory groupoid_to_theory(const FiniteGroupoid& g) {
  if (auto why = g.check_laws(); !why.empty()) throw std::invalid_argument("not a groupoid: " + why);
  GroupoidTheory out;
  std::vector<CellDecl> raw;
  for (std::size_t o = 0; o < g.objects.size(); ++o) {
    out.object_cell.push_back("o" + std::to_string(o));
    raw.push_back({out.object_cell.back(), 0, "", ""});
  }
  std::set<std::size_t> ids(g.identity.begin(), g.identity.end());
  for (std::size_t f = 0; f < g.arrows.size(); ++f) {
    if (ids.count(f)) {
      out.arrow_cell.emplace_back();
      continue;
    }
    out.arrow_cell.push_back("e" + std::to_string(f));
    raw.push_back({out.arrow_cell.back(), 1, out.object_cell[g.arrows[f].dom], out.object_cell[g.arrows[f].cod]});
  }
  out.theory = adjoin_globular(1, validate_globular(raw));
  Expr G = base();
  auto term = [&](std::size_t f) {
    return ids.count(f) ? refl(basic(out.object_cell[g.arrows[f].dom])) : basic(out.arrow_cell[f]);
  };
  for (std::size_t h = 0; h < g.arrows.size(); ++h)
    for (std::size_t f = 0; f < g.arrows.size(); ++f) {
      long c = g.comp[h][f];
      if (c < 0 || ids.count(h) || ids.count(f)) continue;
      Expr x = basic(out.object_cell[g.arrows[f].dom]), y = basic(out.object_cell[g.arrows[f].cod]),
           z = basic(out.object_cell[g.arrows[h].cod]);
      out.theory.equations.push_back(
          {term(static_cast<std::size_t>(c)), compose(G, x, y, z, term(f), term(h)), id_type(G, x, z)});
    }
  validate_equations(out.theory);
  return out;
}

// The unit G -> quotient model of its theory, checked to be an equivalence.
// Supported when the quotient's vertex groups are trivial (g codiscrete on
// each component); otherwise returns a failed report with a reason.
inline EquivalenceReport groupoid_unit_check(const FiniteGroupoid& g, std::string* why = nullptr) {
  GroupoidTheory gt = groupoid_to_theory(g);
  Model m(gt.theory);
  const QuotientGroupoid& q = m.groupoid();
  if (!q.finite()) {
    // only quotients whose vertex groups collapse are decided
    if (why) *why = "quotient has nontrivial vertex groups (unsupported)";
    return {};
  }
  FiniteGroupoid H = to_finite_groupoid(q);
  std::map<std::string, std::size_t> obj;
  for (std::size_t i = 0; i < H.objects.size(); ++i) obj[H.objects[i]] = i;
  FiniteFunctor F{&g, &H, {}, {}};
  for (auto& oc : gt.object_cell) F.on_objects.push_back(obj.at(q.vertex_class(oc)));
  for (std::size_t f = 0; f < g.arrows.size(); ++f) {
    std::size_t d = F.on_objects[g.arrows[f].dom], c = F.on_objects[g.arrows[f].cod];
    auto hom = H.hom(d, c);
    if (hom.size() != 1) throw std::logic_error("quotient hom-set is not a singleton");
    // the interpretation of the generator must be that arrow
    GroupoidArrow a = gt.arrow_cell[f].empty() ? identity_arrow(gt.object_cell[g.arrows[f].dom])
                                               : m.eval(basic(gt.arrow_cell[f]))->arrow;
    if (word_string(q.normalize(a).word) != H.arrows[hom[0]].name) {
      if (why) *why = "generator " + std::to_string(f) + " is not sent to its class";
      return {};
    }
    F.on_arrows.push_back(hom[0]);
  }
  try {
    return check_equivalence(F);
  } catch (const FunctorError& e) {
    if (why) *why = e.what();
    return {};
  }
}

// The walking isomorphism as a finite groupoid.
inline FiniteGroupoid walking_iso_groupoid() {
  FiniteGroupoid g;
  g.objects = {"a", "b"};
  g.arrows = {{0, 0, "1a"}, {1, 1, "1b"}, {0, 1, "f"}, {1, 0, "g"}};
  // comp[h][f] = h o f
  g.comp = {{0, -1, -1, 3}, {-1, 1, 2, -1}, {2, -1, -1, 1}, {-1, 3, 0, -1}};
  g.identity = {0, 1};
  g.inverse = {0, 1, 3, 2};
  return g;
}

// ---- two algebras on the walking isomorphism ----

struct TwoAlgebras {
  Theory T;
  Checker k;
  FreeMonad monad;

  TwoAlgebras() : T(fixture("iso").theory()), k(T), monad({fixture("iso").gset}) {}

  bool derivably(const Expr& v, const std::string& x) { return alpha_equal(k.conv_normal(v), basic(x)); }
  std::string gamma0(const Expr& v) { return derivably(v, "a") ? "a" : "b"; }
  std::string delta0(const Expr& v) { return derivably(v, "b") ? "b" : "a"; }

  // the walking iso has exactly one arrow between any two vertices
  static std::string arrow_between(const std::string& x, const std::string& y) {
    if (x == y) return degenerate_of(x);
    return x == "a" ? "f" : "g";
  }
  std::string act(const TCell& c, bool gamma) {
    auto v = [&](const Expr& e) { return gamma ? gamma0(e) : delta0(e); };
    if (c.dim == 0) return v(c.top());
    if (c.dim == 1) return arrow_between(v(c.side(0, 0)), v(c.side(0, 1)));
    throw SemanticUnsupported("action fragment covers dimensions 0 and 1");
  }
};

inline SuiteReport two_algebras_experiment(const SuiteConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport r;
  r.suite = "A10";
  r.fixture = "iso";
  r.config = cfg.to_json();
  TwoAlgebras ex;
  Expr G = base(), a = basic("a"), b = basic("b"), f = basic("f");
  auto expect = [&](bool ok, const std::string& what, const Expr& t) {
    r.count("checks");
    if (!ok) r.fail({print(t), "G", what, ""});
  };
  Expr dop = doppelganger(a, G, G, a, b, f).subject;  // a<f>
  expect(ex.gamma0(a) == "a", "gamma(<a>) = a", a);
  expect(ex.gamma0(dop) == "b", "gamma(a<f>) = b", dop);
  expect(ex.delta0(dop) == "a", "delta(a<f>) = a", dop);
  // discriminating cells among the enumerated dimension-0 cells
  int budget = cfg.size > 0 ? cfg.size : 7;
  auto fr = glob_of_type(ex.T, G, budget, 0);
  // 1-cells from a smaller fragment; pairs grow quadratically in dim-0 cells
  auto fr1 = glob_of_type(ex.T, G, std::min(budget, 5), 1);
  if (fr1.cells.size() > 1) fr.cells.push_back(fr1.cells[1]);
  TCell witness_cell;
  bool found = false;
  for (auto& c : fr.cells[0]) {
    if (c.top()->kind != Kind::J) continue;
    r.count("doppelganger_cells");
    if (ex.act(c, true) != ex.act(c, false)) {
      r.count("disagreeing_cells");
      if (!found) witness_cell = c;
      found = true;
    }
  }
  if (!found) r.fail({"", "G", "gamma and delta agree on every enumerated doppelganger", ""});
  if (found) {
    // identity cell map k: k(gamma(c)) against delta(T1(k)(c))
    TCell kc = map_cells([](const std::string& n) { return n; }, witness_cell);
    std::string lhs = ex.act(witness_cell, true), rhs = ex.act(kc, false);
    r.notes.push_back("cell " + witness_cell.name() + ": k(gamma) = " + lhs + ", delta(T1 k) = " + rhs);
    expect(lhs != rhs, "identity map satisfies the homomorphism equation", witness_cell.top());
  }
  // gamma against itself: unit and multiplication laws on sampled cells
  // 50 sampled cells, split evenly between dimensions 0 and 1
  std::vector<TCell> pool;
  std::mt19937 rng(cfg.seed);
  for (std::size_t d = 0; d < fr.cells.size() && d < 2; ++d) {
    auto layer = fr.cells[d];
    std::shuffle(layer.begin(), layer.end(), rng);
    std::size_t want = d == 0 ? 25 : 50 - pool.size();
    layer.resize(std::min(layer.size(), want));
    pool.insert(pool.end(), layer.begin(), layer.end());
  }
  int samples = static_cast<int>(pool.size());
  for (auto& v : ex.T.gset->cells()) {
    TCell e = ex.monad.eta(v.name);
    expect(ex.act(e, true) == v.name, "gamma o eta = id at " + v.name, e.top());
  }
  for (int i = 0; i < samples; ++i) {
    const TCell& c = ex.monad.remember(pool[static_cast<std::size_t>(i)]);
    r.count("sampled_cells");
    r.count(c.dim == 0 ? "sampled_dim0" : "sampled_dim1");
    for (const TCell& C : {ex.monad.eta(c), ex.monad.T_eta(c)}) {
      std::string via_mu = ex.act(ex.monad.mu(C), true);
      TCell tg = map_cells([&](const std::string& n) { return ex.act(ex.monad.lookup(n), true); }, C);
      expect(via_mu == ex.act(tg, true), "gamma o mu = gamma o T1(gamma)", c.top());
    }
    // k = id is a homomorphism from gamma to itself
    expect(ex.act(c, true) == ex.act(map_cells([](const std::string& n) { return n; }, c), true),
           "identity is a gamma-homomorphism", c.top());
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---- suites ----

namespace detail {

inline std::string reproduce_canon(const Fixture& f, const SuiteConfig& cfg, const Expr& t, const Expr& A) {
  return "mlcx canon " + cfg.fixture_dir + "/" + f.theory_file + " '" + print(t) + " : " + print(A) + "'";
}
inline std::string reproduce_interp(const Fixture& f, const SuiteConfig& cfg, const Expr& t) {
  return "mlcx interp " + cfg.fixture_dir + "/" + f.theory_file + " '" + print(t) + "'";
}

inline void canon_batch(SuiteReport& r, const Fixture& fx, const SuiteConfig& cfg, const Theory& T,
                        const std::vector<Expr>& terms, const Expr& A, const std::function<std::string(Canonicalizer&, const Expr&, const CanonicalForm&)>& judge) {
  auto init = [&] { return std::make_unique<Canonicalizer>(T); };
  SuiteReport part = parallel_chunks(terms.size(), cfg.jobs, init, [&](Canonicalizer& cz, std::size_t i, SuiteReport& out) {
    const Expr& t = terms[i];
    out.count("enumerated");
    try {
      CanonicalForm c = cz.canonicalize(t, A);
      out.count("checked");
      if (!check_term(T, {}, c.witness, id_type(A, t, c.canonical)).accepted) {
        out.fail({print(t), print(A), "witness rejected", reproduce_canon(fx, cfg, t, A)});
        return;
      }
      std::string why = judge(cz, t, c);
      if (!why.empty()) {
        out.fail({print(t), print(A), why, reproduce_canon(fx, cfg, t, A)});
        return;
      }
      out.count("canonicalized");
    } catch (const std::exception& e) {
      out.fail({print(t), print(A), e.what(), reproduce_canon(fx, cfg, t, A)});
    }
  });
  for (auto& [k, v] : part.counts) r.counts[k] += v;
  r.failures.insert(r.failures.end(), part.failures.begin(), part.failures.end());
}

inline SuiteReport a1(const Fixture& fx, const SuiteConfig& cfg) {
  SuiteReport r;
  Theory T = fx.theory();
  int size = cfg.size > 0 ? cfg.size : 11;
  auto terms = enumerate_sharded(T, base(), size, cfg.jobs);
  canon_batch(r, fx, cfg, T, terms, base(), [](Canonicalizer&, const Expr&, const CanonicalForm& c) -> std::string {
    if (c.kind != CanonKind::Basic || c.canonical->kind != Kind::Basic) return "canonical form is not a basic term";
    return {};
  });
  return r;
}

inline std::vector<std::pair<std::string, std::string>> edge_endpoints(const GlobularSet& g) {
  std::set<std::pair<std::string, std::string>> s;
  for (auto& e : g.of_dim(1)) s.insert({g.src(e), g.tgt(e)});
  return {s.begin(), s.end()};
}

inline SuiteReport a2(const Fixture& fx, const SuiteConfig& cfg) {
  SuiteReport r;
  Theory T = fx.theory();
  int size = cfg.size > 0 ? cfg.size : 12;
  for (auto& [x, y] : edge_endpoints(fx.gset)) {
    Expr A = id_type(base(), basic(x), basic(y));
    auto terms = enumerate_sharded(T, A, size, cfg.jobs);
    canon_batch(r, fx, cfg, T, terms, A, [](Canonicalizer& cz, const Expr& t, const CanonicalForm& c) -> std::string {
      if (!is_formal_composite(c.canonical)) return "canonical form is not a formal composite";
      const Model& m = cz.model();
      GroupoidArrow u = m.eval(t)->arrow, v = m.eval(c.canonical)->arrow;
      if (!(u == v)) return "interpretations differ: " + arrow_string(u) + " vs " + arrow_string(v);
      return {};
    });
  }
  return r;
}

inline SuiteReport a3(const Fixture& fx, const SuiteConfig& cfg) {
  SuiteReport r;
  int budget = cfg.size > 0 ? cfg.size : 5;
  Theory T = fx.theory();
  auto fr = glob_of_type(T, base(), budget, 1);
  FreeMonad m({fx.gset});
  std::vector<TCell> t1, t2;
  for (auto& layer : fr.cells)
    for (auto& c : layer) t1.push_back(m.remember(c));
  auto law = [&](bool ok, const char* what, const TCell& c) {
    r.count("law_checks");
    if (!ok) r.fail({c.name(), "", what, ""});
  };
  for (auto& c : t1) {
    r.count("cells_T");
    law(m.left_unit(c), "mu o eta_T = id", c);
    law(m.right_unit(c), "mu o T(eta) = id", c);
    t2.push_back(m.eta(c));
    t2.push_back(m.T_eta(c));
  }
  if (!t1.empty()) {
    auto f2 = glob_of_type(adjoin_globular(T.level, fr.to_globular()), base(), std::min(budget, 2), 1);
    for (auto& layer : f2.cells)
      for (auto& c : layer) t2.push_back(m.remember(c));
  }
  for (auto& c : t2) {
    r.count("cells_T2");
    law(m.left_unit(c), "mu o eta_T = id", c);
    law(m.right_unit(c), "mu o T(eta) = id", c);
    for (const TCell& c3 : {m.eta(c), m.T_eta(c), m.TT_eta(c)}) {
      r.count("cells_T3");
      law(m.associative(c3), "mu o mu_T = mu o T(mu)", c3);
    }
  }
  return r;
}

inline SuiteReport a4(const Fixture& fx, const SuiteConfig& cfg) {
  SuiteReport r;
  Theory T = fx.theory();
  int size = cfg.size > 0 ? cfg.size : 9;
  Model m(T, true, fx.word_bound);
  Checker k(T);
  Expr G = base();
  auto sound = [&](const Expr& t, const SemEnv& env, const Context& ctx) {
    r.count("interpreted");
    try {
      SVal v = m.eval(t, env);
      SVal n = m.eval(k.normalize(t), env);
      if (!m.same(v, n)) r.fail({print(t), "", "interpretation changes under normalisation", reproduce_interp(fx, cfg, t)});
    } catch (const std::exception& e) {
      r.fail({print(t), "", e.what(), ctx.size() ? "" : reproduce_interp(fx, cfg, t)});
    }
  };
  for (auto& t : enumerate_closed_terms(T, G, size)) sound(t, {}, {});
  auto vs = fx.gset.of_dim(0);
  std::map<std::pair<std::string, std::string>, std::vector<Expr>> pool;
  for (auto& x : vs)
    for (auto& y : vs) {
      auto ts = enumerate_closed_terms(T, id_type(G, basic(x), basic(y)), size);
      for (auto& t : ts) sound(t, {}, {});
      pool[{x, y}] = ts;
    }
  // open judgements over an edge variable
  Context ctx = Context{}.extend("x", G).extend("y", G).extend("p", id_type(G, var("x"), var("y")));
  std::mt19937 rng(cfg.seed);
  std::vector<SemEnv> envs;
  for (int i = 0; i < 5; ++i)
    if (auto e = m.sample_env(ctx, rng)) envs.push_back(*e);
  {
    Enumerator en(T);
    for (auto& t : en.up_to(ctx, id_type(G, var("x"), var("y")), std::min(size, 11)))
      for (auto& env : envs) sound(t, env, ctx);
  }
  // functoriality on composable pairs
  for (auto& x : vs)
    for (auto& y : vs)
      for (auto& p : pool[{x, y}]) {
        GroupoidArrow pa;
        try {
          pa = m.eval(p)->arrow;
          r.count("inverse_checks");
          if (!m.same(m.eval(inverse(G, basic(x), basic(y), p)), sem_arrow(inverse_arrow(pa))))
            r.fail({print(p), "", "[[p^-1]] != [[p]]^-1", ""});
        } catch (const std::exception& e) {
          r.fail({print(p), "", e.what(), ""});
          continue;
        }
        for (auto& z : vs)
          for (auto& q : pool[{y, z}]) {
            r.count("composition_checks");
            try {
              GroupoidArrow qa = m.eval(q)->arrow;
              Expr pq = compose(G, basic(x), basic(y), basic(z), p, q);
              if (!m.same(m.eval(pq), sem_arrow(compose_arrows(m.graph(), qa, pa))))
                r.fail({print(pq), "", "[[q.p]] != [[q]] o [[p]]", ""});
            } catch (const std::exception& e) {
              r.fail({print(q), "", e.what(), ""});
            }
          }
      }
  return r;
}

inline SuiteReport a5(const Fixture& fx, const SuiteConfig&) {
  SuiteReport r;
  Theory T = fx.theory();
  Expr G = base(), a = basic("a"), b = basic("b"), c = basic("c"), f = basic("f");
  auto [sl, sr] = sharp(G, a, b, f);
  std::vector<std::pair<std::string, WitnessedTerm>> ws{
      {"c<f> ~ c", doppelganger(c, G, G, a, b, f)}, {"f# ~ a", sl}, {"f# ~ b", sr}, {"f_flat ~ f", flat(G, a, b, f)}};
  for (auto& [name, w] : ws) {
    r.count("witnesses");
    auto chk = check_term(T, {}, w.witness, w.witness_type);
    if (chk.accepted) r.count("accepted");
    else r.fail({print(w.subject), print(w.type), name + ": " + chk.message, ""});
  }
  return r;
}

inline SuiteReport a6(const SuiteConfig&) {
  SuiteReport r;
  r.fixture = "loop,loop2";
  Fixture l0 = fixture("loop"), l1 = fixture("loop2");
  Expr G = base(), a = basic("a");
  Expr F = id_type(G, a, basic("b"));
  struct Inst {
    std::string what;
    CheckResult res;
    bool expect;
  };
  std::vector<Inst> inst{
      {"OUP_0 on loop e", oup_check(l0.at_level(0), G, a, basic("e")), true},
      {"UIP_1 e = r(a) in T0", uip_equation(l0.at_level(0), id_type(G, a, a), basic("e"), refl(a)), true},
      {"OUP_1 on 2-loop l", oup_check(l1.at_level(1), F, basic("f"), basic("l")), true},
      {"UIP_2 l = r(f) in T1", uip_equation(l1.at_level(1), id_type(F, basic("f"), basic("f")), basic("l"), refl(basic("f"))), true},
      // controls: one level up the same equalities are not definitional
      {"control: UIP_1 fails in T1", uip_equation(l0.at_level(1), id_type(G, a, a), basic("e"), refl(a)), false},
      {"control: UIP_2 fails in T2", uip_equation(l1.at_level(2), id_type(F, basic("f"), basic("f")), basic("l"), refl(basic("f"))), false},
  };
  for (auto& i : inst) {
    r.count(i.expect ? "instances" : "controls");
    if (i.res.accepted != i.expect) r.fail({"", "", i.what + (i.res.accepted ? ": accepted" : ": " + i.res.message), ""});
  }
  return r;
}

// Empty when [[w]] relates [[l]] to [[r]] for w : Id(A, l, r): an arrow
// between their objects over the base, equality elsewhere (discrete homs).
// Sets *endpoint_only when [[w]] itself is outside the interpreter and only
// the endpoints could be compared.
inline std::string witness_inconsistency(const Theory& T, const Model& m, const Expr& w, const Expr& ty,
                                         bool* endpoint_only = nullptr) {
  SVal l = m.eval(ty->kids[1]), r = m.eval(ty->kids[2]);
  if (ty->kids[0]->kind == Kind::Base && m.mode() == ModelMode::Groupoid) {
    SVal v;
    try {
      try {
        v = m.eval(w);
      } catch (const SemanticUnsupported&) {
        v = m.eval(normalize(T, {}, w));
      }
    } catch (const SemanticUnsupported&) {
      if (endpoint_only) *endpoint_only = true;
      return m.inhabited(ty) ? std::string() : "endpoints " + m.show(l) + " and " + m.show(r) + " are not connected";
    }
    if (v->tag != SemTag::Arrow) return "witness does not interpret as an arrow";
    if (m.object_of(v->arrow.dom) != m.object_of(l->vertex) || m.object_of(v->arrow.cod) != m.object_of(r->vertex))
      return "witness arrow " + arrow_string(v->arrow) + " does not join " + m.show(l) + " and " + m.show(r);
    return {};
  }
  return m.same(l, r) ? std::string() : "endpoints " + m.show(l) + " and " + m.show(r) + " differ";
}

inline SuiteReport a7(const Fixture& fx, const SuiteConfig& cfg) {
  SuiteReport r;
  Theory T = fx.theory();
  Model m(T, true, fx.word_bound);
  int size = cfg.size > 0 ? cfg.size : 11;
  std::vector<Expr> js;
  Enumerator en(T);
  std::vector<Expr> types{base()};
  for (auto& [x, y] : edge_endpoints(fx.gset)) types.push_back(id_type(base(), basic(x), basic(y)));
  for (auto& A : types)
    for (auto& t : en.up_to({}, A, size))
      if (t->kind == Kind::J) js.push_back(t);
  r.count("j_terms", static_cast<long long>(js.size()));
  std::mt19937 rng(cfg.seed);
  std::shuffle(js.begin(), js.end(), rng);
  if (static_cast<int>(js.size()) > cfg.samples) js.resize(static_cast<std::size_t>(cfg.samples));
  for (auto& j : js) {
    r.count("sampled");
    try {
      Decomposition d = decompose_j(j);
      bool ok = true;
      for (auto [w, ty] : {std::pair{d.left, d.left_type}, std::pair{d.right, d.right_type}}) {
        auto chk = check_term(T, {}, w, ty);
        if (!chk.accepted) {
          r.fail({print(j), "", "decomposition witness rejected: " + chk.message, ""});
          ok = false;
          continue;
        }
        // the witness interprets as a morphism between its endpoints, one of which is [[J]]
        bool endpoint_only = false;
        std::string why = witness_inconsistency(T, m, w, ty, &endpoint_only);
        r.count(endpoint_only ? "witnesses_endpoint_checked" : "witnesses_interpreted");
        if (why.empty() && !alpha_equal(ty->kids[1], j) && !alpha_equal(ty->kids[2], j)) why = "witness type does not mention the J-term";
        if (!why.empty()) {
          r.fail({print(j), print(ty), why, ""});
          ok = false;
        }
      }
      if (ok) r.count("consistent");
    } catch (const std::exception& e) {
      r.fail({print(j), "", e.what(), ""});
    }
  }
  if (r.counts["sampled"] < cfg.samples) r.notes.push_back(fx.name + ": fewer J-terms than requested samples");
  return r;
}

inline SuiteReport a8(const Fixture& fx, const SuiteConfig& cfg) {
  SuiteReport r;
  Theory T0 = fx.at_level(0);
  int size = cfg.size > 0 ? cfg.size : 7;
  auto terms = enumerate_closed_terms(T0, base(), size);
  Canonicalizer cz(T0);
  std::size_t expected = pi0(fx.gset).size();
  r.count("terms", static_cast<long long>(terms.size()));
  r.count("components", static_cast<long long>(expected));
  try {
    std::size_t got = canonical_class_count(cz, terms);
    r.count("canonical_classes", static_cast<long long>(got));
    if (got != expected)
      r.fail({"", "G", "canonical classes " + std::to_string(got) + " != components " + std::to_string(expected), ""});
  } catch (const std::exception& e) {
    r.fail({"", "G", e.what(), ""});
  }
  return r;
}

inline SuiteReport a9(const Fixture& fx, const SuiteConfig& cfg) {
  SuiteReport r;
  Theory T = fx.theory();
  int size = cfg.size > 0 ? cfg.size : 9;
  auto terms = enumerate_sharded(T, nat(), size, cfg.jobs);
  canon_batch(r, fx, cfg, T, terms, nat(), [](Canonicalizer&, const Expr&, const CanonicalForm& c) -> std::string {
    Expr n = c.canonical;
    while (n->kind == Kind::Succ) n = n->kids[0];
    if (n->kind != Kind::Zero) return "canonical form is not a numeral";
    return {};
  });
  // rec(S^k(0), c, g) against the k-fold expansion
  Context ctx = Context{}.extend("c", nat()).extend("h", parse_expression("Pi m:N. Pi n:N. N"));
  Checker k(T);
  for (int n = 0; n <= 4; ++n) {
    Expr g = app(app(var("h"), var("x")), var("y"));
    Expr e = rec(numeral(n), var("c"), "x", "y", g);
    Expr expect = var("c");
    for (int i = 0; i < n; ++i) expect = app(app(var("h"), numeral(i)), expect);
    r.count("rec_checks");
    if (!check_term(T, ctx, e, nat()).accepted || !alpha_equal(k.normalize(e), expect))
      r.fail({print(e), "N", "does not normalise to " + print(expect), ""});
    Expr closed = rec(numeral(n), zero(), "x", "y", succ(succ(var("y"))));
    r.count("rec_checks");
    if (!alpha_equal(k.normalize(closed), numeral(2 * n)))
      r.fail({print(closed), "N", "does not normalise to " + std::to_string(2 * n), ""});
  }
  return r;
}

inline std::vector<DeltaContext> test_delta_contexts(const Expr& p) {
  std::vector<DeltaContext> out;
  auto P = [](const char* s) { return parse_expression(s); };
  DeltaContext d;
  d.A = base();
  d.entries = {{"v1", P("Id(G, x0, x1)")}, {"v2", P("Pi s:Id(G, x1, x0). Id(G, x0, x0)")}, {"v3", P("Id(Id(G, x0, x1), v1, z)")}};
  out.push_back(d);
  DeltaContext n;
  n.A = base();
  n.entries = {{"v1", nat()}, {"v2", P("Id(N, v1, v1)")}, {"v3", P("Id(G, x1, x0)")}};
  out.push_back(n);
  for (EdgeFamily k : all_edge_families()) out.push_back(EdgeFamilyCase{k, base(), p, nat()}.delta({}));
  return out;
}

inline SuiteReport a11(const Fixture& fx, const SuiteConfig&) {
  SuiteReport r;
  Theory T = fx.theory();
  Expr p = basic(fx.gset.of_dim(0).front());
  for (auto& d : test_delta_contexts(p))
    for (Chi chi : {Chi::Identity, Chi::Swap, Chi::Const0, Chi::Const1}) {
      ContextMorphisms m(d, chi);
      for (std::size_t k = 1; k <= d.size(); ++k) {
        Context rc = Context{}.extend("x", base());
        std::vector<Expr> rv;
        for (std::size_t j = 1; j <= k; ++j) {
          rc = rc.extend("v" + std::to_string(j), d.B(j, var("x"), var("x"), refl(var("x")), rv));
          rv.push_back(var("v" + std::to_string(j)));
        }
        Expr x = var("x");
        Expr ty = d.B(k, x, x, refl(x), rv);
        for (bool shrink : {true, false}) {
          Expr e = shrink ? m.shrink(k, x, x, refl(x), rv) : m.expand(k, x, x, refl(x), rv);
          r.count("instances");
          if (!def_equal(T, rc, e, rv.back(), ty))
            r.fail({print(e), print(ty), std::string(shrink ? "shrink" : "expand") + "_" + std::to_string(k) + " under " + chi_name(chi) + " is not its argument", ""});
        }
      }
    }
  return r;
}

inline SuiteReport a12(const Fixture& fx, const SuiteConfig&) {
  SuiteReport r;
  Theory T = fx.theory();
  Model m(T);
  Expr G = base(), a = basic("a"), b = basic("b"), cc = basic("c"), f = basic("f"), g = basic("g");
  Expr gf = compose(G, a, b, cc, f, g);
  for (EdgeFamily k : all_edge_families()) {
    EdgeFamilyCase c{k, G, cc, nat()};
    Expr tau;
    switch (k) {
      case EdgeFamily::X0X1: tau = f; break;
      case EdgeFamily::X0P: tau = gf; break;
      case EdgeFamily::PX0: tau = inverse(G, a, cc, gf); break;
      case EdgeFamily::X1P: tau = g; break;
      case EdgeFamily::PX1: tau = inverse(G, b, cc, g); break;
      case EdgeFamily::X1X0: tau = inverse(G, a, b, f); break;
      case EdgeFamily::Constant: tau = numeral(2); break;
    }
    std::string name = edge_family_name(k);
    r.count("cases");
    bool ok = true;
    for (int i = 0; i < 2; ++i) {
      ContextMorphisms mm(c.delta({}), i == 0 ? Chi::Const0 : Chi::Const1);
      Expr xi = i == 0 ? a : b;
      Expr sh = mm.shrink(1, a, b, f, {tau});
      for (bool expand : {false, true}) {
        Expr arg = expand ? sh : tau;
        Expr inst = expand ? mm.expand(1, a, b, f, {arg}) : sh;
        Expr partner = expand ? c.expand_partner(i, a, b, f, arg) : c.shrink_partner(i, a, b, f, arg);
        Expr ty = expand ? c.type(a, b) : c.type(xi, xi);
        std::string tag = name + (expand ? " expand_" : " shrink_") + std::to_string(i);
        auto w = edge_family_witness(T, c, i, expand, a, b, f, arg);
        r.count("witnesses");
        if (!w || !check_term(T, {}, *w, id_type(ty, partner, inst)).accepted) {
          r.fail({print(inst), print(ty), tag + ": witness missing or rejected", ""});
          ok = false;
          continue;
        }
        try {
          if (!m.same(m.eval(inst), m.eval(partner))) {
            r.fail({print(inst), print(ty), tag + ": interpretation differs from " + m.show(m.eval(partner)), ""});
            ok = false;
          }
        } catch (const std::exception& e) {
          r.fail({print(inst), print(ty), tag + ": " + e.what(), ""});
          ok = false;
        }
      }
    }
    if (ok) r.count("cases_passed");
  }
  return r;
}

struct SuiteInfo {
  std::vector<std::string> defaults;
  std::vector<std::string> allowed;  // empty: any fixture
};

inline const std::map<std::string, SuiteInfo>& suites() {
  static const std::map<std::string, SuiteInfo> m{
      {"A1", {{"W", "P3", "discrete2"}, {}}},
      {"A2", {{"W", "P3"}, {}}},
      {"A3", {{"W"}, {}}},
      {"A4", {{"W", "P3", "iso", "C2"}, {}}},
      {"A5", {{"Wc"}, {"Wc"}}},
      {"A6", {{"loops"}, {"loops"}}},
      {"A7", {{"W", "Wc", "P3"}, {}}},
      {"A8", {{"W", "P3", "discrete2", "C2", "iso", "path_isolated"}, {}}},
      {"A9", {{"W"}, {}}},
      {"A10", {{"iso"}, {"iso"}}},
      {"A11", {{"W"}, {}}},
      {"A12", {{"P3"}, {"P3"}}},
  };
  return m;
}

inline SuiteReport run_one(const std::string& id, const std::string& fname, const SuiteConfig& cfg) {
  if (id == "A6") return a6(cfg);
  if (id == "A10") return two_algebras_experiment(cfg);
  Fixture fx = fixture(fname);
  SuiteReport r;
  if (id == "A1") r = a1(fx, cfg);
  else if (id == "A2") r = a2(fx, cfg);
  else if (id == "A3") r = a3(fx, cfg);
  else if (id == "A4") r = a4(fx, cfg);
  else if (id == "A5") r = a5(fx, cfg);
  else if (id == "A7") r = a7(fx, cfg);
  else if (id == "A8") r = a8(fx, cfg);
  else if (id == "A9") r = a9(fx, cfg);
  else if (id == "A11") r = a11(fx, cfg);
  else if (id == "A12") r = a12(fx, cfg);
  r.fixture = fname;
  return r;
}

}  // namespace detail

inline std::vector<std::string> suite_ids() {
  std::vector<std::string> v;
  for (int i = 1; i <= 12; ++i) v.push_back("A" + std::to_string(i));
  return v;
}

// fixture "" or "default" runs the suite's default fixture list; fixtures run
// in parallel and their reports merge in list order.
inline SuiteReport run_suite(const std::string& id, const std::string& fixture_name, const SuiteConfig& cfg) {
  auto& all = detail::suites();
  auto it = all.find(id);
  if (it == all.end()) throw ConfigError("unknown suite '" + id + "' (expected A1..A12)");
  if (cfg.jobs < 1 || cfg.size < 0 || cfg.samples < 1) throw ConfigError("jobs and samples must be positive, size non-negative");
  std::vector<std::string> fixtures = it->second.defaults;
  if (!fixture_name.empty() && fixture_name != "default") {
    const auto& allowed = it->second.allowed;
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), fixture_name) == allowed.end())
      throw ConfigError("suite " + id + " runs on fixture " + allowed.front() + " only");
    if (fixture_name != "loops") fixture(fixture_name);  // validates the name
    fixtures = {fixture_name};
  }
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::future<SuiteReport>> futs;
  for (auto& f : fixtures)
    futs.push_back(std::async(cfg.jobs > 1 ? std::launch::async : std::launch::deferred,
                              [&, f] { return detail::run_one(id, f, cfg); }));
  SuiteReport out;
  for (auto& fu : futs) out.merge(fu.get());
  out.suite = id;
  out.config = cfg.to_json();
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace mlcx
