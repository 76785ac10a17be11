// Cells of the globular set generated by a type, the free monad on reflexive
// globular sets, theory morphisms and colimits of theories.
#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "enumerate.hpp"
#include "kernel.hpp"

namespace mlcx {

// (a0_0, a0_1, ..., a(n-1)_0, a(n-1)_1, top)
struct TCell {
  int dim = 0;
  std::vector<Expr> comps;

  const Expr& top() const { return comps.back(); }
  const Expr& side(int k, int s) const { return comps[static_cast<std::size_t>(2 * k + s)]; }

  // boundary k-cell on side s
  TCell face(int k, int s) const {
    if (k >= dim) return *this;
    TCell c;
    c.dim = k;
    c.comps.assign(comps.begin(), comps.begin() + 2 * k);
    c.comps.push_back(side(k, s));
    return c;
  }
  TCell source() const { return face(dim - 1, 0); }
  TCell target() const { return face(dim - 1, 1); }

  // iterated identity type of the component at level k
  Expr type_at(const Expr& A, int k) const {
    std::vector<std::pair<Expr, Expr>> eps;
    for (int j = 0; j < k; ++j) eps.emplace_back(side(j, 0), side(j, 1));
    return iterated_id_type(A, eps);
  }

  std::string name() const {
    std::string s = "(";
    for (std::size_t i = 0; i + 1 < comps.size(); ++i) s += print(comps[i]) + (i + 2 == comps.size() ? "; " : ", ");
    return s + print(top()) + ")";
  }

  friend bool operator==(const TCell& a, const TCell& b) {
    if (a.dim != b.dim || a.comps.size() != b.comps.size()) return false;
    for (std::size_t i = 0; i < a.comps.size(); ++i)
      if (!alpha_equal(a.comps[i], b.comps[i])) return false;
    return true;
  }
};

inline bool tcell_valid(const Theory& T, const Expr& A, const TCell& c, std::string* why = nullptr) {
  if (c.comps.size() != static_cast<std::size_t>(2 * c.dim + 1)) {
    if (why) *why = "wrong arity";
    return false;
  }
  for (int k = 0; k <= c.dim; ++k) {
    Expr ty = c.type_at(A, k);
    for (int s = 0; s < (k < c.dim ? 2 : 1); ++s) {
      const Expr& e = k < c.dim ? c.side(k, s) : c.top();
      auto r = check_term(T, {}, e, ty);
      if (!r) {
        if (why) *why = r.message;
        return false;
      }
    }
  }
  return true;
}

// ---- the globular set generated by a type ----

struct GlobFragment {
  std::vector<std::vector<TCell>> cells;           // by dimension
  std::vector<std::vector<std::size_t>> class_of;  // def_equal class index per cell

  std::size_t size() const {
    std::size_t n = 0;
    for (auto& d : cells) n += d.size();
    return n;
  }
  std::size_t class_count(int d) const {
    if (d >= static_cast<int>(class_of.size())) return 0;
    std::set<std::size_t> s(class_of[d].begin(), class_of[d].end());
    return s.size();
  }
  bool contains(const TCell& c) const {
    if (c.dim >= static_cast<int>(cells.size())) return false;
    for (auto& x : cells[c.dim])
      if (x == c) return true;
    return false;
  }

  // Cells are named by their printed tuples.
  GlobularSet to_globular(const std::string& name = "G") const {
    std::vector<CellDecl> raw;
    for (auto& d : cells)
      for (auto& c : d) raw.push_back({c.name(), c.dim, c.dim ? c.source().name() : "", c.dim ? c.target().name() : ""});
    return validate_globular(raw, name);
  }
};

inline GlobFragment glob_of_type(const Theory& T, const Expr& A, int budget, int max_dim = 1, EnumConfig cfg = {}) {
  GlobFragment fr;
  if (budget <= 0) return fr;
  Enumerator en(T, cfg);
  Checker k(T);
  fr.cells.emplace_back();
  for (auto& t : en.up_to({}, A, budget)) fr.cells[0].push_back(TCell{0, {t}});
  for (int d = 1; d <= max_dim; ++d) {
    std::vector<TCell> next;
    for (auto& s : fr.cells[d - 1])
      for (auto& t : fr.cells[d - 1]) {
        bool parallel = true;
        for (std::size_t i = 0; i + 1 < s.comps.size(); ++i)
          if (!alpha_equal(s.comps[i], t.comps[i])) parallel = false;
        if (!parallel) continue;
        TCell proto = s;
        proto.dim = d;
        proto.comps.pop_back();
        proto.comps.push_back(s.top());
        proto.comps.push_back(t.top());
        Expr ty = proto.type_at(A, d);
        for (auto& e : en.up_to({}, ty, budget)) {
          TCell c = proto;
          c.comps.push_back(e);
          next.push_back(std::move(c));
        }
      }
    if (next.empty()) break;
    fr.cells.push_back(std::move(next));
  }
  for (auto& layer : fr.cells) {
    std::vector<std::size_t> cls(layer.size());
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < layer.size(); ++i) {
      cls[i] = reps.size();
      for (std::size_t r = 0; r < reps.size(); ++r) {
        const TCell& a = layer[reps[r]];
        bool same = true;
        for (int j = 0; j <= a.dim && same; ++j) {
          Expr ty = a.type_at(A, j);
          for (int s = 0; s < (j < a.dim ? 2 : 1) && same; ++s) {
            const Expr& x = j < a.dim ? a.side(j, s) : a.top();
            const Expr& y = j < a.dim ? layer[i].side(j, s) : layer[i].top();
            try {
              same = k.conv({}, x, y, ty);
            } catch (const TypeError&) {
              same = false;
            }
          }
        }
        if (same) {
          cls[i] = r;
          break;
        }
      }
      if (cls[i] == reps.size()) reps.push_back(i);
    }
    fr.class_of.push_back(std::move(cls));
  }
  return fr;
}

// ---- the monad ----

// Expression map induced by a cell map; degenerate images are allowed.
inline Expr map_basic(const Expr& e, const std::function<std::string(const std::string&)>& f) {
  if (e->kind == Kind::Basic) return cell_term(degenerate_of(f(e->name), e->index));
  if (e->kids.empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e->kids.size());
  for (auto& c : e->kids) kids.push_back(map_basic(c, f));
  return rebuild(e, std::move(kids));
}

inline TCell map_cells(const std::function<std::string(const std::string&)>& phi, const TCell& c) {
  TCell out{c.dim, {}};
  for (auto& e : c.comps) out.comps.push_back(map_basic(e, phi));
  return out;
}

inline std::function<std::string(const std::string&)> cell_fn(const std::map<std::string, std::string>& m) {
  return [m](const std::string& n) {
    auto it = m.find(n);
    if (it == m.end()) throw MissingCell(n);
    return it->second;
  };
}

// Cells of g and of every T^k(g) seen so far. A name is either a cell of one
// of the registered globular sets or the printed tuple of a known TCell.
class FreeMonad {
 public:
  explicit FreeMonad(std::vector<GlobularSet> bases = {}) : bases_(std::move(bases)) {}

  void add_base(const GlobularSet& g) { bases_.push_back(g); }

  const TCell& remember(const TCell& c) {
    auto [it, fresh] = reg_.emplace(c.name(), c);
    if (fresh)
      for (int k = 0; k < c.dim; ++k)
        for (int s = 0; s < 2; ++s) remember(c.face(k, s));
    return it->second;
  }
  bool knows(const std::string& n) const { return reg_.count(degenerate_base(n)) > 0; }
  const TCell& lookup(const std::string& n) const {
    auto it = reg_.find(n);
    if (it == reg_.end()) throw MissingCell(n);
    return it->second;
  }

  int cell_dim(const std::string& n) const {
    int k = 0;
    std::string b = degenerate_base(n, &k);
    if (auto it = reg_.find(b); it != reg_.end()) return it->second.dim + k;
    return base_of(b).dim(b) + k;
  }
  std::string boundary(const std::string& n, int j, int s) const {
    int d = cell_dim(n);
    if (j >= d) return n;
    if (is_degenerate_name(n)) return boundary(n.substr(2, n.size() - 3), j, s);
    if (auto it = reg_.find(n); it != reg_.end()) return it->second.face(j, s).name();
    return base_of(n).boundary(n, j, s);
  }

  // (<c0_0>, <c0_1>, ..., <c>)
  TCell eta(const std::string& n) {
    TCell c{cell_dim(n), {}};
    for (int j = 0; j < c.dim; ++j)
      for (int s = 0; s < 2; ++s) c.comps.push_back(cell_term(boundary(n, j, s)));
    c.comps.push_back(cell_term(n));
    return remember(c);
  }
  TCell eta(const TCell& c) { return eta(remember(c).name()); }

  // Replace every basic term naming a known cell by that cell's top term.
  // The degenerate of a cell with basic top <y> is <i(y)>, so eta is reflexive.
  TCell mu(const TCell& c) {
    TCell out{c.dim, {}};
    for (auto& e : c.comps) out.comps.push_back(flatten(e));
    return remember(out);
  }

  TCell T_eta(const TCell& c) {
    return remember(map_cells([this](const std::string& x) { return eta(x).name(); }, c));
  }
  TCell T_mu(const TCell& c) {
    return remember(map_cells([this](const std::string& x) { return mu(lookup(x)).name(); }, c));
  }
  TCell TT_eta(const TCell& c) {
    return remember(map_cells([this](const std::string& y) { return T_eta(lookup(y)).name(); }, c));
  }

  bool left_unit(const TCell& c) { return mu(eta(c)) == c; }
  bool right_unit(const TCell& c) { return mu(T_eta(c)) == c; }
  bool associative(const TCell& c3) { return mu(mu(c3)) == mu(T_mu(c3)); }

 private:
  const GlobularSet& base_of(const std::string& n) const {
    for (auto& g : bases_)
      if (g.has(n)) return g;
    throw MissingCell(n);
  }

  Expr flatten(const Expr& e) const {
    if (e->kind == Kind::Basic) {
      Expr t = lookup(e->name).top();
      if (t->kind == Kind::Basic) return basic(t->name, t->index + e->index);
      for (int i = 0; i < e->index; ++i) t = refl(t);
      return t;
    }
    if (e->kids.empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(e->kids.size());
    for (auto& k : e->kids) kids.push_back(flatten(k));
    return rebuild(e, std::move(kids));
  }

  std::vector<GlobularSet> bases_;
  std::map<std::string, TCell> reg_;
};

inline TCell unit_eta(const GlobularSet& g, const std::string& c) {
  FreeMonad m({g});
  return m.eta(c);
}

// c is a cell over T(T(g)) whose basic names are printed T(g)-cells.
inline TCell mult_mu(const GlobularSet& g, const std::vector<TCell>& tg_cells, const TCell& c) {
  FreeMonad m({g});
  for (auto& x : tg_cells) m.remember(x);
  return m.mu(c);
}

// ---- theory morphisms ----

struct TheoryMorphism {
  Theory source, target;
  std::map<std::string, std::string> cell_map;

  Expr apply(const Expr& e) const { return map_basic(e, cell_fn(cell_map)); }
  TCell apply(const TCell& c) const { return map_cells(cell_fn(cell_map), c); }

  // dimensions, sources and targets are preserved
  bool is_globular_map() const {
    const GlobularSet& s = *source.gset;
    const GlobularSet& t = *target.gset;
    for (auto& c : s.cells()) {
      auto it = cell_map.find(c.name);
      if (it == cell_map.end() || !t.has(it->second) || t.dim(it->second) != c.dim) return false;
      if (c.dim > 0 && (cell_map.at(c.src) != t.src(it->second) || cell_map.at(c.tgt) != t.tgt(it->second)))
        return false;
    }
    return true;
  }

  // every source equation is derivable after translation
  bool preserves_equations() const {
    for (auto& e : source.equations)
      if (!def_equal(target, {}, apply(e.lhs), apply(e.rhs), apply(e.type))) return false;
    return true;
  }
};

inline Theory with_level(Theory T, int level) {
  T.level = level;
  return T;
}

// Same tuple, read in the theory with the weaker equality.
inline TCell include_flavor(int from, int to, const TCell& c) {
  auto rank = [](int l) { return l == kOmega ? std::numeric_limits<int>::max() : l; };
  if (rank(to) > rank(from)) throw std::invalid_argument("flavor inclusion goes from stronger to weaker equality");
  return c;
}

struct NotParallel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Target theory with f(t) = g(t) for every basic instance t of the source and,
// with budget > 0, for enumerated closed terms of the base type.
inline Theory coequalizer_theory(const TheoryMorphism& f, const TheoryMorphism& g, int budget = 0) {
  if (!f.source.gset || !g.source.gset || !f.target.gset || !g.target.gset)
    throw NotParallel("morphisms need adjoined globular sets");
  auto names = [](const GlobularSet& s) {
    std::set<std::string> n;
    for (auto& c : s.cells()) n.insert(c.name);
    return n;
  };
  if (names(*f.source.gset) != names(*g.source.gset) || names(*f.target.gset) != names(*g.target.gset) ||
      f.source.level != g.source.level || f.target.level != g.target.level)
    throw NotParallel("morphisms are not parallel");
  Theory out = f.target;
  Checker src(f.source);
  auto add = [&](const Expr& t, const Expr& ty) {
    Expr l = f.apply(t), r = g.apply(t);
    if (alpha_equal(l, r)) return;
    out.equations.push_back({l, r, f.apply(ty)});
  };
  std::vector<CellDecl> cells = f.source.gset->cells();
  std::stable_sort(cells.begin(), cells.end(), [](auto& a, auto& b) { return a.dim < b.dim; });
  for (auto& c : cells) add(basic(c.name), src.cell_type(c.name));
  if (budget > 0) {
    Expr G = base(f.source.base_name());
    for (auto& t : enumerate_closed_terms(f.source, G, budget)) add(t, G);
  }
  validate_equations(out);
  return out;
}

// Disjoint union of the adjoined sets; clashing names get a summand suffix.
inline Theory coproduct_theory(const std::vector<Theory>& ts, std::vector<std::map<std::string, std::string>>* renames = nullptr) {
  std::vector<CellDecl> raw;
  std::set<std::string> used;
  std::vector<Equation> eqs;
  int level = ts.empty() ? kOmega : ts.front().level;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::map<std::string, std::string> ren;
    if (ts[i].gset) {
      for (auto& c : ts[i].gset->cells()) {
        std::string n = c.name;
        while (used.count(n)) n = c.name + "_" + std::to_string(i);
        used.insert(n);
        ren[c.name] = n;
      }
      for (auto& c : ts[i].gset->cells())
        raw.push_back({ren[c.name], c.dim, c.dim ? ren[c.src] : "", c.dim ? ren[c.tgt] : ""});
    }
    auto fn = cell_fn(ren);
    for (auto& e : ts[i].equations) eqs.push_back({map_basic(e.lhs, fn), map_basic(e.rhs, fn), map_basic(e.type, fn)});
    if (renames) renames->push_back(ren);
  }
  Theory out = adjoin_globular(level, validate_globular(raw, "G"));
  out.equations = std::move(eqs);
  return out;
}

}  // namespace mlcx
