// Relevant types and the canonicalizer: every closed term of relevant type is
// propositionally equal to a basic term, a formal composite or a numeral, and
// the equality is produced as a kernel-checked witness.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "derived.hpp"
#include "semantics.hpp"

namespace mlcx {

enum class Relevance { Base, Id, Nat, Pi, Sigma, Irrelevant };

inline std::string relevance_name(Relevance r) {
  switch (r) {
    case Relevance::Base: return "relevant-base";
    case Relevance::Id: return "relevant-id";
    case Relevance::Nat: return "n-relevant";
    case Relevance::Pi: return "relevant-pi";
    case Relevance::Sigma: return "relevant-sigma";
    case Relevance::Irrelevant: return "irrelevant";
  }
  return "?";
}

inline bool is_endpoint_term(const Expr& e) {
  return e->kind == Kind::FVar || (e->kind == Kind::Basic && e->index == 0);
}

inline Relevance classify_type(const Expr& A) {
  switch (A->kind) {
    case Kind::Base: return Relevance::Base;
    case Kind::Nat: return Relevance::Nat;
    case Kind::Id:
      if (A->kids[0]->kind == Kind::Base && is_endpoint_term(A->kids[1]) && is_endpoint_term(A->kids[2]))
        return Relevance::Id;
      return Relevance::Irrelevant;
    case Kind::Pi: {
      std::string x = fresh_name("x");
      return classify_type(open1(A->kids[1], var(x))) == Relevance::Irrelevant ? Relevance::Irrelevant : Relevance::Pi;
    }
    case Kind::Sigma: {
      std::string x = fresh_name("x");
      bool r = classify_type(A->kids[0]) != Relevance::Irrelevant ||
               classify_type(open1(A->kids[1], var(x))) != Relevance::Irrelevant;
      return r ? Relevance::Sigma : Relevance::Irrelevant;
    }
    default: return Relevance::Irrelevant;
  }
}

inline bool is_formal_composite(const Expr& e) {
  if (e->kind == Kind::Basic) return true;
  if (e->kind == Kind::Refl) return e->kids[0]->kind == Kind::Basic;
  if (auto i = match_inverse(e))
    return i->A->kind == Kind::Base && i->a->kind == Kind::Basic && i->b->kind == Kind::Basic && is_formal_composite(i->f);
  if (auto c = match_compose(e))
    return c->A->kind == Kind::Base && c->a->kind == Kind::Basic && c->b->kind == Kind::Basic &&
           c->c->kind == Kind::Basic && is_formal_composite(c->f) && is_formal_composite(c->g);
  return false;
}

enum class CanonKind { Basic, FormalComposite, Numeral, Pair, OpaqueIrrelevant };

inline std::string canon_kind_name(CanonKind k) {
  switch (k) {
    case CanonKind::Basic: return "basic";
    case CanonKind::FormalComposite: return "formal-composite";
    case CanonKind::Numeral: return "numeral";
    case CanonKind::Pair: return "pair";
    case CanonKind::OpaqueIrrelevant: return "opaque-irrelevant";
  }
  return "?";
}

struct CanonicalForm {
  Expr original, type, canonical;
  Expr witness;  // Id(type, original, canonical)
  CanonKind kind = CanonKind::OpaqueIrrelevant;
  std::string strategy;  // conversion, paths or contraction
};

// The method found no witness; on a kernel-checked input this is a finding.
struct CanonFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CanonBudget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Canonicalizer {
 public:
  explicit Canonicalizer(Theory T, int fuel = 64) : T_(std::move(T)), model_(T_), fuel_(fuel) {}

  const Theory& theory() const { return T_; }
  const Model& model() const { return model_; }

  CanonicalForm canonicalize(const Expr& e, const Expr& A) {
    CanonicalForm out;
    out.original = e;
    out.type = A;
    Relevance r = classify_type(A);
    if (r == Relevance::Irrelevant || r == Relevance::Pi) {
      out.canonical = e;
      out.witness = refl(e);
      out.kind = r == Relevance::Pi ? CanonKind::OpaqueIrrelevant : CanonKind::OpaqueIrrelevant;
      out.strategy = "opaque";
      if (r == Relevance::Irrelevant && A->kind == Kind::Id) {
        // collapsed or reflexive identity types: the reflexivity term when convertible
        Checker k(T_);
        if (k.conv({}, e, refl(A->kids[1]), A)) {
          out.canonical = refl(A->kids[1]);
          out.kind = CanonKind::Basic;
          out.strategy = "conversion";
        }
      }
      return out;
    }
    SVal v = model_.eval(e);
    out.canonical = candidate(A, v);
    out.kind = r == Relevance::Base ? CanonKind::Basic
               : r == Relevance::Id ? (out.canonical->kind == Kind::Refl ? CanonKind::Basic : CanonKind::FormalComposite)
               : r == Relevance::Nat ? CanonKind::Numeral
                                     : CanonKind::Pair;
    if (r == Relevance::Id && is_formal_composite(out.canonical)) out.kind = CanonKind::FormalComposite;
    out.witness = witness(e, A, out.canonical, out.strategy);
    auto chk = check_term(T_, {}, out.witness, id_type(A, e, out.canonical));
    if (!chk.accepted) throw CanonFailure("witness rejected by the kernel: " + chk.message);
    return out;
  }

  CanonicalForm numeral_normalize(const Expr& e) { return canonicalize(e, nat()); }

  // The canonical term the semantics selects for a value of type A.
  Expr candidate(const Expr& A, const SVal& v) const {
    switch (A->kind) {
      case Kind::Base: return basic(v->vertex);
      case Kind::Nat: return numeral(static_cast<int>(v->num));
      case Kind::Id:
        if (A->kids[0]->kind == Kind::Base && model_.mode() == ModelMode::Groupoid) return model_.phi(v->arrow);
        return refl(A->kids[1]);
      case Kind::Sigma: {
        Expr c0 = candidate(A->kids[0], v->fst);
        return pair(c0, candidate(open1(A->kids[1], c0), v->snd));
      }
      default: throw CanonFailure("no canonical form for type " + print(A));
    }
  }

 private:
  Expr witness(const Expr& e, const Expr& A, const Expr& c, std::string& strategy) {
    Checker k(T_);
    if (k.conv({}, e, c, A)) {
      strategy = "conversion";
      return refl(e);
    }
    if (A->kind == Kind::Id && A->kids[0]->kind == Kind::Base) {
      PathNormalizer pn(base(T_.base_name().empty() ? "G" : T_.base_name()));
      Expr en = k.normalize(e);
      PathNormal n = pn.run(en, A->kids[1], A->kids[2]);
      if (alpha_equal(n.canonical, c)) {
        strategy = "paths";
        return n.witness;
      }
    }
    strategy = "contraction";
    try {
      return contract(e, A, c);
    } catch (const CanonFailure&) {
      if (A->kind != Kind::Base) throw;
    }
    strategy = "eliminator-rewriting";
    return head_j(e, A, c, k);
  }

  // A closed J(B, phi, a, b, f) with B constant equals phi(a) along
  // J(Id(B, J(x,y,z), phi(x)), r(phi(w)), a, b, f). The first such redex in
  // the normal form of e is rewritten under congruence and the rest recursed
  // on; independent of cycles in the graph.
  static bool constant_j(const Expr& t) {
    if (t->kind != Kind::J || !free_vars(t).empty()) return false;
    std::string x = fresh_name("x"), y = fresh_name("y"), z = fresh_name("z");
    Expr B = open3(t->kids[1], var(x), var(y), var(z));
    return !occurs_free(B, x) && !occurs_free(B, y) && !occurs_free(B, z);
  }

  // outside binders only, so the redex has no loose bound variables
  static Expr find_constant_j(const Expr& t) {
    if (constant_j(t)) return t;
    for (std::size_t c = 0; c < t->kids.size(); ++c)
      if (binders_of(t->kind, c) == 0)
        if (Expr r = find_constant_j(t->kids[c])) return r;
    return nullptr;
  }

  static Expr replace_subterm(const Expr& t, const Expr& s, const Expr& by) {
    if (alpha_equal(t, s)) return by;
    if (t->kids.empty()) return t;
    std::vector<Expr> ks;
    for (auto& kid : t->kids) ks.push_back(replace_subterm(kid, s, by));
    return rebuild(t, ks);
  }

  Expr head_j(const Expr& e, const Expr& A, const Expr& c, Checker& k, int depth = 0) {
    if (depth > fuel_) throw CanonBudget("eliminator rewriting budget exhausted");
    Expr en = k.normalize(e);
    Expr s = find_constant_j(en);
    if (!s) throw CanonFailure("no contractible cell left and no closed eliminator to reduce in " + print(en));
    std::string x = fresh_name("x"), y = fresh_name("y"), z = fresh_name("z"), w = fresh_name("w");
    Expr B = open3(s->kids[1], var(x), var(y), var(z));
    const Expr& P0 = s->kids[0];
    auto phi = [&](const Expr& t) { return open1(s->kids[2], t); };
    Expr jx = rebuild(s, {s->kids[0], s->kids[1], s->kids[2], var(x), var(y), var(z)});
    Expr ws = jelim(x, y, z, P0, id_type(B, jx, phi(var(x))), w, refl(phi(var(w))), s->kids[3], s->kids[4], s->kids[5]);
    Expr target = phi(s->kids[3]);
    Expr mid = replace_subterm(en, s, target);
    Expr step = ws;
    if (!alpha_equal(en, s)) {
      // ap of (v |-> en[s := v]) along ws
      std::string v = fresh_name("v");
      Expr body = replace_subterm(en, s, var(v));
      std::string x2 = fresh_name("x"), y2 = fresh_name("y"), z2 = fresh_name("z"), w2 = fresh_name("w");
      auto F = [&](const Expr& t) { return subst_many(body, {{v, t}}); };
      step = jelim(x2, y2, z2, B, id_type(A, F(var(x2)), F(var(y2))), w2, refl(F(var(w2))), s, target, ws);
    }
    Checker k2(T_);
    if (k2.conv({}, mid, c, A)) return step;
    std::string sub;
    Expr rest;
    try {
      rest = witness_no_head(mid, A, c, sub);
    } catch (const CanonFailure&) {
      rest = head_j(mid, A, c, k, depth + 1);
    }
    return compose(A, e, mid, c, step, rest);
  }

  Expr witness_no_head(const Expr& e, const Expr& A, const Expr& c, std::string& strategy) {
    Checker k(T_);
    if (k.conv({}, e, c, A)) {
      strategy = "conversion";
      return refl(e);
    }
    strategy = "contraction";
    return contract(e, A, c);
  }

  // Replace basic cells by variables and eliminate edges one at a time with J.
  Expr contract(const Expr& e, const Expr& A, const Expr& c) {
    if (!T_.gset) throw CanonFailure("no basic cells to contract");
    const GlobularSet& g = *T_.gset;
    std::set<std::string> used;
    basic_cells_into(e, used);
    basic_cells_into(A, used);
    basic_cells_into(c, used);
    // close under boundaries
    std::vector<std::string> todo(used.begin(), used.end());
    while (!todo.empty()) {
      std::string n = todo.back();
      todo.pop_back();
      if (g.dim(n) == 0) continue;
      for (auto& b : {g.src(n), g.tgt(n)})
        if (used.insert(b).second) todo.push_back(b);
    }
    std::vector<std::string> cells(used.begin(), used.end());
    std::stable_sort(cells.begin(), cells.end(), [&](auto& x, auto& y) { return g.dim(x) < g.dim(y); });
    std::map<std::string, Expr> to_var;
    std::map<std::string, Expr> back;
    Context ctx;
    std::string bn = T_.base_name().empty() ? "G" : T_.base_name();
    for (auto& n : cells) {
      std::string v = fresh_name("c_" + n);
      to_var[n] = var(v);
      back[v] = basic(n);
    }
    for (auto& n : cells) {
      Expr ty = g.dim(n) == 0 ? base(bn) : replace_basic(cell_term_type(g, n), to_var, bn);
      ctx = ctx.extend(to_var[n]->name, ty);
    }
    Expr e2 = replace_basic(e, to_var, bn), A2 = replace_basic(A, to_var, bn), c2 = replace_basic(c, to_var, bn);
    int fuel = fuel_;
    Expr w = contract_open(ctx, e2, A2, c2, fuel);
    return subst_many(w, back);
  }

  static Expr cell_term_type(const GlobularSet& g, const std::string& n) {
    // Id(... Id(G, <s>, <t>) ...) over the boundary cells
    int d = g.dim(n);
    std::vector<std::pair<Expr, Expr>> ends(static_cast<std::size_t>(d));
    std::string cur = n;
    for (int k = d; k >= 1; --k) {
      ends[static_cast<std::size_t>(k - 1)] = {basic(g.src(cur)), basic(g.tgt(cur))};
      cur = g.src(cur);
    }
    return iterated_id_type(base(), ends);
  }

  Expr contract_open(const Context& ctx, const Expr& e, const Expr& A, const Expr& c, int& fuel) {
    if (--fuel < 0) throw CanonBudget("contraction budget exhausted");
    Checker k(T_);
    if (k.conv(ctx, e, c, A)) return refl(e);
    // highest-dimensional non-loop cell variable whose level is below the truncation
    int best = -1;
    int best_dim = -1;
    for (std::size_t i = 0; i < ctx.decls.size(); ++i) {
      const Expr& ty = ctx.decls[i].second;
      if (ty->kind != Kind::Id) continue;
      const Expr &s = ty->kids[1], &t = ty->kids[2];
      if (s->kind != Kind::FVar || t->kind != Kind::FVar || s->name == t->name) continue;
      int lvl = id_level(ty);
      if (T_.truncated() && lvl > T_.level) continue;
      if (lvl > best_dim) {
        best_dim = lvl;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) throw CanonFailure("no contractible cell left and conversion fails: " + print(e) + " vs " + print(c));
    const auto& [uname, uty] = ctx.decls[static_cast<std::size_t>(best)];
    const Expr& P0 = uty->kids[0];
    std::string sname = uty->kids[1]->name, tname = uty->kids[2]->name;
    // variables whose types depend on s, t or u
    std::set<std::string> moving{sname, tname, uname};
    std::vector<std::pair<std::string, Expr>> dep, keep;
    for (auto& d : ctx.decls) {
      if (d.first == uname || d.first == sname || d.first == tname) continue;
      bool m = false;
      for (auto& v : free_vars(d.second))
        if (moving.count(v)) m = true;
      if (m) {
        moving.insert(d.first);
        dep.push_back(d);
      } else {
        keep.push_back(d);
      }
    }
    std::string x = fresh_name("x"), y = fresh_name("y"), z = fresh_name("z"), w = fresh_name("w");
    // motive over (x, y, z) with the dependent variables re-bound
    auto instance = [&](const Expr& xs, const Expr& ys, const Expr& zs, std::vector<std::string>& names) {
      std::map<std::string, Expr> m{{sname, xs}, {tname, ys}, {uname, zs}};
      std::vector<std::pair<std::string, Expr>> bound;
      for (auto& d : dep) {
        std::string nn = fresh_name(d.first);
        bound.push_back({nn, subst_many(d.second, m)});
        m[d.first] = var(nn);
        names.push_back(nn);
      }
      return std::make_tuple(bound, subst_many(e, m), subst_many(A, m), subst_many(c, m));
    };
    std::vector<std::string> mnames;
    auto [mb, me, mA, mc] = instance(var(x), var(y), var(z), mnames);
    Expr motive = id_type(mA, me, mc);
    for (auto it = mb.rbegin(); it != mb.rend(); ++it) motive = pi(it->first, it->second, motive);
    std::vector<std::string> fnames;
    auto [fb, fe, fA, fc] = instance(var(w), var(w), refl(var(w)), fnames);
    Context inner;
    for (auto& d : keep) inner = inner.extend(d.first, d.second);
    inner = inner.extend(w, P0);
    for (auto& b : fb) inner = inner.extend(b.first, b.second);
    Expr body = contract_open(inner, fe, fA, fc, fuel);
    for (auto it = fb.rbegin(); it != fb.rend(); ++it) body = lam(it->first, it->second, body);
    Expr j = jelim(x, y, z, P0, motive, w, body, var(sname), var(tname), var(uname));
    for (auto& d : dep) j = app(j, var(d.first));
    return j;
  }

  Theory T_;
  Model model_;
  int fuel_;
};

// Number of distinct canonical basic terms among closed terms of type G.
inline std::size_t canonical_class_count(Canonicalizer& c, const std::vector<Expr>& terms) {
  std::set<std::string> seen;
  for (auto& t : terms) seen.insert(print(c.canonicalize(t, base()).canonical));
  return seen.size();
}

}  // namespace mlcx
