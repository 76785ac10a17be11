// Theories, bidirectional checking, normalisation and definitional equality.
#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "globular.hpp"
#include "syntax.hpp"

namespace mlcx {

constexpr int kOmega = -1;

struct Equation {
  Expr lhs, rhs, type;
};

class Theory;

// Supplies a candidate inhabitant of Id(A, u, v) for the truncation rule.
// Whatever it returns is re-checked by the kernel before use.
using InhabitantProvider =
    std::function<std::optional<Expr>(const Theory&, const Context&, const Expr& A, const Expr& u, const Expr& v)>;

class Theory {
 public:
  int level = kOmega;  // kOmega or n >= 0
  std::shared_ptr<const GlobularSet> gset;
  std::vector<Equation> equations;
  InhabitantProvider provider;

  bool truncated() const { return level != kOmega; }
  std::string base_name() const { return gset ? gset->name : std::string(); }
  std::string flavor_string() const { return level == kOmega ? "omega" : std::to_string(level); }
};

inline Theory adjoin_globular(int level, const GlobularSet& g) {
  Theory t;
  t.level = level;
  t.gset = std::make_shared<const GlobularSet>(g);
  return t;
}
inline Theory plain_theory(int level = kOmega) {
  Theory t;
  t.level = level;
  return t;
}

struct TypeError : std::runtime_error {
  std::string rule;
  Expr subterm;
  TypeError(std::string r, Expr e, const std::string& msg)
      : std::runtime_error(r + ": " + msg + (e ? " in " + print(e) : std::string())), rule(std::move(r)), subterm(std::move(e)) {}
};

struct CheckResult {
  bool accepted = false;
  std::string rule;     // failing rule on rejection
  Expr subterm;         // offending subterm on rejection
  std::string message;
  Expr type;            // inferred type on acceptance
  explicit operator bool() const { return accepted; }
};

inline int id_level(const Expr& A) {
  int k = 0;
  const Node* t = A.get();
  while (t->kind == Kind::Id) {
    ++k;
    t = t->kids[0].get();
  }
  return k;
}

// Term for a (possibly degenerate) cell name.
inline Expr cell_term(const std::string& n) {
  int k = 0;
  std::string b = degenerate_base(n, &k);
  return basic(b, k);
}

class Checker {
 public:
  explicit Checker(const Theory& t, bool use_provider = true) : T_(t), use_provider_(use_provider) { prepare_equations(); }

  // Extra inhabitants offered for the truncation rule.
  void add_hint(const Context& ctx, const Expr& p) {
    Expr ty = infer(ctx, p);
    hints_.push_back({ctx, p, ty});
  }

  const Theory& theory() const { return T_; }

  // ---- normalisation ----

  // Plain normal form: beta, Sigma, J-on-r, rec and i(a) conversions.
  Expr normalize(const Expr& e) { return nf(e, false); }
  // Normal form used for comparison: adds the truncated J rule and E.
  Expr conv_normal(const Expr& e) { return nf(e, true); }

  // ---- typing ----

  void check_context(const Context& ctx) {
    Context acc;
    std::set<std::string> names;
    for (auto& [x, A] : ctx.decls) {
      if (names.count(x)) throw TypeError("context", var(x), "duplicate variable " + x);
      check_type(acc, A);
      names.insert(x);
      acc = acc.extend(x, A);
    }
  }

  void check_type(const Context& ctx, const Expr& A) {
    switch (A->kind) {
      case Kind::Base:
        if (!T_.gset || A->name != T_.base_name()) throw TypeError("base-type", A, "unknown base type");
        return;
      case Kind::Nat: return;
      case Kind::Id:
        check_type(ctx, A->kids[0]);
        check(ctx, A->kids[1], A->kids[0]);
        check(ctx, A->kids[2], A->kids[0]);
        return;
      case Kind::Pi: case Kind::Sigma: {
        check_type(ctx, A->kids[0]);
        std::string x = fresh_name(A->hints.empty() ? "x" : A->hints[0]);
        check_type(ctx.extend(x, A->kids[0]), open1(A->kids[1], var(x)));
        return;
      }
      default: throw TypeError("type-formation", A, "not a type");
    }
  }

  void check(const Context& ctx, const Expr& e, const Expr& A) {
    switch (e->kind) {
      case Kind::Lam: {
        if (A->kind != Kind::Pi) throw TypeError("pi-intro", e, "expected " + print(A));
        check_type(ctx, e->kids[0]);
        if (!conv_type(ctx, e->kids[0], A->kids[0])) throw TypeError("pi-intro", e, "domain mismatch against " + print(A));
        std::string x = fresh_name(e->hints.empty() ? "x" : e->hints[0]);
        check(ctx.extend(x, A->kids[0]), open1(e->kids[1], var(x)), open1(A->kids[1], var(x)));
        return;
      }
      case Kind::Pair: {
        if (A->kind != Kind::Sigma) {
          break;
        }
        check(ctx, e->kids[0], A->kids[0]);
        check(ctx, e->kids[1], open1(A->kids[1], e->kids[0]));
        return;
      }
      case Kind::Refl: {
        if (A->kind != Kind::Id) throw TypeError("id-intro", e, "expected " + print(A));
        check(ctx, e->kids[0], A->kids[0]);
        if (!conv(ctx, e->kids[0], A->kids[1], A->kids[0]) || !conv(ctx, e->kids[0], A->kids[2], A->kids[0]))
          throw TypeError("id-intro", e, "endpoints of " + print(A) + " differ from " + print(e->kids[0]));
        return;
      }
      case Kind::Zero:
        if (A->kind != Kind::Nat) throw TypeError("nat-intro", e, "expected " + print(A));
        return;
      case Kind::Succ:
        if (A->kind != Kind::Nat) throw TypeError("nat-intro", e, "expected " + print(A));
        check(ctx, e->kids[0], nat());
        return;
      case Kind::SigElim: {
        check_sigelim(ctx, e, A);
        return;
      }
      case Kind::Rec: {
        check(ctx, e->kids[0], nat());
        Expr motive = abstract_subterm(A, e->kids[0]);
        check_rec_with(ctx, e, motive);
        return;
      }
      default: break;
    }
    Expr B = infer(ctx, e);
    if (!conv_type(ctx, B, A)) throw TypeError("conversion", e, "has type " + print(B) + " but expected " + print(A));
  }

  Expr infer(const Context& ctx, const Expr& e) {
    switch (e->kind) {
      case Kind::FVar: {
        const Expr* t = ctx.lookup(e->name);
        if (!t) throw TypeError("variable", e, "unbound variable " + e->name);
        return *t;
      }
      case Kind::BVar: throw TypeError("variable", e, "dangling bound variable");
      case Kind::Basic: return basic_type(e);
      case Kind::Zero: return nat();
      case Kind::Succ: check(ctx, e->kids[0], nat()); return nat();
      case Kind::Refl: {
        Expr A = infer(ctx, e->kids[0]);
        return id_type(A, e->kids[0], e->kids[0]);
      }
      case Kind::Lam: {
        check_type(ctx, e->kids[0]);
        std::string x = fresh_name(e->hints.empty() ? "x" : e->hints[0]);
        Expr B = infer(ctx.extend(x, e->kids[0]), open1(e->kids[1], var(x)));
        return pi(x, e->kids[0], B);
      }
      case Kind::Pair: {
        Expr A = infer(ctx, e->kids[0]);
        Expr B = infer(ctx, e->kids[1]);
        return arrow_sigma(A, B);
      }
      case Kind::App: {
        Expr F = infer(ctx, e->kids[0]);
        if (F->kind != Kind::Pi) throw TypeError("pi-elim", e, "applying a term of type " + print(F));
        check(ctx, e->kids[1], F->kids[0]);
        return open1(F->kids[1], e->kids[1]);
      }
      case Kind::J: return infer_j(ctx, e);
      case Kind::SigElim: return infer_sigelim(ctx, e);
      case Kind::Rec: {
        check(ctx, e->kids[0], nat());
        // constant motive: C has no loose bound variables, so it is a valid body
        Expr C = infer(ctx, e->kids[1]);
        check_rec_with(ctx, e, C);
        return C;
      }
      case Kind::Base: case Kind::Nat: case Kind::Id: case Kind::Pi: case Kind::Sigma:
        throw TypeError("term", e, "a type used as a term");
    }
    throw TypeError("term", e, "not inferable");
  }

  Expr basic_type(const Expr& e) {
    if (!T_.gset) throw TypeError("basic-term", e, "theory has no adjoined globular set");
    if (!T_.gset->has(e->name)) throw TypeError("basic-term", e, "unknown cell " + e->name);
    if (e->index > 0) {
      Expr inner = basic(e->name, e->index - 1);
      return id_type(basic_type(inner), inner, inner);
    }
    return cell_type(e->name);
  }

  Expr cell_type(const std::string& n) {
    if (T_.gset->dim(n) == 0) return base(T_.base_name());
    std::string s = T_.gset->src(n), t = T_.gset->tgt(n);
    return id_type(cell_type(s), cell_term(s), cell_term(t));
  }

  // ---- definitional equality ----

  bool conv_type(const Context& ctx, const Expr& A, const Expr& B) {
    if (alpha_equal(A, B)) return true;
    if (A->kind != B->kind) return false;
    switch (A->kind) {
      case Kind::Base: return A->name == B->name;
      case Kind::Nat: return true;
      case Kind::Id:
        return conv_type(ctx, A->kids[0], B->kids[0]) && conv(ctx, A->kids[1], B->kids[1], A->kids[0]) &&
               conv(ctx, A->kids[2], B->kids[2], A->kids[0]);
      case Kind::Pi: case Kind::Sigma: {
        if (!conv_type(ctx, A->kids[0], B->kids[0])) return false;
        std::string x = fresh_name(A->hints.empty() ? "x" : A->hints[0]);
        return conv_type(ctx.extend(x, A->kids[0]), open1(A->kids[1], var(x)), open1(B->kids[1], var(x)));
      }
      default: return false;
    }
  }

  bool conv(const Context& ctx, const Expr& a, const Expr& b, const Expr& A) {
    if (alpha_equal(a, b)) return true;
    if (T_.truncated() && id_level(A) >= T_.level + 1) return true;
    Expr x = conv_normal(a), y = conv_normal(b);
    if (alpha_equal(x, y)) return true;
    Expr An = conv_normal_type(A);
    if (T_.truncated() && id_level(An) == T_.level && tr_related(ctx, An, x, y)) return true;
    if (structural(ctx, x, y, An)) return true;
    if (T_.truncated() && id_level(An) == T_.level && use_provider_ && T_.provider && provided(ctx, An, x, y))
      return true;
    return false;
  }

  Expr conv_normal_type(const Expr& A) { return nf(A, true); }

 private:
  struct Hint {
    Context ctx;
    Expr term, type;
  };

  const Theory& T_;
  bool use_provider_;
  std::vector<Hint> hints_;
  std::unordered_map<Expr, Expr, ExprHash, ExprEq> cache_plain_, cache_conv_;
  // equation classes: normalised side -> representative
  std::unordered_map<Expr, Expr, ExprHash, ExprEq> eq_rep_;
  int provider_depth_ = 0;

  static Expr arrow_sigma(const Expr& A, const Expr& B) {
    return make(Kind::Sigma, {A, B}, {}, 0, {"_"});
  }

  static bool shorter(const Expr& a, const Expr& b) {
    if (a->size != b->size) return a->size < b->size;
    return print(a) < print(b);
  }

  void prepare_equations() {
    if (T_.equations.empty()) return;
    // iterate until representatives are stable under rewriting by each other
    std::vector<std::pair<Expr, Expr>> sides;
    for (auto& q : T_.equations) sides.push_back({q.lhs, q.rhs});
    for (int round = 0; round < 16; ++round) {
      cache_conv_.clear();
      std::vector<Expr> terms;
      std::vector<std::pair<std::size_t, std::size_t>> links;
      std::unordered_map<Expr, std::size_t, ExprHash, ExprEq> ix;
      auto slot = [&](const Expr& e) {
        auto it = ix.find(e);
        if (it != ix.end()) return it->second;
        ix.emplace(e, terms.size());
        terms.push_back(e);
        return terms.size() - 1;
      };
      for (auto& [l, r] : sides) links.push_back({slot(conv_normal(l)), slot(conv_normal(r))});
      for (auto& [k, v] : eq_rep_) links.push_back({slot(k), slot(v)});
      UnionFind uf(terms.size());
      for (auto& [i, j] : links) uf.unite(i, j);
      std::unordered_map<std::size_t, Expr> best;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        auto r = uf.find(i);
        auto it = best.find(r);
        if (it == best.end() || shorter(terms[i], it->second)) best[r] = terms[i];
      }
      std::unordered_map<Expr, Expr, ExprHash, ExprEq> next;
      for (std::size_t i = 0; i < terms.size(); ++i)
        if (!alpha_equal(terms[i], best[uf.find(i)])) next.emplace(terms[i], best[uf.find(i)]);
      bool same = next.size() == eq_rep_.size();
      if (same)
        for (auto& [k, v] : next) {
          auto it = eq_rep_.find(k);
          if (it == eq_rep_.end() || !alpha_equal(it->second, v)) {
            same = false;
            break;
          }
        }
      eq_rep_ = std::move(next);
      if (same) break;
    }
    cache_conv_.clear();
  }

  bool is_redex(const Expr& e, bool conv_mode) const {
    switch (e->kind) {
      case Kind::Basic: return e->index > 0;
      case Kind::App: return e->kids[0]->kind == Kind::Lam;
      case Kind::SigElim: return e->kids[3]->kind == Kind::Pair;
      case Kind::J:
        if (e->kids[5]->kind == Kind::Refl) return true;
        return conv_mode && T_.truncated() && id_level(e->kids[0]) >= T_.level;
      case Kind::Rec: return e->kids[0]->kind == Kind::Zero || e->kids[0]->kind == Kind::Succ;
      default: return false;
    }
  }

  Expr contract(const Expr& e) const {
    switch (e->kind) {
      case Kind::Basic: return refl(basic(e->name, e->index - 1));
      case Kind::App: return instantiate(e->kids[0]->kids[1], {e->kids[1]});
      case Kind::SigElim: return instantiate(e->kids[2], {e->kids[3]->kids[0], e->kids[3]->kids[1]});
      case Kind::J: return instantiate(e->kids[2], {e->kids[3]});
      case Kind::Rec: {
        const Expr& n = e->kids[0];
        if (n->kind == Kind::Zero) return e->kids[1];
        Expr prev = rebuild(e, {n->kids[0], e->kids[1], e->kids[2]});
        return instantiate(e->kids[2], {n->kids[0], prev});
      }
      default: return e;
    }
  }

  // head reduction to weak head normal form
  Expr whnf(Expr e, bool conv_mode) {
    for (;;) {
      switch (e->kind) {
        case Kind::App: {
          Expr f = whnf(e->kids[0], conv_mode);
          if (f.get() != e->kids[0].get()) e = rebuild(e, {f, e->kids[1]});
          break;
        }
        case Kind::SigElim: {
          Expr p = whnf(e->kids[3], conv_mode);
          if (p.get() != e->kids[3].get()) e = rebuild(e, {e->kids[0], e->kids[1], e->kids[2], p});
          break;
        }
        case Kind::J: {
          if (conv_mode && T_.truncated() && id_level(e->kids[0]) >= T_.level) break;
          Expr f = whnf(e->kids[5], conv_mode);
          if (f.get() != e->kids[5].get())
            e = rebuild(e, {e->kids[0], e->kids[1], e->kids[2], e->kids[3], e->kids[4], f});
          break;
        }
        case Kind::Rec: {
          Expr n = whnf(e->kids[0], conv_mode);
          if (n.get() != e->kids[0].get()) e = rebuild(e, {n, e->kids[1], e->kids[2]});
          break;
        }
        default: break;
      }
      if (!is_redex(e, conv_mode)) return e;
      e = contract(e);
    }
  }

  Expr nf(const Expr& e, bool conv_mode) {
    auto& cache = conv_mode ? cache_conv_ : cache_plain_;
    if (auto it = cache.find(e); it != cache.end()) return it->second;
    Expr h = whnf(e, conv_mode);
    Expr out;
    if (h->kids.empty()) {
      out = h;
    } else {
      std::vector<Expr> kids;
      kids.reserve(h->kids.size());
      std::vector<std::string> names;
      for (std::size_t c = 0; c < h->kids.size(); ++c) {
        int nb = binders_of(h->kind, c);
        if (nb == 0) {
          kids.push_back(nf(h->kids[c], conv_mode));
          continue;
        }
        std::vector<std::string> xs;
        std::vector<Expr> vs;
        for (int i = 0; i < nb; ++i) {
          xs.push_back(fresh_name("n"));
          vs.push_back(var(xs.back()));
        }
        kids.push_back(abstract(nf(instantiate(h->kids[c], vs), conv_mode), xs));
      }
      out = rebuild(h, std::move(kids));
    }
    if (conv_mode && !eq_rep_.empty()) {
      if (auto it = eq_rep_.find(out); it != eq_rep_.end()) out = it->second;
    }
    if (is_redex(out, conv_mode)) out = nf(contract(out), conv_mode);
    cache.emplace(e, out);
    return out;
  }

  // ---- checking helpers ----

  Expr infer_j(const Context& ctx, const Expr& e) {
    const Expr& A = e->kids[0];
    check_type(ctx, A);
    std::string x = fresh_name(e->hints.size() > 0 ? e->hints[0] : "x");
    std::string y = fresh_name(e->hints.size() > 1 ? e->hints[1] : "y");
    std::string z = fresh_name(e->hints.size() > 2 ? e->hints[2] : "z");
    Context cb = ctx.extend(x, A).extend(y, A).extend(z, id_type(A, var(x), var(y)));
    check_type(cb, open3(e->kids[1], var(x), var(y), var(z)));
    std::string w = fresh_name(e->hints.size() > 3 ? e->hints[3] : "x");
    Expr wv = var(w);
    check(ctx.extend(w, A), open1(e->kids[2], wv), open3(e->kids[1], wv, wv, refl(wv)));
    check(ctx, e->kids[3], A);
    check(ctx, e->kids[4], A);
    check(ctx, e->kids[5], id_type(A, e->kids[3], e->kids[4]));
    return open3(e->kids[1], e->kids[3], e->kids[4], e->kids[5]);
  }

  Expr sigma_of(const Expr& e) const { return make(Kind::Sigma, {e->kids[0], e->kids[1]}, {}, 0, {e->hints[0]}); }

  void check_sigelim(const Context& ctx, const Expr& e, const Expr& C) {
    Expr S = sigma_of(e);
    check_type(ctx, S);
    check(ctx, e->kids[3], S);
    Expr motive = abstract_subterm(C, e->kids[3]);
    check_psi(ctx, e, motive);
  }

  void check_psi(const Context& ctx, const Expr& e, const Expr& motive) {
    std::string x = fresh_name(e->hints[0]);
    std::string y = fresh_name(e->hints[1]);
    Context c2 = ctx.extend(x, e->kids[0]).extend(y, open1(e->kids[1], var(x)));
    check(c2, open2(e->kids[2], var(x), var(y)), instantiate(motive, {pair(var(x), var(y))}));
  }

  Expr infer_sigelim(const Context& ctx, const Expr& e) {
    Expr S = sigma_of(e);
    check_type(ctx, S);
    check(ctx, e->kids[3], S);
    std::string x = fresh_name(e->hints[0]);
    std::string y = fresh_name(e->hints[1]);
    Context c2 = ctx.extend(x, e->kids[0]).extend(y, open1(e->kids[1], var(x)));
    Expr C = infer(c2, open2(e->kids[2], var(x), var(y)));
    Expr motive = abstract_subterm(C, pair(var(x), var(y)));
    if (occurs_free(motive, x) || occurs_free(motive, y))
      throw TypeError("sigma-elim", e, "cannot infer the motive; annotate by checking against a type");
    return instantiate(motive, {e->kids[3]});
  }

  void check_rec_with(const Context& ctx, const Expr& e, const Expr& motive) {
    check(ctx, e->kids[1], instantiate(motive, {zero()}));
    std::string x = fresh_name(e->hints[0]);
    std::string y = fresh_name(e->hints[1]);
    Context c2 = ctx.extend(x, nat()).extend(y, instantiate(motive, {var(x)}));
    check(c2, open2(e->kids[2], var(x), var(y)), instantiate(motive, {succ(var(x))}));
  }

  // ---- truncation rule ----

  bool tr_related(const Context& ctx, const Expr& A, const Expr& x, const Expr& y) {
    std::vector<Expr> terms;
    std::unordered_map<Expr, std::size_t, ExprHash, ExprEq> ix;
    auto slot = [&](const Expr& e) {
      auto it = ix.find(e);
      if (it != ix.end()) return it->second;
      ix.emplace(e, terms.size());
      terms.push_back(e);
      return terms.size() - 1;
    };
    std::vector<std::pair<std::size_t, std::size_t>> links;
    auto offer = [&](const Expr& ty) {
      if (ty->kind != Kind::Id) return;
      if (!alpha_equal(conv_normal_type(ty->kids[0]), A)) return;
      links.push_back({slot(conv_normal(ty->kids[1])), slot(conv_normal(ty->kids[2]))});
    };
    for (auto& [n, ty] : ctx.decls) offer(conv_normal_type(ty));
    if (T_.gset)
      for (auto& c : T_.gset->cells())
        if (c.dim == id_level(A) + 1) offer(conv_normal_type(cell_type(c.name)));
    for (auto& q : T_.equations) offer(conv_normal_type(q.type));
    for (auto& h : hints_) offer(conv_normal_type(h.type));
    std::size_t ia = slot(x), ib = slot(y);
    UnionFind uf(terms.size());
    for (auto& [i, j] : links) uf.unite(i, j);
    return uf.find(ia) == uf.find(ib);
  }

  bool provided(const Context& ctx, const Expr& A, const Expr& x, const Expr& y) {
    if (provider_depth_ > 0) return false;
    ++provider_depth_;
    std::optional<Expr> p;
    try {
      p = T_.provider(T_, ctx, A, x, y);
    } catch (...) {
      p.reset();
    }
    bool ok = false;
    if (p) {
      Checker inner(T_, false);
      inner.hints_ = hints_;
      try {
        inner.check(ctx, *p, id_type(A, x, y));
        ok = true;
      } catch (const TypeError&) {
        ok = false;
      }
    }
    --provider_depth_;
    return ok;
  }

  // ---- structural comparison of normal forms ----

  bool structural(const Context& ctx, const Expr& a, const Expr& b, const Expr& A) {
    switch (A->kind) {
      case Kind::Pi:
        if (a->kind == Kind::Lam && b->kind == Kind::Lam) {
          std::string x = fresh_name(A->hints.empty() ? "x" : A->hints[0]);
          return conv(ctx.extend(x, A->kids[0]), open1(a->kids[1], var(x)), open1(b->kids[1], var(x)),
                      open1(A->kids[1], var(x)));
        }
        break;
      case Kind::Sigma:
        if (a->kind == Kind::Pair && b->kind == Kind::Pair)
          return conv(ctx, a->kids[0], b->kids[0], A->kids[0]) &&
                 conv(ctx, a->kids[1], b->kids[1], open1(A->kids[1], a->kids[0]));
        break;
      case Kind::Id:
        if (a->kind == Kind::Refl && b->kind == Kind::Refl) return conv(ctx, a->kids[0], b->kids[0], A->kids[0]);
        break;
      case Kind::Nat:
        if (a->kind == Kind::Succ && b->kind == Kind::Succ) return conv(ctx, a->kids[0], b->kids[0], nat());
        if (a->kind == Kind::Zero && b->kind == Kind::Zero) return true;
        break;
      default: break;
    }
    return neutral(ctx, a, b).has_value();
  }

  // Compares two neutral normal forms; returns their common type.
  std::optional<Expr> neutral(const Context& ctx, const Expr& a, const Expr& b) {
    if (a->kind != b->kind) return std::nullopt;
    switch (a->kind) {
      case Kind::FVar: {
        if (a->name != b->name) return std::nullopt;
        const Expr* t = ctx.lookup(a->name);
        if (!t) return std::nullopt;
        return *t;
      }
      case Kind::Basic:
        if (a->name != b->name || a->index != b->index) return std::nullopt;
        return basic_type(a);
      case Kind::App: {
        auto F = neutral(ctx, a->kids[0], b->kids[0]);
        if (!F || (*F)->kind != Kind::Pi) return std::nullopt;
        if (!conv(ctx, a->kids[1], b->kids[1], (*F)->kids[0])) return std::nullopt;
        return open1((*F)->kids[1], a->kids[1]);
      }
      case Kind::J: {
        const Expr& A = a->kids[0];
        if (!conv_type(ctx, A, b->kids[0])) return std::nullopt;
        std::string x = fresh_name("x"), y = fresh_name("y"), z = fresh_name("z");
        Context cb = ctx.extend(x, A).extend(y, A).extend(z, id_type(A, var(x), var(y)));
        if (!conv_type(cb, open3(a->kids[1], var(x), var(y), var(z)), open3(b->kids[1], var(x), var(y), var(z))))
          return std::nullopt;
        std::string w = fresh_name("w");
        Expr wv = var(w);
        if (!conv(ctx.extend(w, A), open1(a->kids[2], wv), open1(b->kids[2], wv), open3(a->kids[1], wv, wv, refl(wv))))
          return std::nullopt;
        if (!conv(ctx, a->kids[3], b->kids[3], A) || !conv(ctx, a->kids[4], b->kids[4], A)) return std::nullopt;
        Expr fty = id_type(A, a->kids[3], a->kids[4]);
        if (!conv(ctx, a->kids[5], b->kids[5], fty)) return std::nullopt;
        return open3(a->kids[1], a->kids[3], a->kids[4], a->kids[5]);
      }
      case Kind::SigElim:
      case Kind::Rec: {
        // no stored motive: compare the non-neutral parts syntactically
        const Expr& s1 = a->kind == Kind::Rec ? a->kids[0] : a->kids[3];
        const Expr& s2 = b->kind == Kind::Rec ? b->kids[0] : b->kids[3];
        if (!neutral(ctx, s1, s2)) return std::nullopt;
        for (std::size_t i = 0; i < a->kids.size(); ++i) {
          if (a->kids[i].get() == s1.get()) continue;
          if (!alpha_equal(a->kids[i], b->kids[i])) return std::nullopt;
        }
        try {
          return infer(ctx, a);
        } catch (const TypeError&) {
          return std::nullopt;
        }
      }
      default: return std::nullopt;
    }
  }
};

// ---- free-function API ----

inline CheckResult check_term(const Theory& T, const Context& ctx, const Expr& e, const Expr& A) {
  Checker k(T);
  CheckResult r;
  try {
    k.check_context(ctx);
    k.check_type(ctx, A);
    k.check(ctx, e, A);
    r.accepted = true;
    r.type = A;
  } catch (const TypeError& err) {
    r.rule = err.rule;
    r.subterm = err.subterm;
    r.message = err.what();
  } catch (const MissingCell& err) {
    r.rule = "basic-term";
    r.message = err.what();
  }
  return r;
}

inline CheckResult infer_type(const Theory& T, const Context& ctx, const Expr& e) {
  Checker k(T);
  CheckResult r;
  try {
    k.check_context(ctx);
    r.type = k.infer(ctx, e);
    r.accepted = true;
  } catch (const TypeError& err) {
    r.rule = err.rule;
    r.subterm = err.subterm;
    r.message = err.what();
  }
  return r;
}

inline Expr normalize(const Theory& T, const Context&, const Expr& e) {
  Checker k(T);
  return k.normalize(e);
}

inline bool def_equal(const Theory& T, const Context& ctx, const Expr& a, const Expr& b, const Expr& A,
                      const std::vector<Expr>& inhabitants = {}) {
  Checker k(T);
  for (auto& p : inhabitants) k.add_hint(ctx, p);
  return k.conv(ctx, a, b, A);
}

// ---- theory and judgement files ----

struct ParsedEquation {
  Expr lhs, rhs, type;
};

// "t : T" where ':' may also occur inside binders: take the first split that parses.
inline std::pair<Expr, Expr> parse_typed(const std::string& s) {
  int depth = 0;
  std::string err = "missing ':'";
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '>') --depth;
    if (c != ':' || depth != 0) continue;
    try {
      Expr t = parse_expression(s.substr(0, i));
      Expr A = parse_expression(s.substr(i + 1));
      return {t, A};
    } catch (const ParseError& e) {
      err = e.what();
    }
  }
  throw ParseError(0, "cannot split '" + s + "' into term and type (" + err + ")");
}

inline ParsedEquation parse_equation_text(const std::string& s) {
  auto parts = split_top(s, '=');
  if (parts.size() != 2) throw ParseError(0, "expected 'lhs = rhs : type'");
  auto [rhs, A] = parse_typed(parts[1]);
  return {parse_expression(parts[0]), rhs, A};
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline int parse_flavor(const std::string& s) {
  if (s == "omega") return kOmega;
  try {
    std::size_t used = 0;
    int n = std::stoi(s, &used);
    if (used == s.size() && n >= 0) return n;
  } catch (...) {
  }
  throw FormatError("bad flavor '" + s + "'");
}

// Checks the typing side conditions of the equations: closed, well typed,
// at an iterated identity type over the base type.
inline void validate_equations(const Theory& T) {
  Theory bare = T;
  bare.equations.clear();
  for (auto& q : T.equations) {
    if (!is_closed(q.lhs) || !is_closed(q.rhs)) throw TypeError("equation", q.lhs, "equation sides must be closed");
    const Node* t = q.type.get();
    while (t->kind == Kind::Id) t = t->kids[0].get();
    if (t->kind != Kind::Base) throw TypeError("equation", q.type, "equations live at iterated identity types over the base");
    auto r1 = check_term(bare, {}, q.lhs, q.type);
    if (!r1) throw TypeError("equation", q.lhs, r1.message);
    auto r2 = check_term(bare, {}, q.rhs, q.type);
    if (!r2) throw TypeError("equation", q.rhs, r2.message);
  }
}

inline Theory load_theory(const std::string& path) {
  std::istringstream in(read_file(path));
  Theory T;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos && line.rfind("eq", 0) != 0) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      std::istringstream ls(line);
      std::string a, b, f;
      ls >> a >> b >> f;
      if (a != "theory" || b != "v1" || f.rfind("flavor=", 0) != 0) throw FormatError("expected 'theory v1 flavor=...'");
      T.level = parse_flavor(f.substr(7));
      header = true;
      continue;
    }
    if (line.rfind("gset ", 0) == 0) {
      std::filesystem::path p = trim(line.substr(5));
      if (p.is_relative()) p = std::filesystem::path(path).parent_path() / p;
      T.gset = std::make_shared<const GlobularSet>(load_globular(p.string()));
      continue;
    }
    if (line.rfind("eq ", 0) == 0) {
      auto q = parse_equation_text(line.substr(3));
      T.equations.push_back({q.lhs, q.rhs, q.type});
      continue;
    }
    throw FormatError("unrecognised theory line: " + line);
  }
  if (!header) throw FormatError("missing theory header");
  validate_equations(T);
  return T;
}

inline Judgement parse_judgement_text(const std::string& text) {
  std::istringstream in(text);
  Judgement j;
  std::string line;
  bool done = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line == "ctx") continue;
    if (done) throw FormatError("text after the judgement line");
    if (line.rfind("var ", 0) == 0) {
      std::string rest = line.substr(4);
      auto c = rest.find(':');
      if (c == std::string::npos) throw FormatError("expected 'var x : T'");
      std::string x = trim(rest.substr(0, c));
      j.ctx.decls.emplace_back(x, parse_expression(rest.substr(c + 1)));
      continue;
    }
    if (line.rfind("check ", 0) == 0) {
      auto [t, A] = parse_typed(line.substr(6));
      j.kind = JudgementKind::TermTyping;
      j.lhs = t;
      j.type = A;
      done = true;
      continue;
    }
    if (line.rfind("eq ", 0) == 0) {
      auto q = parse_equation_text(line.substr(3));
      j.kind = JudgementKind::TermEquality;
      j.lhs = q.lhs;
      j.rhs = q.rhs;
      j.type = q.type;
      done = true;
      continue;
    }
    throw FormatError("unrecognised judgement line: " + line);
  }
  if (!done) throw FormatError("no 'check' or 'eq' line");
  return j;
}

// Free variables of the context are resolved to the declared names.
inline CheckResult check_judgement(const Theory& T, const Judgement& j) {
  if (j.kind == JudgementKind::TermTyping) return check_term(T, j.ctx, j.lhs, j.type);
  CheckResult r1 = check_term(T, j.ctx, j.lhs, j.type);
  if (!r1) return r1;
  CheckResult r2 = check_term(T, j.ctx, j.rhs, j.type);
  if (!r2) return r2;
  CheckResult r;
  r.accepted = def_equal(T, j.ctx, j.lhs, j.rhs, j.type);
  r.type = j.type;
  if (!r.accepted) {
    r.rule = "definitional-equality";
    r.subterm = j.lhs;
    r.message = "terms are not definitionally equal in the implemented fragment";
  }
  return r;
}

}  // namespace mlcx
