// Set and groupoid models of the theories T_n[G|E], the interpretation of
// closed and open terms, and the formal-composite reading of words.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "derived.hpp"
#include "globular.hpp"
#include "kernel.hpp"

namespace mlcx {

struct SemanticUnsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WordBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SemValue;
using SVal = std::shared_ptr<const SemValue>;
using MaybeArrow = std::optional<GroupoidArrow>;

enum class SemTag { Object, Arrow, Unit, Num, Pair, Fun };

struct SemFun {
  std::function<SVal(const SVal&)> obj;
  // action on a move old -> new of the argument (an arrow when the domain is G)
  std::function<GroupoidArrow(const SVal&, const SVal&, const MaybeArrow&)> arr;
  Expr domain;
};

struct SemValue {
  SemTag tag = SemTag::Unit;
  std::string vertex;
  GroupoidArrow arrow;
  long num = 0;
  SVal fst, snd;
  std::shared_ptr<const SemFun> fun;
};

inline SVal sem_object(std::string v) {
  auto s = std::make_shared<SemValue>();
  s->tag = SemTag::Object;
  s->vertex = std::move(v);
  return s;
}
inline SVal sem_arrow(GroupoidArrow a) {
  auto s = std::make_shared<SemValue>();
  s->tag = SemTag::Arrow;
  s->arrow = std::move(a);
  return s;
}
inline SVal sem_unit() {
  static const SVal u = std::make_shared<SemValue>();
  return u;
}
inline SVal sem_num(long n) {
  auto s = std::make_shared<SemValue>();
  s->tag = SemTag::Num;
  s->num = n;
  return s;
}
inline SVal sem_pair(SVal a, SVal b) {
  auto s = std::make_shared<SemValue>();
  s->tag = SemTag::Pair;
  s->fst = std::move(a);
  s->snd = std::move(b);
  return s;
}

using SemEnv = std::map<std::string, SVal>;
using Moves = std::map<std::string, MaybeArrow>;

enum class ModelMode { Set, Groupoid };

class Model {
 public:
  // Set mode for level-0 theories, groupoid mode otherwise. Equations of the
  // theory generate the congruence; `with_equations = false` gives the free model.
  explicit Model(const Theory& T, bool with_equations = true, std::size_t word_bound = 256)
      : d_(std::make_shared<Data>()) {
    d_->mode = T.level == 0 ? ModelMode::Set : ModelMode::Groupoid;
    d_->word_bound = word_bound;
    if (T.gset) {
      auto t1 = truncate(*T.gset, 1);
      d_->graph = t1.result;
      d_->cell_map = t1.cell_map;
    }
    d_->q = QuotientGroupoid(d_->graph, {}, {});
    build_set_classes({});
    if (with_equations && !T.equations.empty()) add_equations(T);
  }

  ModelMode mode() const { return d_->mode; }
  const QuotientGroupoid& groupoid() const { return d_->q; }
  const GlobularSet& graph() const { return d_->graph; }

  std::vector<std::string> objects() const {
    std::set<std::string> out;
    for (auto& v : d_->graph.of_dim(0)) out.insert(object_of(v));
    return {out.begin(), out.end()};
  }

  std::string object_of(const std::string& vertex) const {
    return d_->mode == ModelMode::Set ? d_->set_class.at(vertex) : d_->q.vertex_class(vertex);
  }

  SVal eval(const Expr& e, const SemEnv& env = {}) const {
    switch (e->kind) {
      case Kind::FVar: {
        auto it = env.find(e->name);
        if (it == env.end()) throw SemanticUnsupported("unbound variable " + e->name);
        return it->second;
      }
      case Kind::Basic: return eval_basic(e);
      case Kind::Zero: return sem_num(0);
      case Kind::Succ: {
        SVal n = eval(e->kids[0], env);
        return sem_num(n->num + 1);
      }
      case Kind::Refl: {
        SVal x = eval(e->kids[0], env);
        if (d_->mode == ModelMode::Groupoid && x->tag == SemTag::Object) return sem_arrow(identity_arrow(x->vertex));
        return sem_unit();
      }
      case Kind::Pair: return sem_pair(eval(e->kids[0], env), eval(e->kids[1], env));
      case Kind::Lam: return make_lambda(e, env);
      case Kind::App: {
        SVal f = eval(e->kids[0], env);
        if (f->tag != SemTag::Fun) throw SemanticUnsupported("application of a non-function");
        return f->fun->obj(eval(e->kids[1], env));
      }
      case Kind::SigElim: {
        SVal p = eval(e->kids[3], env);
        if (p->tag != SemTag::Pair) throw SemanticUnsupported("projection from a non-pair");
        auto [x, y] = fresh2();
        SemEnv e2 = env;
        e2[x] = p->fst;
        e2[y] = p->snd;
        return eval(open2(e->kids[2], var(x), var(y)), e2);
      }
      case Kind::Rec: {
        SVal n = eval(e->kids[0], env);
        SVal acc = eval(e->kids[1], env);
        auto [x, y] = fresh2();
        Expr body = open2(e->kids[2], var(x), var(y));
        for (long i = 0; i < n->num; ++i) {
          SemEnv e2 = env;
          e2[x] = sem_num(i);
          e2[y] = acc;
          acc = eval(body, e2);
        }
        return acc;
      }
      case Kind::J: return eval_j(e, env);
      default: throw SemanticUnsupported("cannot interpret a type as a value: " + print(e));
    }
  }

  // Transport of a value of B(old) to B(new) along the moves.
  SVal transport(const Expr& B, const SemEnv& old_env, const Moves& moves, const SemEnv& new_env, const SVal& v) const {
    if (d_->mode == ModelMode::Set) return v;
    if (!mentions(B, moves)) return v;
    switch (B->kind) {
      case Kind::Base:
      case Kind::Nat: return v;
      case Kind::Id: {
        if (B->kids[0]->kind != Kind::Base) return v;
        GroupoidArrow as = arrow_of(B->kids[1], old_env, moves, new_env);
        GroupoidArrow at = arrow_of(B->kids[2], old_env, moves, new_env);
        return sem_arrow(bounded(d_->q.compose(at, d_->q.compose(v->arrow, d_->q.inverse(as)))));
      }
      case Kind::Pi: {
        Expr D = B->kids[0], E = B->kids[1];
        const Model self = *this;
        auto fun = std::make_shared<SemFun>();
        Moves inv = invert(moves);
        std::string x = fresh_name("v");
        Expr Eo = open1(E, var(x));
        fun->domain = D;
        fun->obj = [=](const SVal& d2) {
          SVal d1 = self.transport(D, new_env, inv, old_env, d2);
          SVal r = v->fun->obj(d1);
          SemEnv o = old_env, n = new_env;
          o[x] = d1;
          n[x] = d2;
          Moves m = moves;
          m[x] = d2->tag == SemTag::Object ? MaybeArrow(identity_arrow(d2->vertex)) : std::nullopt;
          return self.transport(Eo, o, m, n, r);
        };
        fun->arr = [=](const SVal& a, const SVal& b, const MaybeArrow& al) {
          if (Eo->kind == Kind::Base) return v->fun->arr(a, b, al);
          throw SemanticUnsupported("arrow action of a transported dependent function");
        };
        auto s = std::make_shared<SemValue>();
        s->tag = SemTag::Fun;
        s->fun = fun;
        return s;
      }
      case Kind::Sigma: {
        Expr D = B->kids[0];
        std::string x = fresh_name("v");
        Expr Eo = open1(B->kids[1], var(x));
        SVal a2 = transport(D, old_env, moves, new_env, v->fst);
        SemEnv o = old_env, n = new_env;
        o[x] = v->fst;
        n[x] = a2;
        Moves m = moves;
        m[x] = a2->tag == SemTag::Object ? MaybeArrow(identity_arrow(a2->vertex)) : std::nullopt;
        return sem_pair(a2, transport(Eo, o, m, n, v->snd));
      }
      default: throw SemanticUnsupported("transport in type " + print(B));
    }
  }

  // The arrow ⟦e⟧(old) -> ⟦e⟧(new) for e : G as the moving variables move.
  GroupoidArrow arrow_of(const Expr& e, const SemEnv& old_env, const Moves& moves, const SemEnv& new_env) const {
    if (!mentions(e, moves)) return identity_arrow(as_object(eval(e, new_env)));
    switch (e->kind) {
      case Kind::FVar: {
        const MaybeArrow& a = moves.at(e->name);
        if (!a) throw SemanticUnsupported("no arrow for moving variable " + e->name);
        return *a;
      }
      case Kind::App: return arrow_of_app(e, old_env, moves, new_env);
      case Kind::J: {
        // over a constant family the section is phi(x) and moves with x
        if (!constant_motive(e)) throw SemanticUnsupported("arrow of a J-term over a non-constant family");
        return arrow_of(open1(e->kids[2], e->kids[3]), old_env, moves, new_env);
      }
      case Kind::SigElim: {
        const Expr& p = e->kids[3];
        if (p->kind == Kind::Pair) return arrow_of(open2(e->kids[2], p->kids[0], p->kids[1]), old_env, moves, new_env);
        throw SemanticUnsupported("arrow of a projection from a moving pair");
      }
      case Kind::Rec: {
        SVal n = eval(e->kids[0], new_env);
        GroupoidArrow acc = arrow_of(e->kids[1], old_env, moves, new_env);
        SVal vo = eval(e->kids[1], old_env), vn = eval(e->kids[1], new_env);
        auto [x, y] = fresh2();
        Expr body = open2(e->kids[2], var(x), var(y));
        for (long i = 0; i < n->num; ++i) {
          SemEnv o = old_env, nn = new_env;
          o[x] = nn[x] = sem_num(i);
          o[y] = vo;
          nn[y] = vn;
          Moves m = moves;
          m[y] = acc;
          acc = arrow_of(body, o, m, nn);
          vo = eval(body, o);
          vn = eval(body, nn);
        }
        return acc;
      }
      default: throw SemanticUnsupported("arrow of " + print(e));
    }
  }

  // ---- formal composites ----

  // Right-nested composite of basic cells for a reduced word; r(<a>) when empty.
  Expr phi(const GroupoidArrow& w) const {
    PathWord pw;
    for (auto& l : w.word) {
      std::string s = d_->graph.src(l.edge), t = d_->graph.tgt(l.edge);
      pw.push_back({basic(l.edge), basic(s), basic(t), l.inv});
    }
    return canonical_path(base(), basic(w.dom), pw);
  }

  // ---- printing and comparison ----

  std::string show(const SVal& v) const {
    switch (v->tag) {
      case SemTag::Object: return "[" + v->vertex + "]";
      case SemTag::Arrow: return arrow_string(v->arrow);
      case SemTag::Unit: return "*";
      case SemTag::Num: return std::to_string(v->num);
      case SemTag::Pair: return "(" + show(v->fst) + ", " + show(v->snd) + ")";
      case SemTag::Fun: {
        auto probes = fun_probes(v);
        if (probes.empty()) return "<fun>";
        std::string s = "{";
        for (std::size_t i = 0; i < probes.size(); ++i) {
          if (i) s += ", ";
          s += show(probes[i]) + " |-> ";
          try {
            s += show(v->fun->obj(probes[i]));
          } catch (const std::exception&) {
            s += "?";
          }
        }
        return s + "}";
      }
    }
    return "?";
  }

  bool same(const SVal& a, const SVal& b) const {
    if (a->tag != b->tag) return false;
    switch (a->tag) {
      case SemTag::Object: return a->vertex == b->vertex;
      case SemTag::Arrow: return d_->q.equal(a->arrow, b->arrow);
      case SemTag::Unit: return true;
      case SemTag::Num: return a->num == b->num;
      case SemTag::Pair: return same(a->fst, b->fst) && same(a->snd, b->snd);
      case SemTag::Fun:
        for (auto& p : fun_probes(a))
          if (!same(a->fun->obj(p), b->fun->obj(p))) return false;
        return true;
    }
    return false;
  }

  // Emptiness of a closed identity type in the model.
  bool inhabited(const Expr& A, const SemEnv& env = {}) const {
    if (A->kind != Kind::Id) return true;
    SVal s = eval(A->kids[1], env), t = eval(A->kids[2], env);
    if (A->kids[0]->kind == Kind::Base) {
      if (d_->mode == ModelMode::Set) return s->vertex == t->vertex;
      return d_->q.connected(s->vertex, t->vertex);
    }
    return same(s, t);
  }

  // A random environment for a context, or nullopt when some type is empty
  // or outside the supported shapes.
  std::optional<SemEnv> sample_env(const Context& ctx, std::mt19937& rng) const {
    SemEnv env;
    auto objs = objects();
    for (auto& [n, A] : ctx.decls) {
      switch (A->kind) {
        case Kind::Base: {
          if (objs.empty()) return std::nullopt;
          env[n] = sem_object(objs[std::uniform_int_distribution<std::size_t>(0, objs.size() - 1)(rng)]);
          break;
        }
        case Kind::Nat: env[n] = sem_num(std::uniform_int_distribution<long>(0, 3)(rng)); break;
        case Kind::Id: {
          if (!inhabited(A, env)) return std::nullopt;
          if (A->kids[0]->kind == Kind::Base && d_->mode == ModelMode::Groupoid) {
            std::string s = eval(A->kids[1], env)->vertex, t = eval(A->kids[2], env)->vertex;
            env[n] = sem_arrow(*d_->q.tree_arrow(s, t));
          } else {
            env[n] = sem_unit();
          }
          break;
        }
        default: return std::nullopt;
      }
    }
    return env;
  }

 private:
  void build_set_classes(const std::vector<std::pair<std::string, std::string>>& eqs) {
    auto vs = d_->graph.of_dim(0);
    std::map<std::string, std::size_t> ix;
    for (std::size_t i = 0; i < vs.size(); ++i) ix[vs[i]] = i;
    UnionFind uf(vs.size());
    for (auto& e : d_->graph.of_dim(1)) uf.unite(ix.at(d_->graph.src(e)), ix.at(d_->graph.tgt(e)));
    for (auto& [a, b] : eqs) uf.unite(ix.at(a), ix.at(b));
    std::map<std::size_t, std::string> rep;
    for (auto& v : vs) {
      auto r = uf.find(ix.at(v));
      if (!rep.count(r)) rep[r] = v;
      d_->set_class[v] = rep[r];
    }
  }

  void add_equations(const Theory& T) {
    std::vector<std::pair<std::string, std::string>> veqs;
    std::vector<std::pair<Word, Word>> rels;
    Model free(*this);
    free.d_ = std::make_shared<Data>(*d_);
    for (auto& eq : T.equations) {
      const Expr& ty = eq.type;
      if (ty->kind == Kind::Base) {
        SVal a = free.eval(eq.lhs), b = free.eval(eq.rhs);
        veqs.push_back({a->vertex, b->vertex});
      } else if (ty->kind == Kind::Id && ty->kids[0]->kind == Kind::Base && d_->mode == ModelMode::Groupoid) {
        SVal a = free.eval(eq.lhs), b = free.eval(eq.rhs);
        rels.push_back({a->arrow.word, b->arrow.word});
      }
    }
    build_set_classes(veqs);
    d_->q = QuotientGroupoid(d_->graph, veqs, rels);
  }

  static std::pair<std::string, std::string> fresh2() { return {fresh_name("x"), fresh_name("y")}; }

  static bool mentions(const Expr& e, const Moves& m) {
    if (m.empty()) return false;
    for (auto& v : free_vars(e))
      if (m.count(v)) return true;
    return false;
  }

  static Moves invert(const Moves& m) {
    Moves out;
    for (auto& [k, a] : m) out[k] = a ? MaybeArrow(inverse_arrow(*a)) : std::nullopt;
    return out;
  }

  GroupoidArrow bounded(GroupoidArrow a) const {
    if (a.word.size() > d_->word_bound) throw WordBoundExceeded("word longer than " + std::to_string(d_->word_bound));
    return a;
  }

  static std::string as_object(const SVal& v) {
    if (v->tag != SemTag::Object) throw SemanticUnsupported("expected an object of G");
    return v->vertex;
  }

  SVal eval_basic(const Expr& e) const {
    std::string name = d_->cell_map.count(e->name) ? d_->cell_map.at(e->name) : e->name;
    int k = 0;
    std::string b = degenerate_base(name, &k);
    int dim = d_->graph.dim(name) + e->index;
    if (dim == 0) return sem_object(object_of(b));
    if (d_->mode == ModelMode::Set || dim >= 2) return sem_unit();
    if (k + e->index > 0) return sem_arrow(identity_arrow(object_of(b)));
    GroupoidArrow a{object_of(d_->graph.src(name)), object_of(d_->graph.tgt(name)), {{name, false}}};
    return sem_arrow(d_->q.normalize(a));
  }

  SVal make_lambda(const Expr& e, const SemEnv& env) const {
    auto fun = std::make_shared<SemFun>();
    std::string x = fresh_name("x");
    Expr body = open1(e->kids[1], var(x));
    const Model self = *this;
    fun->domain = e->kids[0];
    fun->obj = [=](const SVal& d) {
      SemEnv e2 = env;
      e2[x] = d;
      return self.eval(body, e2);
    };
    fun->arr = [=](const SVal& a, const SVal& b, const MaybeArrow& al) {
      SemEnv o = env, n = env;
      o[x] = a;
      n[x] = b;
      return self.arrow_of(body, o, Moves{{x, al}}, n);
    };
    auto s = std::make_shared<SemValue>();
    s->tag = SemTag::Fun;
    s->fun = fun;
    return s;
  }

  SVal eval_j(const Expr& e, const SemEnv& env) const {
    const Expr& A = e->kids[0];
    std::string w = fresh_name("w");
    SemEnv ew = env;
    ew[w] = eval(e->kids[3], env);
    SVal base_val = eval(open1(e->kids[2], var(w)), ew);
    if (d_->mode == ModelMode::Set) return base_val;
    if (A->kind != Kind::Base) {
      if (A->kind == Kind::Id || A->kind == Kind::Nat) return base_val;
      throw SemanticUnsupported("J over a pattern type of shape " + print(A));
    }
    std::string x = fresh_name("x"), y = fresh_name("y"), z = fresh_name("z");
    Expr B = open3(e->kids[1], var(x), var(y), var(z));
    SVal a = ew[w], b = eval(e->kids[4], env), f = eval(e->kids[5], env);
    SemEnv o = env, n = env;
    o[x] = n[x] = a;
    o[y] = a;
    n[y] = b;
    o[z] = sem_arrow(identity_arrow(a->vertex));
    n[z] = f;
    Moves m{{y, f->arrow}, {z, std::nullopt}};
    return transport(B, o, m, n, base_val);
  }

  GroupoidArrow arrow_of_app(const Expr& e, const SemEnv& old_env, const Moves& moves, const SemEnv& new_env) const {
    std::vector<Expr> args;
    Expr h = e;
    while (h->kind == Kind::App) {
      args.push_back(h->kids[1]);
      h = h->kids[0];
    }
    std::reverse(args.begin(), args.end());
    if (h->kind == Kind::Lam) {
      Expr r = open1(h->kids[1], args[0]);
      for (std::size_t i = 1; i < args.size(); ++i) r = app(r, args[i]);
      return arrow_of(r, old_env, moves, new_env);
    }
    if (h->kind == Kind::J && constant_motive(h) && mentions(h, moves)) {
      Expr r = open1(h->kids[2], h->kids[3]);
      for (auto& a : args) r = app(r, a);
      return arrow_of(r, old_env, moves, new_env);
    }
    if (mentions(h, moves)) throw SemanticUnsupported("arrow of an application with a moving head");
    std::vector<SVal> ov, nv;
    for (auto& a : args) {
      ov.push_back(eval(a, old_env));
      nv.push_back(eval(a, new_env));
    }
    GroupoidArrow acc = identity_arrow(as_object(eval(e, old_env)));
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!mentions(args[i], moves)) continue;
      // move the i-th argument with the others held at their current values
      SemEnv base = new_env;
      std::vector<std::string> names;
      Expr body = h;
      std::string q = fresh_name("q");
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (j == i) {
          body = app(body, var(q));
          continue;
        }
        names.push_back(fresh_name("p"));
        base[names.back()] = j < i ? nv[j] : ov[j];
        body = app(body, var(names.back()));
      }
      SVal g = eval(lam(q, base_type_placeholder(), body), base);
      MaybeArrow al;
      if (ov[i]->tag == SemTag::Object) {
        al = arrow_of(args[i], old_env, moves, new_env);
      } else if (!same(ov[i], nv[i])) {
        throw SemanticUnsupported("moving argument outside G");
      }
      acc = d_->q.compose(g->fun->arr(ov[i], nv[i], al), acc);
    }
    return bounded(acc);
  }

  static Expr base_type_placeholder() { return base(); }

  // the motive of a J-term does not use its three bound variables
  static bool constant_motive(const Expr& j) {
    std::string x = fresh_name("x"), y = fresh_name("y"), z = fresh_name("z");
    Expr B = open3(j->kids[1], var(x), var(y), var(z));
    return !occurs_free(B, x) && !occurs_free(B, y) && !occurs_free(B, z);
  }

  std::vector<SVal> fun_probes(const SVal& v) const {
    std::vector<SVal> out;
    const Expr& D = v->fun->domain;
    if (!D) return out;
    if (D->kind == Kind::Base)
      for (auto& o : objects()) out.push_back(sem_object(o));
    if (D->kind == Kind::Nat)
      for (long i = 0; i < 4; ++i) out.push_back(sem_num(i));
    return out;
  }

  struct Data {
    ModelMode mode = ModelMode::Groupoid;
    std::size_t word_bound = 256;
    GlobularSet graph;
    std::map<std::string, std::string> cell_map;
    QuotientGroupoid q;
    std::map<std::string, std::string> set_class;
  };
  std::shared_ptr<Data> d_;
};

// Interpretation of a closed term in the free groupoid model.
inline SVal psi(const Theory& T, const Expr& e) {
  Theory t = T;
  if (t.level == 0) t.level = 1;
  return Model(t, false).eval(e);
}

// Kernel-accepted judgement interprets, with equal sides for equalities.
inline bool soundness_probe(const Theory& T, const Judgement& j, std::mt19937& rng) {
  Model m(T);
  auto env = m.sample_env(j.ctx, rng);
  if (!env) return true;
  switch (j.kind) {
    case JudgementKind::TypeFormation:
    case JudgementKind::TypeEquality: return true;
    case JudgementKind::TermTyping: m.eval(j.lhs, *env); return true;
    case JudgementKind::TermEquality: return m.same(m.eval(j.lhs, *env), m.eval(j.rhs, *env));
  }
  return false;
}

}  // namespace mlcx
