// Derived constructions: path algebra on identity types, doppelgangers,
// context actions, shrink/expand, transition terms, and the propositional
// equalities relating them. Every builder returns plain Expressions; callers
// check them with the kernel.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kernel.hpp"

namespace mlcx {

struct WitnessedTerm {
  Expr subject, type;
  Expr witness, witness_type;  // witness : witness_type = Id(type, subject, partner) or reversed
};

namespace detail {

using X = const Expr&;

template <class FB, class FP>
Expr make_j(const Expr& A, FB B, FP phi, Expr a, Expr b, Expr f) {
  std::string x = fresh_name("x"), y = fresh_name("y"), z = fresh_name("z"), w = fresh_name("x");
  return jelim(x, y, z, A, B(var(x), var(y), var(z)), w, phi(var(w)), std::move(a), std::move(b), std::move(f));
}
template <class F>
Expr make_lam(const std::string& hint, const Expr& A, F body) {
  std::string x = fresh_name(hint);
  return lam(x, A, body(var(x)));
}
template <class F>
Expr make_pi(const std::string& hint, const Expr& A, F body) {
  std::string x = fresh_name(hint);
  return pi(x, A, body(var(x)));
}

inline bool has_loose(const Expr& e, int depth = 0) {
  if (e->kind == Kind::BVar) return e->index >= depth;
  for (std::size_t i = 0; i < e->kids.size(); ++i)
    if (has_loose(e->kids[i], depth + binders_of(e->kind, i))) return true;
  return false;
}

inline Expr apps(Expr f, const std::vector<Expr>& args) {
  for (auto& a : args) f = app(f, a);
  return f;
}

}  // namespace detail

// ---- path algebra ----

// f^-1 : Id(A, b, a) for f : Id(A, a, b)
inline Expr inverse(const Expr& A, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  return detail::make_j(
      A, [&](X x, X y, X) { return id_type(A, y, x); }, [](X w) { return refl(w); }, a, b, f);
}

// (g . f) : Id(A, a, c) for f : Id(A, a, b), g : Id(A, b, c)
inline Expr compose(const Expr& A, const Expr& a, const Expr& b, const Expr& c, const Expr& f, const Expr& g) {
  using detail::X;
  Expr j = detail::make_j(
      A, [&](X x, X y, X) { return detail::make_pi("v", id_type(A, a, x), [&](X) { return id_type(A, a, y); }); },
      [&](X w) { return detail::make_lam("v", id_type(A, a, w), [](X v) { return v; }); }, b, c, g);
  return app(j, f);
}

struct InverseParts {
  Expr A, a, b, f;
};
struct ComposeParts {
  Expr A, a, b, c, f, g;
};

inline std::optional<InverseParts> match_inverse(const Expr& e) {
  if (e->kind != Kind::J) return std::nullopt;
  const auto& k = e->kids;
  if (!alpha_equal(inverse(k[0], k[3], k[4], k[5]), e)) return std::nullopt;
  return InverseParts{k[0], k[3], k[4], k[5]};
}

inline std::optional<ComposeParts> match_compose(const Expr& e) {
  if (e->kind != Kind::App || e->kids[0]->kind != Kind::J) return std::nullopt;
  const Expr& j = e->kids[0];
  const Expr& B = j->kids[1];
  if (B->kind != Kind::Pi || B->kids[0]->kind != Kind::Id) return std::nullopt;
  Expr a = B->kids[0]->kids[1];
  if (detail::has_loose(a)) return std::nullopt;
  const auto& k = j->kids;
  if (!alpha_equal(compose(k[0], a, k[3], k[4], e->kids[1], k[5]), e)) return std::nullopt;
  return ComposeParts{k[0], a, k[3], k[4], e->kids[1], k[5]};
}

// Groupoid laws as explicit J-terms. Each comment gives the witnessed type.

// Id(Id(A,a,b), f . r(a), f)
inline Expr right_unit(const Expr& A, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  return detail::make_j(
      A, [&](X x, X y, X z) { return id_type(id_type(A, x, y), compose(A, x, x, y, refl(x), z), z); },
      [](X w) { return refl(refl(w)); }, a, b, f);
}

// Id(Id(A,a,d), h.(g.f), (h.g).f)
inline Expr assoc(const Expr& A, const Expr& a, const Expr& b, const Expr& c, const Expr& d, const Expr& f,
                  const Expr& g, const Expr& h) {
  using detail::X;
  Expr j = detail::make_j(
      A,
      [&](X x, X y, X z) {
        return detail::make_pi("g", id_type(A, b, x), [&](X g2) {
          return id_type(id_type(A, a, y), compose(A, a, x, y, compose(A, a, b, x, f, g2), z),
                         compose(A, a, b, y, f, compose(A, b, x, y, g2, z)));
        });
      },
      [&](X w) { return detail::make_lam("g", id_type(A, b, w), [&](X g2) { return refl(compose(A, a, b, w, f, g2)); }); },
      c, d, h);
  return app(j, g);
}

// Id(Id(A,c,a), (g.f)^-1, f^-1 . g^-1)
inline Expr inverse_of_compose(const Expr& A, const Expr& a, const Expr& b, const Expr& c, const Expr& f,
                               const Expr& g) {
  using detail::X;
  Expr j = detail::make_j(
      A,
      [&](X x, X y, X z) {
        return detail::make_pi("f", id_type(A, a, x), [&](X f2) {
          return id_type(id_type(A, y, a), inverse(A, a, y, compose(A, a, x, y, f2, z)),
                         compose(A, y, x, a, inverse(A, x, y, z), inverse(A, a, x, f2)));
        });
      },
      [&](X w) {
        return detail::make_lam("f", id_type(A, a, w), [&](X f2) {
          Expr fi = inverse(A, a, w, f2);
          Expr ru = right_unit(A, w, a, fi);
          return inverse(id_type(A, w, a), compose(A, w, w, a, refl(w), fi), fi, ru);
        });
      },
      b, c, g);
  return app(j, f);
}

// Id(Id(A,a,b), (f^-1)^-1, f)
inline Expr inverse_inverse(const Expr& A, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  return detail::make_j(
      A, [&](X x, X y, X z) { return id_type(id_type(A, x, y), inverse(A, y, x, inverse(A, x, y, z)), z); },
      [](X w) { return refl(refl(w)); }, a, b, f);
}

// Id(Id(A,a,a), f^-1 . f, r(a))
inline Expr cancel_left(const Expr& A, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  return detail::make_j(
      A, [&](X x, X y, X z) { return id_type(id_type(A, x, x), compose(A, x, y, x, z, inverse(A, x, y, z)), refl(x)); },
      [](X w) { return refl(refl(w)); }, a, b, f);
}

// Id(Id(A,b,b), f . f^-1, r(b))
inline Expr cancel_right(const Expr& A, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  return detail::make_j(
      A, [&](X x, X y, X z) { return id_type(id_type(A, y, y), compose(A, y, x, y, inverse(A, x, y, z), z), refl(y)); },
      [](X w) { return refl(refl(w)); }, a, b, f);
}

// w : Id(Id(A,a,b), u, u')  gives  Id(Id(A,b,a), u^-1, u'^-1)
inline Expr ap_inverse(const Expr& A, const Expr& a, const Expr& b, const Expr& u, const Expr& u2, const Expr& w) {
  using detail::X;
  return detail::make_j(
      id_type(A, a, b), [&](X x, X y, X) { return id_type(id_type(A, b, a), inverse(A, a, b, x), inverse(A, a, b, y)); },
      [&](X v) { return refl(inverse(A, a, b, v)); }, u, u2, w);
}

// w : Id(Id(A,a,b), f, f')  gives  Id(Id(A,a,c), g.f, g.f')
inline Expr ap_right(const Expr& A, const Expr& a, const Expr& b, const Expr& c, const Expr& f, const Expr& f2,
                     const Expr& w, const Expr& g) {
  using detail::X;
  return detail::make_j(
      id_type(A, a, b),
      [&](X x, X y, X) { return id_type(id_type(A, a, c), compose(A, a, b, c, x, g), compose(A, a, b, c, y, g)); },
      [&](X v) { return refl(compose(A, a, b, c, v, g)); }, f, f2, w);
}

// w : Id(Id(A,b,c), g, g')  gives  Id(Id(A,a,c), g.f, g'.f)
inline Expr ap_left(const Expr& A, const Expr& a, const Expr& b, const Expr& c, const Expr& g, const Expr& g2,
                    const Expr& w, const Expr& f) {
  using detail::X;
  return detail::make_j(
      id_type(A, b, c),
      [&](X x, X y, X) { return id_type(id_type(A, a, c), compose(A, a, b, c, f, x), compose(A, a, b, c, f, y)); },
      [&](X v) { return refl(compose(A, a, b, c, f, v)); }, g, g2, w);
}

// Symmetry and transitivity of propositional equality over a type C.
inline Expr sym(const Expr& C, const Expr& s, const Expr& t, const Expr& w) { return inverse(C, s, t, w); }
inline Expr trans(const Expr& C, const Expr& s, const Expr& t, const Expr& u, const Expr& w1, const Expr& w2) {
  return compose(C, s, t, u, w1, w2);
}

// ---- congruence ----

// f : Id(P, tau, tau') with P = Pi v:S. T  gives  Id(T(sigma), app(tau,sigma), app(tau',sigma))
inline Expr app_congruence(const Expr& P, const Expr& tau, const Expr& tau2, const Expr& f, const Expr& sigma) {
  using detail::X;
  Expr Ts = open1(P->kids[1], sigma);
  return detail::make_j(
      P, [&](X x, X y, X) { return id_type(Ts, app(x, sigma), app(y, sigma)); },
      [&](X w) { return refl(app(w, sigma)); }, tau, tau2, f);
}

// f : Id(S, sigma, sigma'), tau : S -> T (T constant)  gives  Id(T, app(tau,sigma), app(tau,sigma'))
inline Expr app_congruence_arg(const Expr& S, const Expr& T, const Expr& tau, const Expr& sigma, const Expr& sigma2,
                               const Expr& f) {
  using detail::X;
  return detail::make_j(
      S, [&](X x, X y, X) { return id_type(T, app(tau, x), app(tau, y)); }, [&](X w) { return refl(app(tau, w)); },
      sigma, sigma2, f);
}

// ---- doppelgangers ----

inline WitnessedTerm doppelganger(const Expr& tau, const Expr& T, const Expr& A, const Expr& a, const Expr& b,
                                  const Expr& f) {
  using detail::X;
  auto dop = [&](X x, X y, X z) { return detail::make_j(A, [&](X, X, X) { return T; }, [&](X) { return tau; }, x, y, z); };
  WitnessedTerm r;
  r.subject = dop(a, b, f);
  r.type = T;
  r.witness = detail::make_j(
      A, [&](X x, X y, X z) { return id_type(T, tau, dop(x, y, z)); }, [&](X) { return refl(tau); }, a, b, f);
  r.witness_type = id_type(T, tau, r.subject);
  return r;
}

inline Expr sharp_term(const Expr& G, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  return detail::make_j(G, [&](X, X, X) { return G; }, [](X w) { return w; }, a, b, f);
}

// f# with witnesses f# = a (first) and f# = b (second)
inline std::pair<WitnessedTerm, WitnessedTerm> sharp(const Expr& G, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  WitnessedTerm l, r;
  l.subject = r.subject = sharp_term(G, a, b, f);
  l.type = r.type = G;
  l.witness = detail::make_j(
      G, [&](X x, X y, X z) { return id_type(G, sharp_term(G, x, y, z), x); }, [](X w) { return refl(w); }, a, b, f);
  l.witness_type = id_type(G, l.subject, a);
  r.witness = detail::make_j(
      G, [&](X x, X y, X z) { return id_type(G, sharp_term(G, x, y, z), y); }, [](X w) { return refl(w); }, a, b, f);
  r.witness_type = id_type(G, r.subject, b);
  return {l, r};
}

inline Expr flat_term(const Expr& G, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  return detail::make_j(G, [&](X x, X y, X) { return id_type(G, x, y); }, [](X w) { return refl(w); }, a, b, f);
}

// f-flat with witness f-flat = f
inline WitnessedTerm flat(const Expr& G, const Expr& a, const Expr& b, const Expr& f) {
  using detail::X;
  WitnessedTerm r;
  r.subject = flat_term(G, a, b, f);
  r.type = id_type(G, a, b);
  r.witness = detail::make_j(
      G, [&](X x, X y, X z) { return id_type(id_type(G, x, y), flat_term(G, x, y, z), z); },
      [](X w) { return refl(refl(w)); }, a, b, f);
  r.witness_type = id_type(r.type, r.subject, f);
  return r;
}

// ---- dependent sums ----

inline Expr sigma_elim(const Expr& S, const Expr& psi_body2, const Expr& p) {
  return make(Kind::SigElim, {S->kids[0], S->kids[1], psi_body2, p}, {}, 0, {S->hints.empty() ? "x" : S->hints[0], "y"});
}
// pi0(p) : A and pi1(p) : B(pi0(p)) for p : S = Sigma x:A. B
inline std::pair<Expr, Expr> projections(const Expr& S, const Expr& p) {
  return {sigma_elim(S, bvar(1), p), sigma_elim(S, bvar(0), p)};
}
// Id(S, pair(pi0 alpha, pi1 alpha), alpha)
inline Expr eta_pair_witness(const Expr& S, const Expr& alpha) {
  return sigma_elim(S, refl(pair(bvar(1), bvar(0))), alpha);
}
inline Expr eta_pair_type(const Expr& S, const Expr& alpha) {
  auto [p0, p1] = projections(S, alpha);
  return id_type(S, pair(p0, p1), alpha);
}

// ---- truncation consequences ----

// For a : A' (an iterated identity type of level n) and a loop p : Id(A', a, a),
// the K-style term of type Id(Id(A',a,a), p, r(a)). Its motive is well formed
// only when the truncation rule identifies x and y.
inline Expr oup_witness(const Expr& Ap, const Expr& a, const Expr& p) {
  using detail::X;
  return detail::make_j(
      Ap, [&](X x, X y, X z) { return id_type(id_type(Ap, x, y), z, refl(x)); }, [](X w) { return refl(refl(w)); }, a, a,
      p);
}

inline CheckResult oup_check(const Theory& T, const Expr& Ap, const Expr& a, const Expr& p) {
  Expr w = oup_witness(Ap, a, p);
  Expr ty = id_type(id_type(Ap, a, a), p, refl(a));
  CheckResult r = check_term(T, {}, w, ty);
  if (!r.accepted) return r;
  r.accepted = def_equal(T, {}, p, refl(a), id_type(Ap, a, a), {w});
  if (!r.accepted) r.message = "witness checks but p = r(a) was not accepted";
  return r;
}

// Two terms of an identity type one level above the truncation are equal.
inline CheckResult uip_equation(const Theory& T, const Expr& type, const Expr& a, const Expr& b) {
  CheckResult r = check_term(T, {}, a, type);
  if (!r.accepted) return r;
  r = check_term(T, {}, b, type);
  if (!r.accepted) return r;
  r.accepted = def_equal(T, {}, a, b, type);
  if (!r.accepted) r.message = "terms not identified";
  return r;
}

// ---- transport ----

// fam is a one-binder body T(x); result app(J(lam v.v, a, b, f), tau) : T(b)
inline Expr transport(const Expr& A, const Expr& fam, const Expr& a, const Expr& b, const Expr& f, const Expr& tau) {
  using detail::X;
  Expr j = detail::make_j(
      A, [&](X x, X y, X) { return arrow(open1(fam, x), open1(fam, y)); },
      [&](X w) { return detail::make_lam("v", open1(fam, w), [](X v) { return v; }); }, a, b, f);
  return app(j, tau);
}

// For constant T: Id(T, tau, transport(tau))
inline Expr constant_transport_witness(const Expr& A, const Expr& T, const Expr& a, const Expr& b, const Expr& f,
                                       const Expr& tau) {
  using detail::X;
  Expr fam = T;  // no loose variables: a valid one-binder body
  Expr j = detail::make_j(
      A,
      [&](X x, X y, X z) {
        return detail::make_pi("v", T, [&](X v) { return id_type(T, v, transport(A, fam, x, y, z, v)); });
      },
      [&](X) { return detail::make_lam("v", T, [](X v) { return refl(v); }); }, a, b, f);
  return app(j, tau);
}

// ---- context actions ----

enum class Chi { Identity, Swap, Const0, Const1 };

inline std::string chi_name(Chi c) {
  switch (c) {
    case Chi::Identity: return "id";
    case Chi::Swap: return "swap";
    case Chi::Const0: return "const0";
    case Chi::Const1: return "const1";
  }
  return "?";
}

// (x0, x1 : A, z : Id(A, x0, x1), v1 : B1, ..., vn : Bn), each Bi over x0, x1, z, v1..v(i-1)
// and any variables of `outer`.
struct DeltaContext {
  Context outer;
  Expr A;
  std::string x0 = "x0", x1 = "x1", z = "z";
  std::vector<std::pair<std::string, Expr>> entries;

  std::size_t size() const { return entries.size(); }

  // B_k (1-based) at the given prefix arguments
  Expr B(std::size_t k, const Expr& a0, const Expr& a1, const Expr& f, const std::vector<Expr>& vs) const {
    std::map<std::string, Expr> m{{x0, a0}, {x1, a1}, {z, f}};
    for (std::size_t i = 0; i + 1 < k && i < vs.size(); ++i) m[entries[i].first] = vs[i];
    return subst_many(entries[k - 1].second, m);
  }

  Context as_context() const {
    Context c = outer;
    c = c.extend(x0, A).extend(x1, A).extend(z, id_type(A, var(x0), var(x1)));
    for (auto& [n, t] : entries) c = c.extend(n, t);
    return c;
  }
  std::vector<Expr> entry_vars() const {
    std::vector<Expr> out;
    for (auto& e : entries) out.push_back(var(e.first));
    return out;
  }
};

struct ChiArgs {
  Expr a0, a1, f;
};

inline ChiArgs chi_args(const Expr& A, Chi chi, const Expr& x, const Expr& y, const Expr& z) {
  switch (chi) {
    case Chi::Identity: return {x, y, z};
    case Chi::Swap: return {y, x, inverse(A, x, y, z)};
    case Chi::Const0: return {x, x, refl(x)};
    case Chi::Const1: return {y, y, refl(y)};
  }
  return {x, y, z};
}

inline DeltaContext context_action(const DeltaContext& d, Chi chi) {
  DeltaContext out;
  out.outer = d.outer;
  out.A = d.A;
  out.x0 = d.x0;
  out.x1 = d.x1;
  out.z = d.z;
  ChiArgs c = chi_args(d.A, chi, var(d.x0), var(d.x1), var(d.z));
  std::vector<Expr> ws;
  for (std::size_t k = 1; k <= d.size(); ++k) {
    std::string w = "w" + std::to_string(k);
    while (d.outer.has(w) || w == d.x0 || w == d.x1 || w == d.z) w += "_";
    out.entries.push_back({w, d.B(k, c.a0, c.a1, c.f, ws)});
    ws.push_back(var(w));
  }
  return out;
}

// shrink and expand as open terms; component k lives in Delta (resp. Delta_chi)
// and mentions x0, x1, z and the first k entry variables.
class ContextMorphisms {
 public:
  ContextMorphisms(DeltaContext d, Chi chi) : d_(std::move(d)), chi_(chi), dc_(context_action(d_, chi)) {
    for (std::size_t k = 1; k <= d_.size(); ++k) shrink_.push_back(build(k, true));
    for (std::size_t k = 1; k <= d_.size(); ++k) expand_.push_back(build(k, false));
  }

  const DeltaContext& delta() const { return d_; }
  const DeltaContext& delta_chi() const { return dc_; }
  Chi chi() const { return chi_; }

  const Expr& shrink_open(std::size_t k) const { return shrink_.at(k - 1); }
  const Expr& expand_open(std::size_t k) const { return expand_.at(k - 1); }

  // Substitution instances: args fill v1..vk (shrink) or w1..wk (expand).
  Expr shrink(std::size_t k, const Expr& a0, const Expr& a1, const Expr& f, const std::vector<Expr>& args) const {
    return subst_many(shrink_open(k), sub(d_, a0, a1, f, args));
  }
  Expr expand(std::size_t k, const Expr& a0, const Expr& a1, const Expr& f, const std::vector<Expr>& args) const {
    return subst_many(expand_open(k), sub(dc_, a0, a1, f, args));
  }
  // Types of the instances.
  Expr shrink_type(std::size_t k, const Expr& a0, const Expr& a1, const Expr& f, const std::vector<Expr>& args) const {
    ChiArgs c = chi_args(d_.A, chi_, a0, a1, f);
    std::vector<Expr> s;
    for (std::size_t j = 1; j < k; ++j) s.push_back(shrink(j, a0, a1, f, args));
    return d_.B(k, c.a0, c.a1, c.f, s);
  }
  Expr expand_type(std::size_t k, const Expr& a0, const Expr& a1, const Expr& f, const std::vector<Expr>& args) const {
    std::vector<Expr> e;
    for (std::size_t j = 1; j < k; ++j) e.push_back(expand(j, a0, a1, f, args));
    return d_.B(k, a0, a1, f, e);
  }

  // kappa(f) : C(a0,a1,f) and nu(f) : C'(a0,a1,f) for the last entry.
  Expr kappa(const Expr& a0, const Expr& a1, const Expr& f) const { return transition(a0, a1, f, true); }
  Expr nu(const Expr& a0, const Expr& a1, const Expr& f) const { return transition(a0, a1, f, false); }
  Expr kappa_type(const Expr& a0, const Expr& a1, const Expr& f) const { return transition_type(a0, a1, f, true); }
  Expr nu_type(const Expr& a0, const Expr& a1, const Expr& f) const { return transition_type(a0, a1, f, false); }

 private:
  static std::map<std::string, Expr> sub(const DeltaContext& d, const Expr& a0, const Expr& a1, const Expr& f,
                                         const std::vector<Expr>& args) {
    std::map<std::string, Expr> m{{d.x0, a0}, {d.x1, a1}, {d.z, f}};
    for (std::size_t i = 0; i < args.size() && i < d.size(); ++i) m[d.entries[i].first] = args[i];
    return m;
  }

  // Pi u1..u(k-1). (dom(u) -> cod(u)) where the u's range over the entries of `src`.
  template <class F>
  Expr tower(const DeltaContext& src, std::size_t k, const Expr& x, const Expr& y, const Expr& zz, F arrow_of) const {
    std::vector<std::string> names;
    std::vector<Expr> us;
    std::vector<Expr> doms;
    for (std::size_t j = 1; j < k; ++j) {
      doms.push_back(src.B(j, x, y, zz, us));
      names.push_back(fresh_name("v"));
      us.push_back(var(names.back()));
    }
    Expr body = arrow_of(us);
    for (std::size_t j = k - 1; j >= 1; --j) body = pi(names[j - 1], doms[j - 1], body);
    return body;
  }

  template <class F>
  Expr lambdas(const DeltaContext& src, std::size_t k, const Expr& w, F last) const {
    std::vector<std::string> names;
    std::vector<Expr> us, doms;
    for (std::size_t j = 1; j < k; ++j) {
      doms.push_back(src.B(j, w, w, refl(w), us));
      names.push_back(fresh_name("v"));
      us.push_back(var(names.back()));
    }
    Expr body = last(us);
    for (std::size_t j = k - 1; j >= 1; --j) body = lam(names[j - 1], doms[j - 1], body);
    return body;
  }

  Expr build(std::size_t k, bool is_shrink) const {
    using detail::X;
    const DeltaContext& src = is_shrink ? d_ : dc_;
    auto comps = [&](X x, X y, X zz, const std::vector<Expr>& us) {
      std::vector<Expr> out;
      for (std::size_t j = 1; j < k; ++j) {
        std::vector<Expr> pre(us.begin(), us.begin() + static_cast<long>(j));
        out.push_back(is_shrink ? shrink(j, x, y, zz, pre) : expand(j, x, y, zz, pre));
      }
      return out;
    };
    auto target = [&](X x, X y, X zz, const std::vector<Expr>& us) {
      auto cs = comps(x, y, zz, us);
      if (is_shrink) {
        ChiArgs c = chi_args(d_.A, chi_, x, y, zz);
        return d_.B(k, c.a0, c.a1, c.f, cs);
      }
      return d_.B(k, x, y, zz, cs);
    };
    auto source = [&](X x, X y, X zz, const std::vector<Expr>& us) {
      if (is_shrink) return d_.B(k, x, y, zz, us);
      ChiArgs c = chi_args(d_.A, chi_, x, y, zz);
      return d_.B(k, c.a0, c.a1, c.f, us);
    };
    Expr j = detail::make_j(
        d_.A,
        [&](X x, X y, X zz) {
          return tower(src, k, x, y, zz, [&](const std::vector<Expr>& us) {
            return arrow(source(x, y, zz, us), target(x, y, zz, us));
          });
        },
        [&](X w) {
          return lambdas(src, k, w, [&](const std::vector<Expr>& us) {
            return detail::make_lam("v", source(w, w, refl(w), us), [](X v) { return v; });
          });
        },
        var(d_.x0), var(d_.x1), var(d_.z));
    std::vector<Expr> args;
    for (std::size_t j = 0; j < k; ++j) args.push_back(var(src.entries[j].first));
    return detail::apps(j, args);
  }

  // expand(shrink(v)) for kappa, shrink(expand(w)) for nu, first k-1 components
  std::vector<Expr> round_trip(const Expr& x, const Expr& y, const Expr& zz, const std::vector<Expr>& us,
                               bool for_kappa) const {
    std::vector<Expr> inner;
    for (std::size_t j = 1; j <= us.size(); ++j) {
      std::vector<Expr> pre(us.begin(), us.begin() + static_cast<long>(j));
      inner.push_back(for_kappa ? shrink(j, x, y, zz, pre) : expand(j, x, y, zz, pre));
    }
    std::vector<Expr> outer;
    for (std::size_t j = 1; j <= us.size(); ++j) {
      std::vector<Expr> pre(inner.begin(), inner.begin() + static_cast<long>(j));
      outer.push_back(for_kappa ? expand(j, x, y, zz, pre) : shrink(j, x, y, zz, pre));
    }
    return outer;
  }

  Expr transition_motive(const Expr& x, const Expr& y, const Expr& zz, bool for_kappa) const {
    std::size_t n = d_.size();
    const DeltaContext& src = for_kappa ? d_ : dc_;
    return tower(src, n, x, y, zz, [&](const std::vector<Expr>& us) {
      auto rt = round_trip(x, y, zz, us, for_kappa);
      if (for_kappa) return arrow(d_.B(n, x, y, zz, rt), d_.B(n, x, y, zz, us));
      ChiArgs c = chi_args(d_.A, chi_, x, y, zz);
      return arrow(d_.B(n, c.a0, c.a1, c.f, rt), d_.B(n, c.a0, c.a1, c.f, us));
    });
  }

  Expr transition(const Expr& a0, const Expr& a1, const Expr& f, bool for_kappa) const {
    using detail::X;
    std::size_t n = d_.size();
    const DeltaContext& src = for_kappa ? d_ : dc_;
    return detail::make_j(
        d_.A, [&](X x, X y, X zz) { return transition_motive(x, y, zz, for_kappa); },
        [&](X w) {
          return lambdas(src, n, w, [&](const std::vector<Expr>& us) {
            auto rt = round_trip(w, w, refl(w), us, for_kappa);
            Expr dom = for_kappa ? d_.B(n, w, w, refl(w), rt) : src.B(n, w, w, refl(w), rt);
            return detail::make_lam("v", dom, [](X v) { return v; });
          });
        },
        a0, a1, f);
  }

  Expr transition_type(const Expr& a0, const Expr& a1, const Expr& f, bool for_kappa) const {
    return transition_motive(a0, a1, f, for_kappa);
  }

  DeltaContext d_;
  Chi chi_;
  DeltaContext dc_;
  std::vector<Expr> shrink_, expand_;
};

// ---- decomposition of J-terms ----

struct Decomposition {
  Expr left, left_type;    // expand0_f(phi(a)) = J(phi, a, b, f)
  Expr right, right_type;  // J(phi, a, b, f) = expand1_f(phi(b))
};

inline Decomposition decompose_j(const Expr& j) {
  using detail::X;
  if (j->kind != Kind::J) throw std::invalid_argument("decompose_j expects a J-term");
  const Expr& A = j->kids[0];
  auto B = [&](X x, X y, X z) { return open3(j->kids[1], x, y, z); };
  auto phi = [&](X x) { return open1(j->kids[2], x); };
  auto J = [&](X x, X y, X z) { return rebuild(j, {j->kids[0], j->kids[1], j->kids[2], x, y, z}); };
  DeltaContext d;
  d.A = A;
  d.x0 = fresh_name("x0");
  d.x1 = fresh_name("x1");
  d.z = fresh_name("z");
  d.entries.push_back({fresh_name("v"), B(var(d.x0), var(d.x1), var(d.z))});
  ContextMorphisms m0(d, Chi::Const0), m1(d, Chi::Const1);
  const Expr &a = j->kids[3], &b = j->kids[4], &f = j->kids[5];
  Decomposition r;
  r.left = detail::make_j(
      A, [&](X x, X y, X z) { return id_type(B(x, y, z), m0.expand(1, x, y, z, {phi(x)}), J(x, y, z)); },
      [&](X w) { return refl(phi(w)); }, a, b, f);
  r.left_type = id_type(B(a, b, f), m0.expand(1, a, b, f, {phi(a)}), j);
  r.right = detail::make_j(
      A, [&](X x, X y, X z) { return id_type(B(x, y, z), J(x, y, z), m1.expand(1, x, y, z, {phi(y)})); },
      [&](X w) { return refl(phi(w)); }, a, b, f);
  r.right_type = id_type(B(a, b, f), j, m1.expand(1, a, b, f, {phi(b)}));
  return r;
}

// ---- normalisation of paths ----

// A letter is an atomic path `term : Id(A, src, tgt)`, possibly inverted.
struct PathLetter {
  Expr term, src, tgt;
  bool inv = false;
  Expr from() const { return inv ? tgt : src; }
  Expr to() const { return inv ? src : tgt; }
  PathLetter flipped() const { return {term, src, tgt, !inv}; }
  bool cancels(const PathLetter& o) const { return inv != o.inv && alpha_equal(term, o.term); }
};
using PathWord = std::vector<PathLetter>;

inline Expr letter_term(const Expr& A, const PathLetter& l) { return l.inv ? inverse(A, l.src, l.tgt, l.term) : l.term; }

// Right-nested composite l_k . ( ... . (l_2 . l_1)); the empty word is r(p).
inline Expr canonical_path(const Expr& A, const Expr& p, const PathWord& w) {
  if (w.empty()) return refl(p);
  Expr acc = letter_term(A, w[0]);
  Expr start = w[0].from();
  for (std::size_t i = 1; i < w.size(); ++i)
    acc = compose(A, start, w[i].from(), w[i].to(), acc, letter_term(A, w[i]));
  return acc;
}

struct PathNormal {
  PathWord word;
  Expr canonical;
  Expr witness;  // Id(Id(A,p,q), e, canonical)
};

// Rewrites a path built from r, inverse and compose into its canonical
// composite, producing the chain of groupoid-law witnesses.
class PathNormalizer {
 public:
  explicit PathNormalizer(Expr A) : A_(std::move(A)) {}

  PathNormal run(const Expr& e, const Expr& p, const Expr& q) const {
    PathNormal out;
    if (e->kind == Kind::Refl) {
      out.canonical = refl(p);
      out.witness = refl(e);
      return out;
    }
    if (auto iv = match_inverse(e); iv && alpha_equal(iv->A, A_)) {
      PathNormal inner = run(iv->f, iv->a, iv->b);
      PathWord w = invert(inner.word);
      Expr cw = inner.canonical;
      Expr s1 = ap_inverse(A_, iv->a, iv->b, iv->f, cw, inner.witness);
      Expr mid = inverse(A_, iv->a, iv->b, cw);
      Expr s2 = inverse_canonical(inner.word, iv->a, iv->b);
      out.word = w;
      out.canonical = canonical_path(A_, p, w);
      out.witness = chain(id_type(A_, p, q), {e, mid, out.canonical}, {s1, s2});
      return out;
    }
    if (auto c = match_compose(e); c && alpha_equal(c->A, A_)) {
      PathNormal n1 = run(c->f, c->a, c->b);
      PathNormal n2 = run(c->g, c->b, c->c);
      Expr C = id_type(A_, c->a, c->c);
      Expr t1 = compose(A_, c->a, c->b, c->c, n1.canonical, c->g);
      Expr t2 = compose(A_, c->a, c->b, c->c, n1.canonical, n2.canonical);
      Expr s1 = ap_right(A_, c->a, c->b, c->c, c->f, n1.canonical, n1.witness, c->g);
      Expr s2 = ap_left(A_, c->a, c->b, c->c, c->g, n2.canonical, n2.witness, n1.canonical);
      auto [w, s3, canon] = concat(n1.word, n2.word, c->a, c->b, c->c);
      out.word = w;
      out.canonical = canon;
      out.witness = chain(C, {e, t1, t2, canon}, {s1, s2, s3});
      return out;
    }
    out.word = {PathLetter{e, p, q, false}};
    out.canonical = e;
    out.witness = refl(e);
    return out;
  }

  // Witness of Id(Id(A,p,q), s, t) when s and t normalise to the same word.
  std::optional<Expr> equal_paths(const Expr& p, const Expr& q, const Expr& s, const Expr& t) const {
    PathNormal ns = run(s, p, q), nt = run(t, p, q);
    if (!same_word(ns.word, nt.word)) return std::nullopt;
    Expr C = id_type(A_, p, q);
    Expr back = sym(C, t, nt.canonical, nt.witness);
    return trans(C, s, ns.canonical, t, ns.witness, back);
  }

  static bool same_word(const PathWord& a, const PathWord& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].inv != b[i].inv || !alpha_equal(a[i].term, b[i].term)) return false;
    return true;
  }

 private:
  static PathWord invert(const PathWord& w) {
    PathWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->flipped());
    return out;
  }

  // Compose a list of witnesses s_i : Id(C, terms[i], terms[i+1]).
  Expr chain(const Expr& C, const std::vector<Expr>& terms, const std::vector<Expr>& steps) const {
    Expr acc = steps[0];
    for (std::size_t i = 1; i < steps.size(); ++i) acc = trans(C, terms[0], terms[i], terms[i + 1], acc, steps[i]);
    return acc;
  }

  // inverse(c(W)) = c(W^-1), where c(W) : p -> q
  Expr inverse_canonical(const PathWord& w, const Expr& p, const Expr& q) const {
    Expr cw = canonical_path(A_, p, w);
    Expr inv = inverse(A_, p, q, cw);
    if (w.empty()) return refl(inv);
    if (w.size() == 1) {
      const PathLetter& l = w[0];
      if (!l.inv) return refl(inv);
      return inverse_inverse(A_, l.src, l.tgt, l.term);
    }
    PathWord pre(w.begin(), w.end() - 1);
    const PathLetter& l = w.back();
    Expr m = l.from();
    Expr cpre = canonical_path(A_, p, pre);
    Expr lt = letter_term(A_, l);
    Expr C = id_type(A_, q, p);
    // (l . c(pre))^-1 = c(pre)^-1 . l^-1
    Expr s1 = inverse_of_compose(A_, p, m, q, cpre, lt);
    Expr ipre = inverse(A_, p, m, cpre);
    Expr il = inverse(A_, m, q, lt);
    PathWord wpre = invert(pre);
    Expr cwpre = canonical_path(A_, m, wpre);
    PathWord wl = {l.flipped()};
    Expr cwl = canonical_path(A_, q, wl);
    Expr t1 = compose(A_, q, m, p, il, ipre);
    Expr t2 = compose(A_, q, m, p, il, cwpre);
    Expr t3 = compose(A_, q, m, p, cwl, cwpre);
    Expr s2 = ap_left(A_, q, m, p, ipre, cwpre, inverse_canonical(pre, p, m), il);
    Expr s3 = ap_right(A_, q, m, p, il, cwl, inverse_canonical({l}, m, q), cwpre);
    auto [wfull, s4, canon] = concat(wl, wpre, q, m, p);
    return chain(C, {inv, t1, t2, t3, canon}, {s1, s2, s3, s4});
  }

  // c(W2) . c(W1) = c(reduce(W1 ++ W2)); c(W1) : p -> m, c(W2) : m -> q.
  std::tuple<PathWord, Expr, Expr> concat(const PathWord& w1, const PathWord& w2, const Expr& p, const Expr& m,
                                          const Expr& q) const {
    Expr c1 = canonical_path(A_, p, w1);
    Expr c2 = canonical_path(A_, m, w2);
    Expr lhs = compose(A_, p, m, q, c1, c2);
    Expr C = id_type(A_, p, q);
    if (w2.empty()) return {w1, refl(c1), c1};
    if (w1.empty()) return {w2, right_unit(A_, p, q, c2), c2};
    if (w2.size() == 1) return snoc(w1, w2[0], p, q);
    PathWord v(w2.begin(), w2.end() - 1);
    const PathLetter& l = w2.back();
    Expr lt = letter_term(A_, l);
    Expr mv = l.from();
    Expr cv = canonical_path(A_, m, v);
    // (l . c(V)) . c1 = l . (c(V) . c1)
    Expr inner = compose(A_, p, m, mv, c1, cv);
    Expr s1 = sym(C, inner, lhs, assoc(A_, p, m, mv, q, c1, cv, lt));
    Expr t1 = compose(A_, p, mv, q, inner, lt);
    auto [wv, sv, cvw] = concat(w1, v, p, m, mv);
    Expr t2 = compose(A_, p, mv, q, cvw, lt);
    Expr s2 = ap_right(A_, p, mv, q, inner, cvw, sv, lt);
    auto [wf, s3, canon] = snoc(wv, l, p, q);
    return {wf, chain(C, {lhs, t1, t2, canon}, {s1, s2, s3}), canon};
  }

  // l . c(W) = c(reduce(W ++ [l])); c(W) : p -> l.from(), l ends at q.
  std::tuple<PathWord, Expr, Expr> snoc(const PathWord& w, const PathLetter& l, const Expr& p, const Expr& q) const {
    Expr m = l.from();
    Expr cw = canonical_path(A_, p, w);
    Expr lt = letter_term(A_, l);
    Expr lhs = compose(A_, p, m, q, cw, lt);
    Expr C = id_type(A_, p, q);
    if (w.empty()) return {{l}, right_unit(A_, p, q, lt), lt};
    if (!w.back().cancels(l)) {
      PathWord out = w;
      out.push_back(l);
      return {out, refl(lhs), lhs};
    }
    const PathLetter& k = w.back();
    Expr kt = letter_term(A_, k);
    // l . k = r(k.from())
    Expr cancel = k.inv ? cancel_right(A_, k.src, k.tgt, k.term) : cancel_left(A_, k.src, k.tgt, k.term);
    Expr s = k.from();
    if (w.size() == 1) return {{}, cancel, refl(p)};
    PathWord v(w.begin(), w.end() - 1);
    Expr cv = canonical_path(A_, p, v);
    // (l . (k . c(V))) = (l . k) . c(V) = r . c(V) = c(V)
    Expr s1 = assoc(A_, p, s, m, q, cv, kt, lt);
    Expr lk = compose(A_, s, m, q, kt, lt);
    Expr t1 = compose(A_, p, s, q, cv, lk);
    Expr s2 = ap_right(A_, p, s, q, lk, refl(s), cancel, cv);
    Expr t2 = compose(A_, p, s, q, cv, refl(s));
    return {v, chain(C, {lhs, t1, t2}, {s1, s2}), cv};
  }

  Expr A_;
};

// ---- transport along a single-entry telescope ----

// Witness of Id(T(chi-args), R, shrink_f(tau)) for Delta = (x0,x1,z, v:T) and
// a partner R built from the same letters. `partner` receives (x0,x1,z,v) and
// must reduce to a path on v when z := r(x). Returns nullopt if no witness is
// found at the reflexivity instance.
template <class F>
std::optional<Expr> shrink_partner_witness(const ContextMorphisms& m, F partner, const Expr& a0, const Expr& a1,
                                           const Expr& f, const Expr& tau, const Theory& T, bool expand_side) {
  using detail::X;
  const DeltaContext& d = m.delta();
  bool ok = true;
  auto target_type = [&](X x, X y, X z) {
    if (expand_side) return d.B(1, x, y, z, {});
    ChiArgs c = chi_args(d.A, m.chi(), x, y, z);
    return d.B(1, c.a0, c.a1, c.f, {});
  };
  auto source_type = [&](X x, X y, X z) {
    if (!expand_side) return d.B(1, x, y, z, {});
    ChiArgs c = chi_args(d.A, m.chi(), x, y, z);
    return d.B(1, c.a0, c.a1, c.f, {});
  };
  auto mapped = [&](X x, X y, X z, X v) { return expand_side ? m.expand(1, x, y, z, {v}) : m.shrink(1, x, y, z, {v}); };
  Expr j = detail::make_j(
      d.A,
      [&](X x, X y, X z) {
        return detail::make_pi("v", source_type(x, y, z),
                               [&](X v) { return id_type(target_type(x, y, z), partner(x, y, z, v), mapped(x, y, z, v)); });
      },
      [&](X w) {
        return detail::make_lam("v", source_type(w, w, refl(w)), [&](X v) {
          Expr ty = target_type(w, w, refl(w));
          Expr lhs = partner(w, w, refl(w), v);
          Context ctx = d.outer.extend(w->name, d.A).extend(v->name, source_type(w, w, refl(w)));
          Checker k(T);
          if (k.conv(ctx, lhs, v, ty)) return refl(v);
          if (ty->kind == Kind::Id) {
            PathNormalizer pn(ty->kids[0]);
            if (auto e = pn.equal_paths(ty->kids[1], ty->kids[2], k.normalize(lhs), v)) return *e;
          }
          ok = false;
          return refl(v);
        });
      },
      a0, a1, f);
  if (!ok) return std::nullopt;
  return app(j, tau);
}

// Families T(x0,x1) over an edge z : x0 -> x1 of G, given by how the endpoints
// of an identity type mention x0, x1 and a fixed vertex p. Partners give the
// expected composite for shrink_i (resp. expand_i) in terms of z and the
// argument path.
enum class EdgeFamily { X0X1, X0P, PX0, X1P, PX1, X1X0, Constant };

inline const std::vector<EdgeFamily>& all_edge_families() {
  static const std::vector<EdgeFamily> v{EdgeFamily::X0X1, EdgeFamily::X0P, EdgeFamily::PX0, EdgeFamily::X1P,
                                         EdgeFamily::PX1,  EdgeFamily::X1X0, EdgeFamily::Constant};
  return v;
}

inline std::string edge_family_name(EdgeFamily k) {
  switch (k) {
    case EdgeFamily::X0X1: return "Id(G,x0,x1)";
    case EdgeFamily::X0P: return "Id(G,x0,p)";
    case EdgeFamily::PX0: return "Id(G,p,x0)";
    case EdgeFamily::X1P: return "Id(G,x1,p)";
    case EdgeFamily::PX1: return "Id(G,p,x1)";
    case EdgeFamily::X1X0: return "Id(G,x1,x0)";
    case EdgeFamily::Constant: return "constant";
  }
  return "?";
}

struct EdgeFamilyCase {
  EdgeFamily kind;
  Expr G, p, constant;  // constant: the type used by EdgeFamily::Constant

  Expr type(const Expr& x0, const Expr& x1) const {
    switch (kind) {
      case EdgeFamily::X0X1: return id_type(G, x0, x1);
      case EdgeFamily::X0P: return id_type(G, x0, p);
      case EdgeFamily::PX0: return id_type(G, p, x0);
      case EdgeFamily::X1P: return id_type(G, x1, p);
      case EdgeFamily::PX1: return id_type(G, p, x1);
      case EdgeFamily::X1X0: return id_type(G, x1, x0);
      case EdgeFamily::Constant: return constant;
    }
    return constant;
  }

  DeltaContext delta(const Context& outer) const {
    DeltaContext d;
    d.outer = outer;
    d.A = G;
    d.entries.push_back({"v", type(var(d.x0), var(d.x1))});
    return d;
  }

  // shrink_i(tau) for tau : T(x0,x1); result lives in T(xi,xi)
  Expr shrink_partner(int i, const Expr& x, const Expr& y, const Expr& z, const Expr& t) const {
    Expr zi = inverse(G, x, y, z);
    switch (kind) {
      case EdgeFamily::X0X1: return i == 0 ? compose(G, x, y, x, t, zi) : compose(G, y, x, y, zi, t);
      case EdgeFamily::X0P: return i == 0 ? t : compose(G, y, x, p, zi, t);
      case EdgeFamily::PX0: return i == 0 ? t : compose(G, p, x, y, t, z);
      case EdgeFamily::X1P: return i == 0 ? compose(G, x, y, p, z, t) : t;
      case EdgeFamily::PX1: return i == 0 ? compose(G, p, y, x, t, zi) : t;
      case EdgeFamily::X1X0: return i == 0 ? compose(G, x, y, x, z, t) : compose(G, y, x, y, t, z);
      case EdgeFamily::Constant: return t;
    }
    return t;
  }

  // expand_i(t) for t : T(xi,xi); result lives in T(x0,x1)
  Expr expand_partner(int i, const Expr& x, const Expr& y, const Expr& z, const Expr& t) const {
    Expr zi = inverse(G, x, y, z);
    switch (kind) {
      case EdgeFamily::X0X1: return i == 0 ? compose(G, x, x, y, t, z) : compose(G, x, y, y, z, t);
      case EdgeFamily::X0P: return i == 0 ? t : compose(G, x, y, p, z, t);
      case EdgeFamily::PX0: return i == 0 ? t : compose(G, p, y, x, t, zi);
      case EdgeFamily::X1P: return i == 0 ? compose(G, y, x, p, zi, t) : t;
      case EdgeFamily::PX1: return i == 0 ? compose(G, p, x, y, t, z) : t;
      case EdgeFamily::X1X0: return i == 0 ? compose(G, y, x, x, zi, t) : compose(G, y, y, x, t, zi);
      case EdgeFamily::Constant: return t;
    }
    return t;
  }
};

// Witness of Id(T(xi,xi), partner, shrink_i(tau)) (or the expand analogue)
// for a closed instance (a0, a1, f, tau).
inline std::optional<Expr> edge_family_witness(const Theory& T, const EdgeFamilyCase& c, int i, bool expand_side,
                                               const Expr& a0, const Expr& a1, const Expr& f, const Expr& tau) {
  ContextMorphisms m(c.delta({}), i == 0 ? Chi::Const0 : Chi::Const1);
  auto partner = [&](const Expr& x, const Expr& y, const Expr& z, const Expr& v) {
    return expand_side ? c.expand_partner(i, x, y, z, v) : c.shrink_partner(i, x, y, z, v);
  };
  return shrink_partner_witness(m, partner, a0, a1, f, tau, T, expand_side);
}

}  // namespace mlcx
