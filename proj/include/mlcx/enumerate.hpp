// Bounded, target-directed enumeration of kernel-accepted terms. Terms are
// generated by exact size (every node counts, types included) and memoized
// per (context, type, size); output order is deterministic.
#pragma once

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "kernel.hpp"

namespace mlcx {

struct EnumConfig {
  bool use_beta = true;
  bool use_j = true;
  bool use_rec = true;
  bool use_sigma_elim = true;
  std::size_t max_terms = 100000;  // per (context, type, size) bucket
};

struct EnumBudget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Enumerator {
 public:
  Enumerator(const Theory& T, EnumConfig cfg = {}) : T_(T), cfg_(cfg), k_(T_) {}
  Enumerator(const Enumerator&) = delete;
  Enumerator& operator=(const Enumerator&) = delete;

  // Closed (or open, in ctx) terms of type A with size exactly n.
  const std::vector<Expr>& exactly(const Context& ctx, const Expr& A, int n) {
    std::string key = key_of(ctx, A, n);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Expr> out = n <= 0 ? std::vector<Expr>{} : generate(ctx, A, n);
    return memo_.emplace(key, std::move(out)).first->second;
  }

  std::vector<Expr> up_to(const Context& ctx, const Expr& A, int n) {
    std::vector<Expr> out;
    for (int s = 1; s <= n; ++s) {
      auto& v = exactly(ctx, A, s);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  std::size_t checked() const { return checked_; }

 private:
  static std::string key_of(const Context& ctx, const Expr& A, int n) {
    std::string k;
    for (auto& [x, t] : ctx.decls) k += x + ":" + print(t) + ";";
    return k + "|" + print(A) + "|" + std::to_string(n);
  }

  bool has_base() const { return static_cast<bool>(T_.gset); }
  Expr G() const { return base(T_.base_name().empty() ? "G" : T_.base_name()); }

  std::string binder(const Context& ctx, const std::string& stem) const {
    return stem + std::to_string(ctx.size());
  }

  bool accepts(const Context& ctx, const Expr& e, const Expr& A) {
    ++checked_;
    try {
      k_.check(ctx, e, A);
      return true;
    } catch (const TypeError&) {
      return false;
    }
  }

  bool same_type(const Context& ctx, const Expr& X, const Expr& Y) {
    if (alpha_equal(X, Y)) return true;
    try {
      return k_.conv_type(ctx, X, Y);
    } catch (const TypeError&) {
      return false;
    }
  }

  std::vector<Expr> generate(const Context& ctx, const Expr& A, int n) {
    std::vector<Expr> cand;
    if (n == 1) atoms(ctx, A, cand);
    intro_forms(ctx, A, n, cand);
    if (cfg_.use_beta) beta_forms(ctx, A, n, cand);
    if (cfg_.use_j) j_forms(ctx, A, n, cand);
    if (cfg_.use_rec) rec_forms(ctx, A, n, cand);
    if (cfg_.use_sigma_elim) sigma_forms(ctx, A, n, cand);
    std::vector<Expr> out;
    std::unordered_set<Expr, ExprHash, ExprEq> seen;
    for (auto& e : cand) {
      if (term_size(e) != n || !seen.insert(e).second) continue;
      if (!accepts(ctx, e, A)) continue;
      out.push_back(e);
      if (out.size() > cfg_.max_terms) throw EnumBudget("enumeration bucket exceeds " + std::to_string(cfg_.max_terms));
    }
    return out;
  }

  void atoms(const Context& ctx, const Expr& A, std::vector<Expr>& out) {
    for (auto& [x, t] : ctx.decls)
      if (same_type(ctx, t, A)) out.push_back(var(x));
    if (A->kind == Kind::Nat) out.push_back(zero());
    if (!has_base()) return;
    for (auto& c : T_.gset->cells()) {
      if (c.name.rfind("i(", 0) == 0) continue;
      Expr b = basic(c.name);
      if (same_type(ctx, k_.basic_type(b), A)) out.push_back(b);
      if (c.dim == 0 && A->kind == Kind::Id) {
        Expr d = basic(c.name, 1);
        if (same_type(ctx, k_.basic_type(d), A)) out.push_back(d);
      }
    }
  }

  void intro_forms(const Context& ctx, const Expr& A, int n, std::vector<Expr>& out) {
    switch (A->kind) {
      case Kind::Nat:
        for (auto& t : exactly(ctx, A, n - 1)) out.push_back(succ(t));
        break;
      case Kind::Id: {
        for (auto& t : exactly(ctx, A->kids[0], n - 1)) {
          try {
            if (k_.conv(ctx, t, A->kids[1], A->kids[0]) && k_.conv(ctx, t, A->kids[2], A->kids[0]))
              out.push_back(refl(t));
          } catch (const TypeError&) {
          }
        }
        break;
      }
      case Kind::Pi: {
        int body = n - 1 - term_size(A->kids[0]);
        if (body < 1) break;
        std::string x = binder(ctx, "x");
        Context c2 = ctx.extend(x, A->kids[0]);
        for (auto& t : exactly(c2, open1(A->kids[1], var(x)), body)) out.push_back(lam(x, A->kids[0], t));
        break;
      }
      case Kind::Sigma: {
        for (int i = 1; i < n - 1; ++i) {
          for (auto& a : exactly(ctx, A->kids[0], i)) {
            Expr Bt = open1(A->kids[1], a);
            for (auto& b : exactly(ctx, Bt, n - 1 - i)) out.push_back(pair(a, b));
          }
        }
        break;
      }
      default: break;
    }
  }

  std::vector<Expr> small_domains() const {
    std::vector<Expr> d{nat()};
    if (has_base()) d.insert(d.begin(), G());
    return d;
  }

  // app(lam x:S. t, u) with x occurring in t
  void beta_forms(const Context& ctx, const Expr& A, int n, std::vector<Expr>& out) {
    for (auto& S : small_domains()) {
      int rest = n - 2 - term_size(S);
      std::string x = binder(ctx, "x");
      Context c2 = ctx.extend(x, S);
      for (int ts = 1; ts < rest; ++ts) {
        int us = rest - ts;
        auto& bodies = exactly(c2, A, ts);
        if (bodies.empty()) continue;
        auto& args = exactly(ctx, S, us);
        for (auto& t : bodies) {
          if (!occurs_free(t, x)) continue;
          for (auto& u : args) out.push_back(app(lam(x, S, t), u));
        }
      }
    }
  }

  // Motives obtained by generalising occurrences of a, b, f in A.
  std::vector<Expr> motives(const Expr& A, const Expr& a, const Expr& b, const Expr& f, const Expr& x, const Expr& y,
                            const Expr& z) const {
    std::vector<Expr> opts;
    if (alpha_equal(A, f)) opts.push_back(z);
    if (alpha_equal(A, a)) opts.push_back(x);
    if (alpha_equal(A, b)) opts.push_back(y);
    if (!opts.empty()) {
      opts.push_back(A);
      return opts;
    }
    if (A->kids.empty()) return {A};
    std::vector<std::vector<Expr>> per;
    for (auto& k : A->kids) per.push_back(motives(k, a, b, f, x, y, z));
    std::vector<std::vector<Expr>> acc{{}};
    for (auto& choices : per) {
      std::vector<std::vector<Expr>> nxt;
      for (auto& pre : acc)
        for (auto& c : choices) {
          auto v = pre;
          v.push_back(c);
          nxt.push_back(std::move(v));
          if (nxt.size() > 64) break;
        }
      acc = std::move(nxt);
    }
    std::vector<Expr> out;
    for (auto& ks : acc) out.push_back(rebuild(A, ks));
    return out;
  }

  void j_forms(const Context& ctx, const Expr& A, int n, std::vector<Expr>& out) {
    if (!has_base() || n < 7) return;
    Expr g = G();
    std::vector<Expr> ends;
    for (auto& [x, t] : ctx.decls)
      if (alpha_equal(t, g)) ends.push_back(var(x));
    for (auto& v : T_.gset->of_dim(0)) ends.push_back(basic(v));
    std::string xs = binder(ctx, "x"), ys = binder(ctx, "y"), zs = binder(ctx, "z"), ws = binder(ctx, "w");
    Expr xv = var(xs), yv = var(ys), zv = var(zs), wv = var(ws);
    Context cw = ctx.extend(ws, g);
    for (auto& a : ends)
      for (auto& b : ends) {
        Expr F = id_type(g, a, b);
        for (int fs = 1; fs <= n - 6; ++fs) {
          for (auto& f : exactly(ctx, F, fs)) {
            for (auto& M : motives(A, a, b, f, xv, yv, zv)) {
              int ps = n - 4 - fs - term_size(M);
              if (ps < 1) continue;
              Expr target = subst_many(M, {{xs, wv}, {ys, wv}, {zs, refl(wv)}});
              for (auto& phi : exactly(cw, target, ps))
                out.push_back(jelim(xs, ys, zs, g, M, ws, phi, a, b, f));
            }
          }
        }
      }
  }

  // rec with a constant motive
  void rec_forms(const Context& ctx, const Expr& A, int n, std::vector<Expr>& out) {
    if (n < 4) return;
    std::string x = binder(ctx, "n"), y = binder(ctx, "y");
    Context cg = ctx.extend(x, nat()).extend(y, A);
    for (int ns = 1; ns <= n - 3; ++ns) {
      auto& nums = exactly(ctx, nat(), ns);
      if (nums.empty()) continue;
      for (int cs = 1; cs <= n - 2 - ns; ++cs) {
        int gs = n - 1 - ns - cs;
        auto& cs_terms = exactly(ctx, A, cs);
        if (cs_terms.empty()) continue;
        auto& gs_terms = exactly(cg, A, gs);
        for (auto& m : nums)
          for (auto& c : cs_terms)
            for (auto& gt : gs_terms) out.push_back(rec(m, c, x, y, gt));
      }
    }
  }

  void sigma_forms(const Context& ctx, const Expr& A, int n, std::vector<Expr>& out) {
    for (auto& D : small_domains()) {
      for (auto& E : small_domains()) {
        std::string x = binder(ctx, "p"), y = binder(ctx, "q");
        Expr S = sigma(x, D, E);
        int rest = n - 1 - term_size(D) - term_size(E);
        Context c2 = ctx.extend(x, D).extend(y, E);
        for (int ps = 1; ps < rest; ++ps) {
          auto& psis = exactly(c2, A, ps);
          if (psis.empty()) continue;
          auto& ps_terms = exactly(ctx, S, rest - ps);
          for (auto& psi : psis)
            for (auto& p : ps_terms) out.push_back(sigelim(x, D, y, E, psi, p));
        }
      }
    }
  }

  Theory T_;
  EnumConfig cfg_;
  Checker k_;
  std::map<std::string, std::vector<Expr>> memo_;
  std::size_t checked_ = 0;
};

inline std::vector<Expr> enumerate_closed_terms(const Theory& T, const Expr& A, int size_bound, EnumConfig cfg = {}) {
  Enumerator en(T, cfg);
  return en.up_to({}, A, size_bound);
}

}  // namespace mlcx
