// Expressions of the type theory: locally nameless trees.
// Bound variables are de Bruijn indices, free variables carry names.
#pragma once

#include <atomic>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mlcx {

enum class Kind : std::uint8_t {
  FVar, BVar, Basic, Base, Zero, Succ, Nat, Refl,
  J, App, Lam, Pair, SigElim, Rec, Id, Pi, Sigma
};

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  std::string name;               // FVar, Basic, Base
  int index = 0;                  // BVar index; Basic degeneracy level
  std::vector<Expr> kids;
  std::vector<std::string> hints; // binder names, printing only
  std::size_t hash = 0;
  int size = 1;
};

// Child layout
//   Lam/Pi/Sigma : [dom, body(1)]
//   J            : [A, B(3: x y z), phi(1), a, b, f]
//   SigElim      : [A, B(1: x), psi(2: x y), p]
//   Rec          : [n, c, g(2: x y)]
//   Id           : [A, a, b]
inline int binders_of(Kind k, std::size_t child) {
  switch (k) {
    case Kind::Lam: case Kind::Pi: case Kind::Sigma: return child == 1 ? 1 : 0;
    case Kind::J: return child == 1 ? 3 : child == 2 ? 1 : 0;
    case Kind::SigElim: return child == 1 ? 1 : child == 2 ? 2 : 0;
    case Kind::Rec: return child == 2 ? 2 : 0;
    default: return 0;
  }
}

namespace detail {
inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace detail

inline Expr make(Kind k, std::vector<Expr> kids, std::string name = {}, int index = 0,
                 std::vector<std::string> hints = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->index = index;
  n->kids = std::move(kids);
  n->hints = std::move(hints);
  std::size_t h = detail::mix(static_cast<std::size_t>(k) * 1315423911ULL, std::hash<std::string>{}(n->name));
  h = detail::mix(h, static_cast<std::size_t>(n->index));
  int sz = 1;
  for (auto& c : n->kids) {
    h = detail::mix(h, c->hash);
    sz += c->size;
  }
  n->hash = h;
  n->size = sz;
  return n;
}

// ---- structural equality (alpha-equivalence, since binders are nameless) ----

inline bool alpha_equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash || a->kind != b->kind || a->index != b->index || a->name != b->name ||
      a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!alpha_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e->hash; }
};
struct ExprEq {
  bool operator()(const Expr& a, const Expr& b) const { return alpha_equal(a, b); }
};

// ---- fresh names ----

inline std::string fresh_name(const std::string& hint) {
  static std::atomic<unsigned long> counter{0};
  std::string base = hint.substr(0, hint.find('#'));
  if (base.empty()) base = "v";
  return base + "#" + std::to_string(++counter);
}

// ---- constructors ----

inline Expr var(const std::string& n) { return make(Kind::FVar, {}, n); }
inline Expr bvar(int i) { return make(Kind::BVar, {}, {}, i); }
inline Expr basic(const std::string& cell, int degen = 0) { return make(Kind::Basic, {}, cell, degen); }
inline Expr base(const std::string& g = "G") { return make(Kind::Base, {}, g); }
inline Expr zero() { return make(Kind::Zero, {}); }
inline Expr succ(Expr e) { return make(Kind::Succ, {std::move(e)}); }
inline Expr nat() { return make(Kind::Nat, {}); }
inline Expr refl(Expr e) { return make(Kind::Refl, {std::move(e)}); }
inline Expr app(Expr f, Expr a) { return make(Kind::App, {std::move(f), std::move(a)}); }
inline Expr pair(Expr a, Expr b) { return make(Kind::Pair, {std::move(a), std::move(b)}); }
inline Expr id_type(Expr A, Expr a, Expr b) { return make(Kind::Id, {std::move(A), std::move(a), std::move(b)}); }

inline Expr numeral(int k) {
  Expr e = zero();
  for (int i = 0; i < k; ++i) e = succ(e);
  return e;
}

// ---- binding: open / close ----

// Replace bound variables of the k outermost binders of `body` by `vals`
// (vals in binder order, so vals.back() is the innermost binder).
inline Expr instantiate(const Expr& body, const std::vector<Expr>& vals, int depth = 0) {
  const int k = static_cast<int>(vals.size());
  if (body->kind == Kind::BVar) {
    int i = body->index;
    if (i < depth) return body;
    if (i < depth + k) return vals[k - 1 - (i - depth)];
    return bvar(i - k);
  }
  if (body->kids.empty()) return body;
  std::vector<Expr> kids;
  kids.reserve(body->kids.size());
  bool changed = false;
  for (std::size_t c = 0; c < body->kids.size(); ++c) {
    Expr nk = instantiate(body->kids[c], vals, depth + binders_of(body->kind, c));
    changed = changed || nk.get() != body->kids[c].get();
    kids.push_back(std::move(nk));
  }
  if (!changed) return body;
  return make(body->kind, std::move(kids), body->name, body->index, body->hints);
}

// Abstract free variables `names` (in binder order) into bound variables.
inline Expr abstract(const Expr& e, const std::vector<std::string>& names, int depth = 0) {
  const int k = static_cast<int>(names.size());
  if (e->kind == Kind::FVar) {
    for (int j = 0; j < k; ++j)
      if (names[j] == e->name) return bvar(depth + (k - 1 - j));
    return e;
  }
  if (e->kids.empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e->kids.size());
  bool changed = false;
  for (std::size_t c = 0; c < e->kids.size(); ++c) {
    Expr nk = abstract(e->kids[c], names, depth + binders_of(e->kind, c));
    changed = changed || nk.get() != e->kids[c].get();
    kids.push_back(std::move(nk));
  }
  if (!changed) return e;
  return make(e->kind, std::move(kids), e->name, e->index, e->hints);
}

// Replace every occurrence of the locally closed term `p` by a fresh bound
// variable; the result is a one-binder body.
inline Expr abstract_subterm(const Expr& e, const Expr& p, int depth = 0) {
  if (alpha_equal(e, p)) return bvar(depth);
  if (e->kind == Kind::BVar) return e->index >= depth ? bvar(e->index + 1) : e;
  if (e->kids.empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e->kids.size());
  for (std::size_t c = 0; c < e->kids.size(); ++c)
    kids.push_back(abstract_subterm(e->kids[c], p, depth + binders_of(e->kind, c)));
  return make(e->kind, std::move(kids), e->name, e->index, e->hints);
}

inline Expr lam(const std::string& x, Expr A, const Expr& body) {
  return make(Kind::Lam, {std::move(A), abstract(body, {x})}, {}, 0, {x});
}
inline Expr pi(const std::string& x, Expr A, const Expr& B) {
  return make(Kind::Pi, {std::move(A), abstract(B, {x})}, {}, 0, {x});
}
inline Expr sigma(const std::string& x, Expr A, const Expr& B) {
  return make(Kind::Sigma, {std::move(A), abstract(B, {x})}, {}, 0, {x});
}
inline Expr arrow(Expr A, Expr B) { return make(Kind::Pi, {std::move(A), std::move(B)}, {}, 0, {"_"}); }

// J([x,y:A, z:Id(A,x,y)] B, [w:A] phi, a, b, f)
inline Expr jelim(const std::string& x, const std::string& y, const std::string& z, Expr A, const Expr& B,
                  const std::string& w, const Expr& phi, Expr a, Expr b, Expr f) {
  return make(Kind::J,
              {std::move(A), abstract(B, {x, y, z}), abstract(phi, {w}), std::move(a), std::move(b), std::move(f)},
              {}, 0, {x, y, z, w});
}
// R([x:A, y:B] psi, p)
inline Expr sigelim(const std::string& x, Expr A, const std::string& y, const Expr& B, const Expr& psi, Expr p) {
  return make(Kind::SigElim, {std::move(A), abstract(B, {x}), abstract(psi, {x, y}), std::move(p)}, {}, 0, {x, y});
}
// rec(n, c, [x,y] g)
inline Expr rec(Expr n, Expr c, const std::string& x, const std::string& y, const Expr& g) {
  return make(Kind::Rec, {std::move(n), std::move(c), abstract(g, {x, y})}, {}, 0, {x, y});
}

// Rebuild a node with new children, keeping kind, payload and hints.
inline Expr rebuild(const Expr& e, std::vector<Expr> kids) {
  return make(e->kind, std::move(kids), e->name, e->index, e->hints);
}

// ---- substitution ----

inline Expr subst_many(const Expr& e, const std::map<std::string, Expr>& m) {
  if (m.empty()) return e;
  if (e->kind == Kind::FVar) {
    auto it = m.find(e->name);
    return it == m.end() ? e : it->second;
  }
  if (e->kids.empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e->kids.size());
  bool changed = false;
  for (auto& c : e->kids) {
    Expr nk = subst_many(c, m);
    changed = changed || nk.get() != c.get();
    kids.push_back(std::move(nk));
  }
  if (!changed) return e;
  return rebuild(e, std::move(kids));
}

// Capture-avoiding: bound variables are nameless and `s` is locally closed.
inline Expr substitute(const Expr& e, const std::string& v, const Expr& s) { return subst_many(e, {{v, s}}); }

inline void free_vars_into(const Expr& e, std::set<std::string>& out) {
  if (e->kind == Kind::FVar) out.insert(e->name);
  for (auto& c : e->kids) free_vars_into(c, out);
}
inline std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> s;
  free_vars_into(e, s);
  return s;
}
inline bool occurs_free(const Expr& e, const std::string& v) {
  if (e->kind == Kind::FVar) return e->name == v;
  for (auto& c : e->kids)
    if (occurs_free(c, v)) return true;
  return false;
}
inline bool contains_basic(const Expr& e) {
  if (e->kind == Kind::Basic) return true;
  for (auto& c : e->kids)
    if (contains_basic(c)) return true;
  return false;
}
inline void basic_cells_into(const Expr& e, std::set<std::string>& out) {
  if (e->kind == Kind::Basic) out.insert(e->name);
  for (auto& c : e->kids) basic_cells_into(c, out);
}
inline bool is_closed(const Expr& e) {
  if (e->kind == Kind::FVar) return false;
  for (auto& c : e->kids)
    if (!is_closed(c)) return false;
  return true;
}

inline int term_size(const Expr& e) { return e->size; }

struct MissingCell : std::runtime_error {
  std::string cell;
  explicit MissingCell(const std::string& c) : std::runtime_error("no mapping for basic cell <" + c + ">"), cell(c) {}
};

// Formal substitution of terms for basic terms; base types renamed.
// A degenerate cell i^k(a) goes to r^k(m(a)) unless mapped explicitly.
inline Expr replace_basic(const Expr& e, const std::map<std::string, Expr>& m, const std::string& base_rename) {
  switch (e->kind) {
    case Kind::Basic: {
      if (e->index > 0) {
        std::string full = e->name;
        for (int i = 0; i < e->index; ++i) full = "i(" + full + ")";
        if (auto it = m.find(full); it != m.end()) return it->second;
      }
      auto it = m.find(e->name);
      if (it == m.end()) throw MissingCell(e->name);
      Expr r = it->second;
      for (int i = 0; i < e->index; ++i) r = refl(r);
      return r;
    }
    case Kind::Base: return base(base_rename);
    default: break;
  }
  if (e->kids.empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e->kids.size());
  for (auto& c : e->kids) kids.push_back(replace_basic(c, m, base_rename));
  return rebuild(e, std::move(kids));
}

// Id^n over A with endpoint pairs (a1,b1) ... (an,bn).
inline Expr iterated_id_type(const Expr& A, const std::vector<std::pair<Expr, Expr>>& endpoints) {
  Expr t = A;
  for (auto& [a, b] : endpoints) t = id_type(t, a, b);
  return t;
}

// ---- accessors for binder bodies ----

inline Expr open1(const Expr& body, const Expr& v) { return instantiate(body, {v}); }
inline Expr open2(const Expr& body, const Expr& a, const Expr& b) { return instantiate(body, {a, b}); }
inline Expr open3(const Expr& body, const Expr& a, const Expr& b, const Expr& c) { return instantiate(body, {a, b, c}); }

// ---- printing ----

inline bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"G", "N", "Id", "Pi", "Sigma", "S", "r", "lam",
                                           "app", "pair", "R", "rec", "J", "i"};
  return kw.count(s) > 0;
}

namespace detail {

struct Printer {
  std::set<std::string> taken;  // free names of the whole expression
  std::vector<std::string> stack;

  std::string pick(const std::string& hint) {
    std::string b = hint.substr(0, hint.find('#'));
    if (b.empty() || b == "_" || is_keyword(b) || !(std::isalpha(static_cast<unsigned char>(b[0])) || b[0] == '_'))
      b = "v";
    std::string c = b;
    int n = 0;
    auto used = [&](const std::string& s) {
      if (taken.count(s)) return true;
      for (auto& t : stack)
        if (t == s) return true;
      return false;
    };
    while (used(c)) c = b + std::to_string(++n);
    return c;
  }

  std::string bv(int i) const {
    if (i < 0 || i >= static_cast<int>(stack.size())) return "?" + std::to_string(i);
    return stack[stack.size() - 1 - i];
  }

  std::string under(const Expr& body, const std::vector<std::string>& names) {
    for (auto& n : names) stack.push_back(n);
    std::string s = go(body);
    for (std::size_t i = 0; i < names.size(); ++i) stack.pop_back();
    return s;
  }

  std::string go(const Expr& e) {
    const auto& k = e->kids;
    auto hint = [&](std::size_t i) { return i < e->hints.size() ? e->hints[i] : std::string("v"); };
    switch (e->kind) {
      case Kind::FVar: return e->name;
      case Kind::BVar: return bv(e->index);
      case Kind::Basic: {
        std::string s = e->name;
        for (int i = 0; i < e->index; ++i) s = "i(" + s + ")";
        return "<" + s + ">";
      }
      case Kind::Base: return e->name == "G" ? "G" : "G " + e->name;
      case Kind::Zero: return "0";
      case Kind::Succ: return "S(" + go(k[0]) + ")";
      case Kind::Nat: return "N";
      case Kind::Refl: return "r(" + go(k[0]) + ")";
      case Kind::App: return "app(" + go(k[0]) + ", " + go(k[1]) + ")";
      case Kind::Pair: return "pair(" + go(k[0]) + ", " + go(k[1]) + ")";
      case Kind::Id: return "Id(" + go(k[0]) + ", " + go(k[1]) + ", " + go(k[2]) + ")";
      case Kind::Lam: case Kind::Pi: case Kind::Sigma: {
        std::string x = pick(hint(0));
        std::string kw = e->kind == Kind::Lam ? "lam " : e->kind == Kind::Pi ? "Pi " : "Sigma ";
        std::string dom = go(k[0]);
        return kw + x + ":" + dom + ". " + under(k[1], {x});
      }
      case Kind::J: {
        std::string A = go(k[0]);
        std::string x = pick(hint(0));
        stack.push_back(x);
        std::string y = pick(hint(1));
        stack.push_back(y);
        std::string z = pick(hint(2));
        stack.pop_back();
        stack.pop_back();
        std::string B = under(k[1], {x, y, z});
        std::string w = pick(hint(3));
        std::string phi = under(k[2], {w});
        return "J([" + x + "," + y + ":" + A + "," + z + ":Id(" + A + ", " + x + ", " + y + ")] " + B + ", [" + w +
               ":" + A + "] " + phi + ", " + go(k[3]) + ", " + go(k[4]) + ", " + go(k[5]) + ")";
      }
      case Kind::SigElim: {
        std::string x = pick(hint(0));
        std::string A = go(k[0]);
        std::string B = under(k[1], {x});
        stack.push_back(x);
        std::string y = pick(hint(1));
        stack.pop_back();
        std::string psi = under(k[2], {x, y});
        return "R([" + x + ":" + A + "," + y + ":" + B + "] " + psi + ", " + go(k[3]) + ")";
      }
      case Kind::Rec: {
        std::string x = pick(hint(0));
        stack.push_back(x);
        std::string y = pick(hint(1));
        stack.pop_back();
        return "rec(" + go(k[0]) + ", " + go(k[1]) + ", [" + x + "," + y + "] " + under(k[2], {x, y}) + ")";
      }
    }
    return "?";
  }
};

}  // namespace detail

inline std::string print(const Expr& e) {
  detail::Printer p;
  p.taken = free_vars(e);
  return p.go(e);
}

// ---- parsing ----

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(std::size_t p, const std::string& msg)
      : std::runtime_error("syntax error at " + std::to_string(p) + ": " + msg), pos(p) {}
};

namespace detail {

struct Parser {
  const std::string& s;
  std::size_t i = 0;
  std::vector<std::string> bound;

  explicit Parser(const std::string& src) : s(src) {}

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& m) const { throw ParseError(i, m); }
  bool peek(char c) {
    ws();
    return i < s.size() && s[i] == c;
  }
  void expect(char c) {
    ws();
    if (i >= s.size() || s[i] != c) fail(std::string("expected '") + c + "'");
    ++i;
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#';
  }
  std::string peek_ident() {
    ws();
    std::size_t j = i;
    if (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_'))
      while (j < s.size() && ident_char(s[j])) ++j;
    return s.substr(i, j - i);
  }
  std::string ident() {
    std::string id = peek_ident();
    if (id.empty()) fail("expected identifier");
    i += id.size();
    return id;
  }
  std::string binder() {
    std::string id = ident();
    if (is_keyword(id)) fail("keyword '" + id + "' used as a variable");
    return id;
  }

  Expr name_ref(const std::string& n) {
    for (int j = static_cast<int>(bound.size()) - 1; j >= 0; --j)
      if (bound[j] == n) return bvar(static_cast<int>(bound.size()) - 1 - j);
    return var(n);
  }

  Expr under(const std::vector<std::string>& names) {
    for (auto& n : names) bound.push_back(n);
    Expr e = expr();
    for (std::size_t k = 0; k < names.size(); ++k) bound.pop_back();
    return e;
  }

  std::string cellname() {
    ws();
    std::size_t j = i;
    while (j < s.size() && s[j] != '>' && s[j] != '<') ++j;
    if (j >= s.size()) fail("unterminated basic term");
    std::string c = s.substr(i, j - i);
    while (!c.empty() && std::isspace(static_cast<unsigned char>(c.back()))) c.pop_back();
    i = j;
    return c;
  }

  static std::pair<std::string, int> split_degenerate(std::string c) {
    int d = 0;
    while (c.size() > 3 && c.compare(0, 2, "i(") == 0 && c.back() == ')') {
      c = c.substr(2, c.size() - 3);
      ++d;
    }
    return {c, d};
  }

  Expr expr() {
    ws();
    if (i >= s.size()) fail("unexpected end of input");
    char c = s[i];
    if (c == '<') {
      ++i;
      std::string name = cellname();
      expect('>');
      if (name.empty()) fail("empty cell name");
      auto [cell, d] = split_degenerate(name);
      return basic(cell, d);
    }
    if (c == '0') {
      ++i;
      if (i < s.size() && ident_char(s[i])) fail("bad numeral");
      return zero();
    }
    std::size_t start = i;
    std::string id = ident();
    if (id == "G") {
      std::string nx = peek_ident();
      if (!nx.empty() && !is_keyword(nx)) {
        i += nx.size();
        return base(nx);
      }
      return base("G");
    }
    if (id == "N") return nat();
    if (id == "Id") {
      expect('(');
      Expr A = expr();
      expect(',');
      Expr a = expr();
      expect(',');
      Expr b = expr();
      expect(')');
      return id_type(A, a, b);
    }
    if (id == "Pi" || id == "Sigma" || id == "lam") {
      std::string x = binder();
      expect(':');
      Expr A = expr();
      expect('.');
      Expr body = under({x});
      Kind k = id == "Pi" ? Kind::Pi : id == "Sigma" ? Kind::Sigma : Kind::Lam;
      return make(k, {A, body}, {}, 0, {x});
    }
    if (id == "S" || id == "r") {
      expect('(');
      Expr a = expr();
      expect(')');
      return id == "S" ? succ(a) : refl(a);
    }
    if (id == "app" || id == "pair") {
      expect('(');
      Expr a = expr();
      expect(',');
      Expr b = expr();
      expect(')');
      return id == "app" ? app(a, b) : pair(a, b);
    }
    if (id == "R") {
      expect('(');
      expect('[');
      std::string x = binder();
      expect(':');
      Expr A = expr();
      expect(',');
      std::string y = binder();
      expect(':');
      Expr B = under({x});
      expect(']');
      Expr psi = under({x, y});
      expect(',');
      Expr p = expr();
      expect(')');
      return make(Kind::SigElim, {A, B, psi, p}, {}, 0, {x, y});
    }
    if (id == "rec") {
      expect('(');
      Expr n = expr();
      expect(',');
      Expr cc = expr();
      expect(',');
      expect('[');
      std::string x = binder();
      expect(',');
      std::string y = binder();
      expect(']');
      Expr g = under({x, y});
      expect(')');
      return make(Kind::Rec, {n, cc, g}, {}, 0, {x, y});
    }
    if (id == "J") {
      expect('(');
      expect('[');
      std::string x = binder();
      expect(',');
      std::string y = binder();
      expect(':');
      Expr A = expr();
      expect(',');
      std::string z = binder();
      expect(':');
      std::size_t zpos = i;
      Expr zt = under({x, y});
      Expr want = id_type(A, bvar(1), bvar(0));
      if (!alpha_equal(zt, want)) throw ParseError(zpos, "J pattern: third variable must have type Id(A, x, y)");
      expect(']');
      Expr B = under({x, y, z});
      expect(',');
      expect('[');
      std::string w = binder();
      expect(':');
      std::size_t wpos = i;
      Expr wt = expr();
      if (!alpha_equal(wt, A)) throw ParseError(wpos, "J family binder type differs from pattern type");
      expect(']');
      Expr phi = under({w});
      expect(',');
      Expr a = expr();
      expect(',');
      Expr b = expr();
      expect(',');
      Expr f = expr();
      expect(')');
      return make(Kind::J, {A, B, phi, a, b, f}, {}, 0, {x, y, z, w});
    }
    if (is_keyword(id)) {
      i = start;
      fail("unexpected keyword '" + id + "'");
    }
    return name_ref(id);
  }
};

}  // namespace detail

inline Expr parse_expression(const std::string& text) {
  detail::Parser p(text);
  Expr e = p.expr();
  p.ws();
  if (p.i != text.size()) p.fail("trailing input");
  return e;
}

// Parse several top-level expressions separated by `sep` at nesting depth 0.
inline std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '>') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// ---- contexts and judgements ----

struct Context {
  std::vector<std::pair<std::string, Expr>> decls;

  const Expr* lookup(const std::string& n) const {
    for (auto it = decls.rbegin(); it != decls.rend(); ++it)
      if (it->first == n) return &it->second;
    return nullptr;
  }
  Context extend(const std::string& n, Expr t) const {
    Context c = *this;
    c.decls.emplace_back(n, std::move(t));
    return c;
  }
  bool has(const std::string& n) const { return lookup(n) != nullptr; }
  std::size_t size() const { return decls.size(); }
};

enum class JudgementKind { TypeFormation, TermTyping, TypeEquality, TermEquality };

struct Judgement {
  Context ctx;
  JudgementKind kind = JudgementKind::TermTyping;
  Expr lhs;   // the type, or the term
  Expr rhs;   // second type/term for equalities
  Expr type;  // the type for term judgements
};

}  // namespace mlcx
