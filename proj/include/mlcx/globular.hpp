// Finite reflexive globular sets, connected components, truncation,
// free groupoids on graphs and their quotients, finite groupoids.
#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlcx {

struct CellDecl {
  std::string name;
  int dim = 0;
  std::string src, tgt;  // empty for dimension 0
};

struct GlobularViolation {
  int dim;
  std::string cell;
  std::string identity;  // "eq-2.1", "eq-2.2", "endpoint", "duplicate", ...
  std::string detail;
};

struct GlobularError : std::runtime_error {
  std::vector<GlobularViolation> violations;
  explicit GlobularError(std::vector<GlobularViolation> v)
      : std::runtime_error(describe(v)), violations(std::move(v)) {}
  static std::string describe(const std::vector<GlobularViolation>& v) {
    std::string s = "invalid globular set:";
    for (auto& x : v) s += " [" + x.identity + " at " + x.cell + " dim " + std::to_string(x.dim) + ": " + x.detail + "]";
    return s;
  }
};

// Degenerate cells are written i(x) and never stored.
inline bool is_degenerate_name(const std::string& n) {
  return n.size() > 3 && n.compare(0, 2, "i(") == 0 && n.back() == ')';
}
inline std::string degenerate_base(std::string n, int* level = nullptr) {
  int d = 0;
  while (is_degenerate_name(n)) {
    n = n.substr(2, n.size() - 3);
    ++d;
  }
  if (level) *level = d;
  return n;
}
inline std::string degenerate_of(const std::string& n, int k = 1) {
  std::string s = n;
  for (int i = 0; i < k; ++i) s = "i(" + s + ")";
  return s;
}

class GlobularSet {
 public:
  GlobularSet() = default;

  const std::vector<CellDecl>& cells() const { return cells_; }
  bool has(const std::string& n) const {
    std::string b = degenerate_base(n);
    return index_.count(b) > 0;
  }
  const CellDecl& decl(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw std::out_of_range("unknown cell " + n);
    return cells_[it->second];
  }
  int dim(const std::string& n) const {
    int k = 0;
    std::string b = degenerate_base(n, &k);
    return decl(b).dim + k;
  }
  std::string src(const std::string& n) const {
    if (is_degenerate_name(n)) return n.substr(2, n.size() - 3);
    return decl(n).src;
  }
  std::string tgt(const std::string& n) const {
    if (is_degenerate_name(n)) return n.substr(2, n.size() - 3);
    return decl(n).tgt;
  }
  // boundary j-cell on side `side` (0 source, 1 target) of cell n
  std::string boundary(const std::string& n, int j, int side) const {
    std::string c = n;
    int d = dim(n);
    if (j >= d) return n;
    while (d > j + 1) {
      c = src(c);
      --d;
    }
    return side == 0 ? src(c) : tgt(c);
  }
  std::vector<std::string> of_dim(int d) const {
    std::vector<std::string> out;
    for (auto& c : cells_)
      if (c.dim == d) out.push_back(c.name);
    return out;
  }
  int max_dim() const {
    int m = -1;
    for (auto& c : cells_) m = std::max(m, c.dim);
    return m;
  }
  std::string name = "G";

  friend GlobularSet validate_globular(const std::vector<CellDecl>& raw, const std::string& name);

 private:
  std::vector<CellDecl> cells_;
  std::map<std::string, std::size_t> index_;
};

// Checks the raw data and returns the validated set, or throws with every
// violation found. Declared cells named i(x) are treated as explicit
// reflexivity data and checked against s(i(x)) = x = t(i(x)).
inline GlobularSet validate_globular(const std::vector<CellDecl>& raw, const std::string& name = "G") {
  std::vector<GlobularViolation> bad;
  GlobularSet g;
  g.name = name;
  std::map<std::string, const CellDecl*> by;
  std::vector<const CellDecl*> explicit_degen;
  for (auto& c : raw) {
    if (c.dim < 0) {
      bad.push_back({c.dim, c.name, "dimension", "negative dimension"});
      continue;
    }
    if (is_degenerate_name(c.name)) {
      explicit_degen.push_back(&c);
      continue;
    }
    if (by.count(c.name)) {
      bad.push_back({c.dim, c.name, "duplicate", "cell declared twice"});
      continue;
    }
    by[c.name] = &c;
  }
  auto dim_of = [&](const std::string& n) -> int {
    int k = 0;
    std::string b = degenerate_base(n, &k);
    auto it = by.find(b);
    return it == by.end() ? -1 : it->second->dim + k;
  };
  auto src_of = [&](const std::string& n) -> std::string {
    if (is_degenerate_name(n)) return n.substr(2, n.size() - 3);
    auto it = by.find(n);
    return it == by.end() ? std::string() : it->second->src;
  };
  auto tgt_of = [&](const std::string& n) -> std::string {
    if (is_degenerate_name(n)) return n.substr(2, n.size() - 3);
    auto it = by.find(n);
    return it == by.end() ? std::string() : it->second->tgt;
  };
  for (auto& [n, c] : by) {
    if (c->dim == 0) {
      if (!c->src.empty() || !c->tgt.empty()) bad.push_back({0, n, "endpoint", "vertex with endpoints"});
      continue;
    }
    bool ok = true;
    for (const std::string* e : {&c->src, &c->tgt}) {
      if (e->empty()) {
        bad.push_back({c->dim, n, "endpoint", "missing endpoint"});
        ok = false;
      } else if (dim_of(*e) != c->dim - 1) {
        bad.push_back({c->dim, n, "endpoint", "endpoint " + *e + " is not a cell of dimension " + std::to_string(c->dim - 1)});
        ok = false;
      }
    }
    if (!ok || c->dim < 2) continue;
    if (src_of(c->src) != src_of(c->tgt))
      bad.push_back({c->dim, n, "eq-2.1", "s(s(x)) != s(t(x))"});
    if (tgt_of(c->src) != tgt_of(c->tgt))
      bad.push_back({c->dim, n, "eq-2.1", "t(s(x)) != t(t(x))"});
  }
  for (auto* c : explicit_degen) {
    std::string b = c->name.substr(2, c->name.size() - 3);
    if (dim_of(b) < 0) {
      bad.push_back({c->dim, c->name, "eq-2.2", "degenerate cell of unknown cell " + b});
      continue;
    }
    if (c->src != b) bad.push_back({c->dim, c->name, "eq-2.2", "s(i(x)) != x"});
    if (c->tgt != b) bad.push_back({c->dim, c->name, "eq-2.2", "t(i(x)) != x"});
    if (c->dim != dim_of(b) + 1) bad.push_back({c->dim, c->name, "eq-2.2", "i(x) has wrong dimension"});
  }
  if (!bad.empty()) throw GlobularError(std::move(bad));
  for (auto& c : raw) {
    if (is_degenerate_name(c.name)) continue;
    g.index_[c.name] = g.cells_.size();
    g.cells_.push_back(c);
  }
  return g;
}

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<CellDecl> parse_globular_text(const std::string& text) {
  std::vector<CellDecl> out;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "gset" || tok[1] != "v1")
        throw FormatError("line " + std::to_string(lineno) + ": expected 'gset v1'");
      header = true;
      continue;
    }
    // allow "cell a:0" as well as "cell a : 0"
    std::vector<std::string> t2;
    for (auto& t : tok) {
      std::size_t p = 0;
      while (p < t.size()) {
        auto c = t.find(':', p);
        if (c == std::string::npos) {
          t2.push_back(t.substr(p));
          break;
        }
        if (c > p) t2.push_back(t.substr(p, c - p));
        t2.push_back(":");
        p = c + 1;
      }
    }
    if (t2.size() < 4 || t2[0] != "cell" || t2[2] != ":")
      throw FormatError("line " + std::to_string(lineno) + ": expected 'cell NAME : DIM [SRC TGT]'");
    CellDecl d;
    d.name = t2[1];
    try {
      d.dim = std::stoi(t2[3]);
    } catch (...) {
      throw FormatError("line " + std::to_string(lineno) + ": bad dimension");
    }
    if (t2.size() == 6) {
      d.src = t2[4];
      d.tgt = t2[5];
    } else if (t2.size() != 4) {
      throw FormatError("line " + std::to_string(lineno) + ": wrong number of fields");
    }
    out.push_back(d);
  }
  if (!header) throw FormatError("missing 'gset v1' header");
  return out;
}

inline GlobularSet load_globular(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return validate_globular(parse_globular_text(ss.str()));
}

// ---- union-find ----

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : p_(n) { std::iota(p_.begin(), p_.end(), 0); }
  std::size_t add() {
    p_.push_back(p_.size());
    return p_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (p_[x] != x) x = p_[x] = p_[p_[x]];
    return x;
  }
  // the smaller index stays representative
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    p_[b] = a;
    return true;
  }
  std::size_t size() const { return p_.size(); }

 private:
  std::vector<std::size_t> p_;
};

// ---- components and truncation ----

using Partition = std::vector<std::vector<std::string>>;

inline Partition pi0(const GlobularSet& g) {
  auto vs = g.of_dim(0);
  std::map<std::string, std::size_t> ix;
  for (std::size_t i = 0; i < vs.size(); ++i) ix[vs[i]] = i;
  UnionFind uf(vs.size());
  for (auto& e : g.of_dim(1)) uf.unite(ix.at(g.src(e)), ix.at(g.tgt(e)));
  std::map<std::size_t, std::vector<std::string>> cls;
  for (std::size_t i = 0; i < vs.size(); ++i) cls[uf.find(i)].push_back(vs[i]);
  Partition out;
  for (auto& [k, v] : cls) {
    std::sort(v.begin(), v.end());
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Truncation {
  GlobularSet result;
  std::map<std::string, std::string> cell_map;  // original cell -> cell (possibly degenerate) of result
};

inline Truncation truncate(const GlobularSet& g, int n) {
  if (n != 0 && n != 1) throw std::invalid_argument("truncation level must be 0 or 1");
  Truncation t;
  std::vector<CellDecl> raw;
  if (n == 0) {
    for (auto& cls : pi0(g)) {
      raw.push_back({cls.front(), 0, "", ""});
      for (auto& v : cls) t.cell_map[v] = cls.front();
    }
    for (auto& c : g.cells())
      if (c.dim > 0) t.cell_map[c.name] = degenerate_of(t.cell_map[degenerate_base(g.boundary(c.name, 0, 0))], c.dim);
    t.result = validate_globular(raw, g.name);
    return t;
  }
  for (auto& v : g.of_dim(0)) {
    raw.push_back({v, 0, "", ""});
    t.cell_map[v] = v;
  }
  // edges and degenerate 1-cells, glued along 2-cells
  std::vector<std::string> ones = g.of_dim(1);
  std::map<std::string, std::size_t> ix;
  for (std::size_t i = 0; i < ones.size(); ++i) ix[ones[i]] = i;
  auto slot = [&](const std::string& c) {
    auto it = ix.find(c);
    if (it != ix.end()) return it->second;
    ones.push_back(c);
    ix[c] = ones.size() - 1;
    return ones.size() - 1;
  };
  std::vector<std::pair<std::string, std::string>> glue;
  for (auto& c : g.of_dim(2)) glue.emplace_back(g.src(c), g.tgt(c));
  UnionFind uf(ones.size());
  for (auto& [a, b] : glue) {
    std::size_t i = slot(a), j = slot(b);
    while (uf.size() < ones.size()) uf.add();
    uf.unite(i, j);
  }
  std::map<std::size_t, std::string> rep;
  // a class containing an identity is degenerate; otherwise the smallest name represents it
  for (std::size_t i = 0; i < ones.size(); ++i) {
    auto r = uf.find(i);
    auto& cur = rep[r];
    const std::string& c = ones[i];
    if (cur.empty()) {
      cur = c;
    } else if (is_degenerate_name(c) && !is_degenerate_name(cur)) {
      cur = c;
    } else if (is_degenerate_name(c) == is_degenerate_name(cur) && c < cur) {
      cur = c;
    }
  }
  for (auto& [r, c] : rep)
    if (!is_degenerate_name(c)) raw.push_back({c, 1, g.src(c), g.tgt(c)});
  for (std::size_t i = 0; i < ones.size(); ++i)
    if (!is_degenerate_name(ones[i])) t.cell_map[ones[i]] = rep[uf.find(i)];
  for (auto& c : g.cells())
    if (c.dim > 1) t.cell_map[c.name] = degenerate_of(t.cell_map[g.boundary(c.name, 1, 0)], c.dim - 1);
  t.result = validate_globular(raw, g.name);
  return t;
}

inline bool is_forest(const GlobularSet& g) {
  auto vs = g.of_dim(0);
  std::map<std::string, std::size_t> ix;
  for (std::size_t i = 0; i < vs.size(); ++i) ix[vs[i]] = i;
  UnionFind uf(vs.size());
  for (auto& e : g.of_dim(1))
    if (!uf.unite(ix.at(g.src(e)), ix.at(g.tgt(e)))) return false;
  return true;
}

// ---- free groupoid words ----

struct Letter {
  std::string edge;
  bool inv = false;
  bool operator==(const Letter&) const = default;
  auto operator<=>(const Letter&) const = default;
};
using Word = std::vector<Letter>;

struct GroupoidArrow {
  std::string dom, cod;
  Word word;
  bool operator==(const GroupoidArrow&) const = default;
  auto operator<=>(const GroupoidArrow&) const = default;
};

struct ChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string letter_src(const GlobularSet& g, const Letter& l) { return l.inv ? g.tgt(l.edge) : g.src(l.edge); }
inline std::string letter_tgt(const GlobularSet& g, const Letter& l) { return l.inv ? g.src(l.edge) : g.tgt(l.edge); }

inline std::string word_string(const Word& w) {
  if (w.empty()) return "[]";
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += " ";
    s += w[i].edge + (w[i].inv ? "^-1" : "");
  }
  return s + "]";
}
inline std::string arrow_string(const GroupoidArrow& a) { return a.dom + "->" + a.cod + " " + word_string(a.word); }

// Letters are listed in traversal order. `start` is needed only when every
// letter is an identity or the list is empty.
inline GroupoidArrow reduce_word(const GlobularSet& g, const Word& letters, const std::string& start = {}) {
  std::string at = start;
  std::string first;
  Word st;
  for (auto& l : letters) {
    if (g.dim(l.edge) != 1) throw ChainError("letter " + l.edge + " is not a 1-cell");
    std::string s = letter_src(g, l), t = letter_tgt(g, l);
    if (first.empty()) first = s;
    if (!at.empty() && at != s) throw ChainError("letter " + l.edge + " starts at " + s + " but path is at " + at);
    at = t;
    if (is_degenerate_name(l.edge)) continue;
    if (!st.empty() && st.back().edge == l.edge && st.back().inv != l.inv)
      st.pop_back();
    else
      st.push_back(l);
  }
  if (!start.empty()) first = start;
  if (first.empty()) throw ChainError("empty word needs a base vertex");
  return {first, at, st};
}

inline GroupoidArrow compose_arrows(const GlobularSet& g, const GroupoidArrow& second, const GroupoidArrow& first) {
  if (first.cod != second.dom) throw ChainError("non-composable arrows");
  Word w = first.word;
  w.insert(w.end(), second.word.begin(), second.word.end());
  return reduce_word(g, w, first.dom);
}
inline GroupoidArrow inverse_arrow(const GroupoidArrow& a) {
  Word w;
  for (auto it = a.word.rbegin(); it != a.word.rend(); ++it) w.push_back({it->edge, !it->inv});
  return {a.cod, a.dom, w};
}
inline GroupoidArrow identity_arrow(const std::string& v) { return {v, v, {}}; }

// Reduced words a -> b of length <= max_len, shortest first then lexicographic.
inline std::vector<GroupoidArrow> free_groupoid_hom(const GlobularSet& g, const std::string& a, const std::string& b,
                                                    int max_len) {
  std::vector<GroupoidArrow> out;
  std::vector<Letter> all;
  for (auto& e : g.of_dim(1)) {
    all.push_back({e, false});
    all.push_back({e, true});
  }
  std::sort(all.begin(), all.end());
  std::vector<std::pair<std::string, Word>> layer{{a, {}}};
  for (int len = 0; len <= max_len; ++len) {
    for (auto& [v, w] : layer)
      if (v == b) out.push_back({a, b, w});
    if (len == max_len) break;
    std::vector<std::pair<std::string, Word>> next;
    for (auto& [v, w] : layer)
      for (auto& l : all) {
        if (letter_src(g, l) != v) continue;
        if (!w.empty() && w.back().edge == l.edge && w.back().inv != l.inv) continue;
        Word w2 = w;
        w2.push_back(l);
        next.emplace_back(letter_tgt(g, l), std::move(w2));
      }
    layer = std::move(next);
  }
  return out;
}

// ---- quotients of free groupoids ----

// F(G) on the 1-cells of g with vertices glued by `vertex_eqs` and arrows
// glued by `relators` (pairs of words with equal endpoints). Arrows are
// normalised through a spanning forest into the vertex groups; generators
// that occur exactly once in some relator are eliminated, which decides the
// fixtures used here. Anything left undecided is reported via `exact()`.
class QuotientGroupoid {
 public:
  QuotientGroupoid() = default;
  QuotientGroupoid(const GlobularSet& g, const std::vector<std::pair<std::string, std::string>>& vertex_eqs,
                   const std::vector<std::pair<Word, Word>>& relators)
      : g_(g) {
    auto vs = g.of_dim(0);
    for (std::size_t i = 0; i < vs.size(); ++i) vix_[vs[i]] = i;
    UnionFind uf(vs.size());
    for (auto& [x, y] : vertex_eqs) uf.unite(vix_.at(x), vix_.at(y));
    for (auto& v : vs) vclass_[v] = vs[uf.find(vix_.at(v))];
    // spanning forest of the glued graph; path_[v] is a word root -> v
    std::map<std::string, std::vector<std::pair<std::string, Letter>>> adj;
    for (auto& e : g.of_dim(1)) {
      std::string s = vclass_.at(g.src(e)), t = vclass_.at(g.tgt(e));
      adj[s].push_back({t, {e, false}});
      adj[t].push_back({s, {e, true}});
    }
    std::set<std::string> seen;
    for (auto& v : vs) {
      std::string c = vclass_.at(v);
      if (seen.count(c)) continue;
      seen.insert(c);
      root_[c] = c;
      path_[c] = {};
      std::vector<std::string> queue{c};
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::string u = queue[qi];
        for (auto& [w, l] : adj[u]) {
          if (seen.count(w)) continue;
          seen.insert(w);
          tree_.insert(l.edge);
          root_[w] = c;
          path_[w] = path_[u];
          path_[w].push_back(l);
          queue.push_back(w);
        }
      }
    }
    for (auto& e : g.of_dim(1))
      if (!tree_.count(e)) gens_.push_back(e);
    std::vector<GWord> rels;
    for (auto& [l, r] : relators) {
      GWord w = loop_word(l);
      GWord x = loop_word(r);
      for (auto it = x.rbegin(); it != x.rend(); ++it) w.push_back({it->first, !it->second});
      rels.push_back(free_reduce(w));
    }
    eliminate(rels);
  }

  const GlobularSet& graph() const { return g_; }
  std::string vertex_class(const std::string& v) const { return vclass_.at(v); }
  bool exact() const { return exact_; }
  // vertex groups are trivial, so the quotient is a finite groupoid
  bool finite() const { return exact_ && free_gens_.empty(); }

  // Canonical representative: the reduced word obtained by expanding the
  // normalised loop through the tree. Endpoints are the original vertices.
  GroupoidArrow normalize(const GroupoidArrow& a) const {
    GWord w = reduce_generators(loop_word(a.word, a.dom));
    std::string ra = vclass_.at(a.dom), rb = vclass_.at(a.cod);
    Word out = invert(path_.at(ra));
    for (auto& [e, inv] : w) {
      std::string s = vclass_.at(g_.src(e)), t = vclass_.at(g_.tgt(e));
      Word piece = path_.at(s);
      piece.push_back({e, false});
      Word back = invert(path_.at(t));
      piece.insert(piece.end(), back.begin(), back.end());
      if (inv) piece = invert(piece);
      out.insert(out.end(), piece.begin(), piece.end());
    }
    Word tail = path_.at(rb);
    out.insert(out.end(), tail.begin(), tail.end());
    return {a.dom, a.cod, reduce_free(out)};
  }
  bool equal(const GroupoidArrow& x, const GroupoidArrow& y) const {
    if (vclass_.at(x.dom) != vclass_.at(y.dom) || vclass_.at(x.cod) != vclass_.at(y.cod)) return false;
    return normalize(x).word == normalize(y).word;
  }
  bool connected(const std::string& a, const std::string& b) const {
    return root_.at(vclass_.at(a)) == root_.at(vclass_.at(b));
  }
  GroupoidArrow compose(const GroupoidArrow& second, const GroupoidArrow& first) const {
    Word w = first.word;
    w.insert(w.end(), second.word.begin(), second.word.end());
    return normalize({first.dom, second.cod, w});
  }
  GroupoidArrow inverse(const GroupoidArrow& a) const { return normalize(inverse_arrow(a)); }

  // The unique arrow class a -> b when the quotient is finite.
  std::optional<GroupoidArrow> tree_arrow(const std::string& a, const std::string& b) const {
    if (!connected(a, b)) return std::nullopt;
    Word w = invert(path_.at(vclass_.at(a)));
    Word t = path_.at(vclass_.at(b));
    w.insert(w.end(), t.begin(), t.end());
    return normalize({a, b, w});
  }

  std::vector<std::string> remaining_generators() const { return free_gens_; }

 private:
  using GWord = std::vector<std::pair<std::string, bool>>;

  static Word invert(const Word& w) {
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->edge, !it->inv});
    return out;
  }
  static Word reduce_free(const Word& w) {
    Word st;
    for (auto& l : w) {
      if (is_degenerate_name(l.edge)) continue;
      if (!st.empty() && st.back().edge == l.edge && st.back().inv != l.inv)
        st.pop_back();
      else
        st.push_back(l);
    }
    return st;
  }
  static GWord free_reduce(const GWord& w) {
    GWord st;
    for (auto& l : w) {
      if (!st.empty() && st.back().first == l.first && st.back().second != l.second)
        st.pop_back();
      else
        st.push_back(l);
    }
    return st;
  }
  // word in the non-tree generators; the endpoint vertex is only checked
  GWord loop_word(const Word& w, const std::string& = {}) const {
    GWord out;
    for (auto& l : w) {
      if (is_degenerate_name(l.edge) || tree_.count(l.edge)) continue;
      out.push_back({l.edge, l.inv});
    }
    return free_reduce(out);
  }
  GWord substitute(const GWord& w) const {
    GWord out;
    for (auto& [e, inv] : w) {
      auto it = solved_.find(e);
      if (it == solved_.end()) {
        out.push_back({e, inv});
        continue;
      }
      GWord s = it->second;
      if (inv) {
        std::reverse(s.begin(), s.end());
        for (auto& x : s) x.second = !x.second;
      }
      out.insert(out.end(), s.begin(), s.end());
    }
    return free_reduce(out);
  }
  GWord reduce_generators(const GWord& w) const {
    GWord cur = w;
    for (int round = 0; round < 64; ++round) {
      GWord nxt = substitute(cur);
      if (nxt == cur) break;
      cur = nxt;
    }
    return cur;
  }
  static GWord cyclic_reduce(GWord w) {
    while (w.size() >= 2 && w.front().first == w.back().first && w.front().second != w.back().second) {
      w.erase(w.begin());
      w.pop_back();
    }
    return w;
  }
  void eliminate(std::vector<GWord> rels) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto& r : rels) {
        r = cyclic_reduce(reduce_generators(r));
        if (r.empty()) continue;
        std::map<std::string, int> count;
        for (auto& [e, inv] : r) ++count[e];
        // solve for a generator occurring once: rotate so it comes first
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (count[r[i].first] != 1) continue;
          GWord rot(r.begin() + static_cast<long>(i), r.end());
          rot.insert(rot.end(), r.begin(), r.begin() + static_cast<long>(i));
          // rot = e^s * rest = 1  =>  e^s = rest^-1
          GWord rest(rot.begin() + 1, rot.end());
          std::reverse(rest.begin(), rest.end());
          for (auto& x : rest) x.second = !x.second;
          if (rot.front().second) {
            std::reverse(rest.begin(), rest.end());
            for (auto& x : rest) x.second = !x.second;
          }
          solved_[rot.front().first] = rest;
          r.clear();
          progress = true;
          break;
        }
      }
    }
    for (auto& r : rels) {
      r = cyclic_reduce(reduce_generators(r));
      if (!r.empty()) exact_ = false;
    }
    for (auto& e : gens_)
      if (!solved_.count(e)) free_gens_.push_back(e);
  }

  GlobularSet g_;
  std::map<std::string, std::size_t> vix_;
  std::map<std::string, std::string> vclass_;
  std::map<std::string, std::string> root_;
  std::map<std::string, Word> path_;
  std::set<std::string> tree_;
  std::vector<std::string> gens_;
  std::vector<std::string> free_gens_;
  std::map<std::string, GWord> solved_;
  bool exact_ = true;
};

// ---- finite groupoids and equivalence checking ----

struct FiniteGroupoid {
  std::vector<std::string> objects;
  struct Arrow {
    std::size_t dom, cod;
    std::string name;
  };
  std::vector<Arrow> arrows;
  std::vector<std::vector<long>> comp;  // comp[g][f] = g∘f, -1 if not composable
  std::vector<std::size_t> identity;    // per object
  std::vector<std::size_t> inverse;     // per arrow

  std::vector<std::size_t> hom(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < arrows.size(); ++i)
      if (arrows[i].dom == a && arrows[i].cod == b) out.push_back(i);
    return out;
  }

  // empty string when the category and groupoid laws hold
  std::string check_laws() const {
    const std::size_t n = arrows.size();
    if (comp.size() != n) return "composition table size";
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t f = 0; f < n; ++f) {
        bool composable = arrows[f].cod == arrows[g].dom;
        if (composable != (comp[g][f] >= 0)) return "composition table totality";
        if (!composable) continue;
        auto& h = arrows[static_cast<std::size_t>(comp[g][f])];
        if (h.dom != arrows[f].dom || h.cod != arrows[g].cod) return "composite endpoints";
      }
    for (std::size_t o = 0; o < objects.size(); ++o) {
      std::size_t id = identity[o];
      for (std::size_t f = 0; f < n; ++f) {
        if (arrows[f].dom == o && comp[f][id] != static_cast<long>(f)) return "right unit";
        if (arrows[f].cod == o && comp[id][f] != static_cast<long>(f)) return "left unit";
      }
    }
    for (std::size_t f = 0; f < n; ++f) {
      std::size_t fi = inverse[f];
      if (comp[fi][f] != static_cast<long>(identity[arrows[f].dom])) return "left inverse";
      if (comp[f][fi] != static_cast<long>(identity[arrows[f].cod])) return "right inverse";
    }
    for (std::size_t f = 0; f < n; ++f)
      for (std::size_t g = 0; g < n; ++g) {
        if (comp[g][f] < 0) continue;
        for (std::size_t h = 0; h < n; ++h) {
          if (comp[h][g] < 0) continue;
          if (comp[h][static_cast<std::size_t>(comp[g][f])] != comp[static_cast<std::size_t>(comp[h][g])][f])
            return "associativity";
        }
      }
    return {};
  }
};

inline FiniteGroupoid terminal_groupoid() {
  FiniteGroupoid t;
  t.objects = {"*"};
  t.arrows = {{0, 0, "id"}};
  t.comp = {{0}};
  t.identity = {0};
  t.inverse = {0};
  return t;
}

// The finite groupoid presented by a quotient with trivial vertex groups.
inline FiniteGroupoid to_finite_groupoid(const QuotientGroupoid& q) {
  if (!q.finite()) throw std::invalid_argument("quotient groupoid is not finite");
  FiniteGroupoid fg;
  std::map<std::string, std::size_t> oi;
  for (auto& v : q.graph().of_dim(0)) {
    std::string c = q.vertex_class(v);
    if (oi.count(c)) continue;
    oi[c] = fg.objects.size();
    fg.objects.push_back(c);
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ar;
  for (std::size_t a = 0; a < fg.objects.size(); ++a)
    for (std::size_t b = 0; b < fg.objects.size(); ++b) {
      auto t = q.tree_arrow(fg.objects[a], fg.objects[b]);
      if (!t) continue;
      ar[{a, b}] = fg.arrows.size();
      fg.arrows.push_back({a, b, word_string(t->word)});
    }
  const std::size_t n = fg.arrows.size();
  fg.comp.assign(n, std::vector<long>(n, -1));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f)
      if (fg.arrows[f].cod == fg.arrows[g].dom) fg.comp[g][f] = static_cast<long>(ar.at({fg.arrows[f].dom, fg.arrows[g].cod}));
  for (std::size_t o = 0; o < fg.objects.size(); ++o) fg.identity.push_back(ar.at({o, o}));
  for (std::size_t f = 0; f < n; ++f) fg.inverse.push_back(ar.at({fg.arrows[f].cod, fg.arrows[f].dom}));
  return fg;
}

struct FiniteFunctor {
  const FiniteGroupoid* source = nullptr;
  const FiniteGroupoid* target = nullptr;
  std::vector<std::size_t> on_objects;
  std::vector<std::size_t> on_arrows;
};

struct EquivalenceReport {
  bool faithful = false, full = false, essentially_surjective = false;
  bool equivalence() const { return faithful && full && essentially_surjective; }
};

struct FunctorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline EquivalenceReport check_equivalence(const FiniteFunctor& F) {
  const auto& S = *F.source;
  const auto& T = *F.target;
  if (S.objects.size() > 64 || T.objects.size() > 64 || S.arrows.size() > 4096 || T.arrows.size() > 4096)
    throw FunctorError("groupoid exceeds 64 objects / 4096 arrows");
  if (F.on_objects.size() != S.objects.size() || F.on_arrows.size() != S.arrows.size())
    throw FunctorError("functor tables are not total");
  for (std::size_t f = 0; f < S.arrows.size(); ++f) {
    auto& a = S.arrows[f];
    auto& b = T.arrows[F.on_arrows[f]];
    if (b.dom != F.on_objects[a.dom] || b.cod != F.on_objects[a.cod])
      throw FunctorError("F(dom f) = dom F(f) fails at " + a.name);
  }
  for (std::size_t o = 0; o < S.objects.size(); ++o)
    if (F.on_arrows[S.identity[o]] != T.identity[F.on_objects[o]])
      throw FunctorError("F(id) = id fails at " + S.objects[o]);
  for (std::size_t g = 0; g < S.arrows.size(); ++g)
    for (std::size_t f = 0; f < S.arrows.size(); ++f) {
      if (S.comp[g][f] < 0) continue;
      long lhs = static_cast<long>(F.on_arrows[static_cast<std::size_t>(S.comp[g][f])]);
      long rhs = T.comp[F.on_arrows[g]][F.on_arrows[f]];
      if (lhs != rhs) throw FunctorError("F(g∘f) = F(g)∘F(f) fails at " + S.arrows[g].name + "∘" + S.arrows[f].name);
    }
  EquivalenceReport r;
  r.faithful = true;
  r.full = true;
  for (std::size_t a = 0; a < S.objects.size(); ++a)
    for (std::size_t b = 0; b < S.objects.size(); ++b) {
      std::set<std::size_t> img;
      auto h = S.hom(a, b);
      for (auto f : h) img.insert(F.on_arrows[f]);
      if (img.size() != h.size()) r.faithful = false;
      if (img.size() != T.hom(F.on_objects[a], F.on_objects[b]).size()) r.full = false;
    }
  r.essentially_surjective = true;
  for (std::size_t y = 0; y < T.objects.size(); ++y) {
    bool hit = false;
    for (std::size_t x = 0; x < S.objects.size() && !hit; ++x) hit = !T.hom(F.on_objects[x], y).empty();
    if (!hit) r.essentially_surjective = false;
  }
  return r;
}

}  // namespace mlcx
