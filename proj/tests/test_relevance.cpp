#include "doctest.h"
#include "mlcx/relevance.hpp"

using namespace mlcx;

namespace {

Expr P(const std::string& s) { return parse_expression(s); }

GlobularSet Wc() {
  return validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"c", 0, "", ""}, {"f", 1, "a", "b"}});
}
GlobularSet P3() {
  return validate_globular(
      {{"a", 0, "", ""}, {"b", 0, "", ""}, {"c", 0, "", ""}, {"f", 1, "a", "b"}, {"g", 1, "b", "c"}});
}
GlobularSet loop() { return validate_globular({{"a", 0, "", ""}, {"e", 1, "a", "a"}}); }
GlobularSet C2() {
  return validate_globular(
      {{"a", 0, "", ""}, {"b", 0, "", ""}, {"f", 1, "a", "b"}, {"g", 1, "a", "b"}, {"al", 2, "f", "g"}});
}

}  // namespace

TEST_CASE("classify_type") {
  CHECK(classify_type(base()) == Relevance::Base);
  CHECK(classify_type(P("Id(G, <a>, <b>)")) == Relevance::Id);
  CHECK(classify_type(P("Id(N, 0, 0)")) == Relevance::Irrelevant);
  CHECK(classify_type(nat()) == Relevance::Nat);
  CHECK(classify_type(P("Pi x:N. G")) == Relevance::Pi);
  CHECK(classify_type(P("Pi x:G. Id(N, 0, 0)")) == Relevance::Irrelevant);
  CHECK(classify_type(P("Sigma x:Id(N,0,0). G")) == Relevance::Sigma);
  CHECK(classify_type(P("Id(G, J([x,y:G,z:Id(G,x,y)] G, [x:G] <a>, <a>, <b>, <f>), <b>)")) == Relevance::Irrelevant);
}

TEST_CASE("is_formal_composite") {
  Expr G = base(), a = basic("a"), b = basic("b"), c = basic("c"), f = basic("f"), g = basic("g");
  CHECK(is_formal_composite(f));
  CHECK(is_formal_composite(refl(a)));
  CHECK(is_formal_composite(inverse(G, a, c, compose(G, a, b, c, f, g))));
  CHECK_FALSE(is_formal_composite(P("J([x,y:G,z:Id(G,x,y)] G, [x:G] <c>, <a>, <b>, <f>)")));
  CHECK_FALSE(is_formal_composite(flat_term(G, a, b, f)));
}

TEST_CASE("canonicalize: base type") {
  Canonicalizer cz(adjoin_globular(1, Wc()));
  Expr dop = P("J([x,y:G,z:Id(G,x,y)] G, [x:G] <c>, <a>, <b>, <f>)");
  auto r = cz.canonicalize(dop, base());
  CHECK(alpha_equal(r.canonical, basic("c")));
  CHECK(r.kind == CanonKind::Basic);
  CHECK(r.strategy == "contraction");
  auto s = cz.canonicalize(sharp_term(base(), basic("a"), basic("b"), basic("f")), base());
  CHECK(alpha_equal(s.canonical, basic("a")));
  // idempotence
  auto i = cz.canonicalize(basic("c"), base());
  CHECK(alpha_equal(i.canonical, basic("c")));
  CHECK(alpha_equal(i.witness, refl(basic("c"))));
}

TEST_CASE("canonicalize: identity types") {
  Theory T = adjoin_globular(1, P3());
  Canonicalizer cz(T);
  Expr G = base(), a = basic("a"), b = basic("b"), c = basic("c"), f = basic("f"), g = basic("g");
  auto fl = cz.canonicalize(flat_term(G, a, b, f), id_type(G, a, b));
  CHECK(alpha_equal(fl.canonical, f));
  CHECK(fl.kind == CanonKind::FormalComposite);
  Expr e = compose(G, a, b, a, f, inverse(G, a, b, f));
  auto r = cz.canonicalize(e, id_type(G, a, a));
  CHECK(alpha_equal(r.canonical, refl(a)));
  Expr gf = inverse(G, c, a, inverse(G, a, c, compose(G, a, b, c, f, g)));
  auto r2 = cz.canonicalize(gf, id_type(G, a, c));
  CHECK(alpha_equal(r2.canonical, compose(G, a, b, c, f, g)));
  CHECK(r2.strategy == "paths");
  // Psi agrees
  CHECK(cz.model().same(cz.model().eval(gf), cz.model().eval(r2.canonical)));
}

TEST_CASE("canonicalize: loops use path normalisation") {
  Theory T = adjoin_globular(1, loop());
  Canonicalizer cz(T);
  Expr G = base(), a = basic("a"), e = basic("e");
  Expr t = compose(G, a, a, a, compose(G, a, a, a, e, inverse(G, a, a, e)), e);
  auto r = cz.canonicalize(t, id_type(G, a, a));
  CHECK(alpha_equal(r.canonical, e));
  CHECK_THROWS_AS(cz.canonicalize(flat_term(G, a, a, e), id_type(G, a, a)), CanonFailure);
}

TEST_CASE("canonicalize: numerals") {
  Canonicalizer cz(adjoin_globular(1, Wc()));
  auto r = cz.numeral_normalize(P("rec(S(0), 0, [x,y] S(y))"));
  CHECK(alpha_equal(r.canonical, numeral(1)));
  auto z = cz.numeral_normalize(P("J([x,y:G,z:Id(G,x,y)] N, [x:G] 0, <a>, <b>, <f>)"));
  CHECK(alpha_equal(z.canonical, zero()));
  CHECK(z.strategy == "contraction");
  auto n = cz.numeral_normalize(numeral(2));
  CHECK(alpha_equal(n.witness, refl(numeral(2))));
  auto q = cz.numeral_normalize(P("rec(J([x,y:G,z:Id(G,x,y)] N, [x:G] S(0), <a>, <b>, <f>), S(0), [x,y] S(S(y)))"));
  CHECK(alpha_equal(q.canonical, numeral(3)));
}

TEST_CASE("canonicalize: pairs and opaque types") {
  Canonicalizer cz(adjoin_globular(1, Wc()));
  Expr S = P("Sigma x:G. N");
  Expr p = pair(P("J([x,y:G,z:Id(G,x,y)] G, [x:G] <c>, <a>, <b>, <f>)"), P("J([x,y:G,z:Id(G,x,y)] N, [x:G] 0, <a>, <b>, <f>)"));
  auto r = cz.canonicalize(p, S);
  CHECK(alpha_equal(r.canonical, pair(basic("c"), zero())));
  CHECK(r.kind == CanonKind::Pair);
  auto o = cz.canonicalize(P("lam x:N. x"), P("Pi x:N. N"));
  CHECK(o.kind == CanonKind::OpaqueIrrelevant);
}

TEST_CASE("canonicalize: truncated theories") {
  Canonicalizer c0(adjoin_globular(0, Wc()));
  auto r = c0.canonicalize(basic("b"), base());
  CHECK(r.strategy == "conversion");
  std::vector<Expr> terms{basic("a"), basic("b"), basic("c"), P("J([x,y:G,z:Id(G,x,y)] G, [x:G] x, <a>, <b>, <f>)")};
  CHECK(canonical_class_count(c0, terms) == 2);
  // 2-cells collapse in T1
  Canonicalizer c1(adjoin_globular(1, C2()));
  auto g = c1.canonicalize(basic("g"), P("Id(G, <a>, <b>)"));
  CHECK(alpha_equal(g.canonical, basic("f")));
}

TEST_CASE("canonicalize: stuck eliminators on loops") {
  Theory T = adjoin_globular(1, loop());
  Canonicalizer cz(T);
  Expr dop = P("J([x,y:G,z:Id(G,x,y)] G, [w:G] w, <a>, <a>, <e>)");
  auto d = cz.canonicalize(dop, base());
  CHECK(alpha_equal(d.canonical, basic("a")));
  CHECK(d.strategy == "eliminator-rewriting");
  CHECK(check_term(T, {}, d.witness, id_type(base(), dop, d.canonical)).accepted);
  Expr t = P("rec(J([x,y:G,z:Id(G,x,y)] N, [w:G] 0, <a>, <a>, <e>), <a>, [n,y] y)");
  auto r = cz.canonicalize(t, base());
  CHECK(alpha_equal(r.canonical, basic("a")));
  CHECK(check_term(T, {}, r.witness, id_type(base(), t, r.canonical)).accepted);
}
