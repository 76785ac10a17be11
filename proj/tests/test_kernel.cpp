#include "doctest.h"
#include "mlcx/kernel.hpp"

using namespace mlcx;

namespace {

Expr P(const std::string& s) { return parse_expression(s); }

GlobularSet W() { return validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"f", 1, "a", "b"}}); }
GlobularSet Wc() {
  return validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"c", 0, "", ""}, {"f", 1, "a", "b"}});
}
GlobularSet discrete2() { return validate_globular({{"u", 0, "", ""}, {"v", 0, "", ""}}); }

}  // namespace

TEST_CASE("adjoin_globular") {
  Theory T = adjoin_globular(1, W());
  CHECK(check_term(T, {}, P("<f>"), P("Id(G, <a>, <b>)")).accepted);
  CHECK(def_equal(T, {}, P("<i(a)>"), P("r(<a>)"), P("Id(G, <a>, <a>)")));
  auto bad = check_term(adjoin_globular(1, discrete2()), {}, P("<w>"), P("G"));
  CHECK_FALSE(bad.accepted);
  CHECK(bad.rule == "basic-term");
}

TEST_CASE("check_term") {
  Theory T = adjoin_globular(1, Wc());
  CHECK(check_term(T, {}, P("J([x,y:G,z:Id(G,x,y)] G, [x:G] <c>, <a>, <b>, <f>)"), P("G")).accepted);
  Theory O = plain_theory();
  CHECK(check_term(O, {}, P("lam x:N. x"), P("Pi x:N. N")).accepted);
  auto r = check_term(O, {}, P("r(0)"), P("Id(N, 0, S(0))"));
  CHECK_FALSE(r.accepted);
  CHECK(r.rule == "id-intro");
  // pattern type mismatch: family must land in B(x,x,r(x))
  CHECK_FALSE(check_term(T, {}, P("J([x,y:G,z:Id(G,x,y)] Id(G,x,y), [x:G] r(<a>), <a>, <b>, <f>)"),
                         P("Id(G, <a>, <b>)"))
                  .accepted);
  CHECK(check_term(T, {}, P("J([x,y:G,z:Id(G,x,y)] Id(G,x,y), [x:G] r(x), <a>, <b>, <f>)"), P("Id(G, <a>, <b>)"))
            .accepted);
}

TEST_CASE("infer_type") {
  Theory T = adjoin_globular(1, W());
  CHECK(alpha_equal(infer_type(T, {}, P("<a>")).type, P("G")));
  CHECK(alpha_equal(infer_type(plain_theory(), {}, P("app(lam x:N. x, 0)")).type, nat()));
  Context ctx;
  ctx.decls.emplace_back("p", P("Sigma x:N. N"));
  auto r = infer_type(plain_theory(), ctx, P("R([x:N,y:N] x, p)"));
  REQUIRE(r.accepted);
  CHECK(alpha_equal(r.type, nat()));
}

TEST_CASE("normalize") {
  Theory O = plain_theory();
  Context ctx;
  Expr n = normalize(O, ctx, P("rec(S(S(0)), c, [x,y] app(app(h, x), y))"));
  CHECK(alpha_equal(n, P("app(app(h, S(0)), app(app(h, 0), c))")));
  Expr j = normalize(O, ctx, P("J([x,y:N,z:Id(N,x,y)] N, [x:N] S(x), a, a, r(a))"));
  CHECK(alpha_equal(j, P("S(a)")));
  Expr s = normalize(O, ctx, P("R([x:N,y:N] app(app(k, y), x), pair(a, b))"));
  CHECK(alpha_equal(s, P("app(app(k, b), a)")));
  Theory T = adjoin_globular(kOmega, W());
  CHECK(alpha_equal(normalize(T, ctx, P("<i(i(a))>")), P("r(r(<a>))")));
  // normalisation under binders
  CHECK(alpha_equal(normalize(O, ctx, P("lam x:N. app(lam y:N. S(y), x)")), P("lam x:N. S(x)")));
}

TEST_CASE("def_equal with truncation") {
  Theory T0 = adjoin_globular(0, W());
  CHECK(def_equal(T0, {}, P("<a>"), P("<b>"), P("G")));
  Theory T1 = adjoin_globular(1, W());
  CHECK_FALSE(def_equal(T1, {}, P("<a>"), P("<b>"), P("G")));
  Context ctx;
  ctx.decls.emplace_back("p", P("Id(Id(G,<a>,<b>), <f>, <f>)"));
  CHECK(def_equal(T1, ctx, P("p"), P("r(<f>)"), P("Id(Id(G,<a>,<b>), <f>, <f>)")));
  CHECK_FALSE(def_equal(plain_theory(), {}, P("0"), P("S(0)"), nat()));
  // T0: J on an edge reduces by the truncated rule
  Theory T0c = adjoin_globular(0, Wc());
  CHECK(def_equal(T0c, {}, P("J([x,y:G,z:Id(G,x,y)] G, [x:G] <c>, <a>, <b>, <f>)"), P("<c>"), P("G")));
  // TR with a context inhabitant
  Context c2;
  c2.decls.emplace_back("x", P("G"));
  c2.decls.emplace_back("y", P("G"));
  c2.decls.emplace_back("q", P("Id(G, x, y)"));
  c2.decls.emplace_back("h", P("Pi v:G. G"));
  CHECK(def_equal(T0, c2, P("app(h, x)"), P("app(h, y)"), P("G")));
  CHECK_FALSE(def_equal(T1, c2, P("app(h, x)"), P("app(h, y)"), P("G")));
  // explicit inhabitant argument
  Context c3;
  c3.decls.emplace_back("x", P("G"));
  c3.decls.emplace_back("y", P("G"));
  c3.decls.emplace_back("h", P("Pi v:G. Id(G, x, y)"));
  CHECK_FALSE(def_equal(T0, c3, P("x"), P("y"), P("G")));
  CHECK(def_equal(T0, c3, P("x"), P("y"), P("G"), {P("app(h, x)")}));
}

TEST_CASE("equations") {
  Theory T = adjoin_globular(1, W());
  T.equations.push_back({P("<f>"), P("<f>"), P("Id(G,<a>,<b>)")});
  CHECK_NOTHROW(validate_equations(T));
  Theory U = adjoin_globular(1, discrete2());
  U.equations.push_back({P("<u>"), P("<v>"), P("G")});
  CHECK(def_equal(U, {}, P("<u>"), P("<v>"), P("G")));
  CHECK(def_equal(U, {}, P("r(<u>)"), P("r(<v>)"), P("Id(G,<u>,<u>)")));
  CHECK(check_term(U, {}, P("r(<u>)"), P("Id(G,<u>,<v>)")).accepted);
  Theory bad = adjoin_globular(1, discrete2());
  bad.equations.push_back({P("0"), P("0"), nat()});
  CHECK_THROWS_AS(validate_equations(bad), TypeError);
}

TEST_CASE("properties") {
  Theory T = adjoin_globular(1, Wc());
  Expr dop = P("J([x,y:G,z:Id(G,x,y)] G, [x:G] <c>, <a>, <b>, <f>)");
  Expr ident = P("lam x:G. J([p,q:G,z:Id(G,p,q)] G, [p:G] x, <a>, <b>, <f>)");
  // subject reduction
  Expr t = app(ident, basic("a"));
  REQUIRE(check_term(T, {}, t, base()).accepted);
  CHECK(check_term(T, {}, normalize(T, {}, t), base()).accepted);
  // weakening
  Context wk;
  wk.decls.emplace_back("unused", nat());
  CHECK(check_term(T, wk, dop, base()).accepted);
  // substitution
  Context cx;
  cx.decls.emplace_back("w", base());
  Expr body = P("J([x,y:G,z:Id(G,x,y)] G, [x:G] w, <a>, <b>, <f>)");
  REQUIRE(check_term(T, cx, body, base()).accepted);
  CHECK(check_term(T, {}, substitute(body, "w", basic("c")), base()).accepted);
  // flavour monotonicity: accepted in T1 implies accepted in T0
  for (auto& e : {dop, t, P("<f>")}) {
    Expr ty = infer_type(T, {}, e).type;
    CHECK(check_term(adjoin_globular(0, Wc()), {}, e, ty).accepted);
  }
  // def_equal is an equivalence and a congruence on samples
  Theory O = plain_theory();
  Expr a = P("app(lam x:N. S(x), 0)"), b = P("S(0)"), c = P("rec(S(0), 0, [x,y] S(y))");
  CHECK(def_equal(O, {}, a, b, nat()));
  CHECK(def_equal(O, {}, b, a, nat()));
  CHECK(def_equal(O, {}, b, c, nat()));
  CHECK(def_equal(O, {}, a, c, nat()));
  CHECK(def_equal(O, {}, succ(a), succ(c), nat()));
  CHECK(def_equal(O, {}, refl(a), refl(c), P("Id(N, S(0), S(0))")));
}

TEST_CASE("files") {
  auto j = parse_judgement_text("ctx\nvar x : N\ncheck lam y:N. x : Pi y:N. N\n");
  CHECK(j.ctx.size() == 1);
  CHECK(check_judgement(plain_theory(), j).accepted);
  auto e = parse_judgement_text("eq app(lam y:N. y, 0) = 0 : N\n");
  CHECK(e.kind == JudgementKind::TermEquality);
  CHECK(check_judgement(plain_theory(), e).accepted);
}
