#include "doctest.h"
#include "mlcx/syntax.hpp"

#include <random>

using namespace mlcx;

namespace {

Expr P(const std::string& s) { return parse_expression(s); }

// small random expressions over a fixed vocabulary, for property checks
Expr random_expr(std::mt19937& rng, int depth, std::vector<std::string>& scope) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 11);
  auto leaf = [&]() -> Expr {
    std::uniform_int_distribution<int> l(0, 3 + static_cast<int>(scope.size()));
    int k = l(rng);
    if (k == 0) return zero();
    if (k == 1) return basic("a");
    if (k == 2) return var("u");
    if (k == 3) return var("w");
    return var(scope[static_cast<std::size_t>(k - 4)]);
  };
  switch (pick(rng)) {
    case 0: case 1: case 2: case 3: return leaf();
    case 4: return succ(random_expr(rng, depth - 1, scope));
    case 5: return refl(random_expr(rng, depth - 1, scope));
    case 6: return app(random_expr(rng, depth - 1, scope), random_expr(rng, depth - 1, scope));
    case 7: return pair(random_expr(rng, depth - 1, scope), random_expr(rng, depth - 1, scope));
    case 8: {
      std::string x = "x" + std::to_string(scope.size());
      scope.push_back(x);
      Expr b = random_expr(rng, depth - 1, scope);
      scope.pop_back();
      return lam(x, nat(), b);
    }
    case 9: {
      std::string x = "x" + std::to_string(scope.size());
      std::string y = "y" + std::to_string(scope.size());
      Expr n = random_expr(rng, depth - 1, scope);
      scope.push_back(x);
      scope.push_back(y);
      Expr g = random_expr(rng, depth - 1, scope);
      scope.pop_back();
      scope.pop_back();
      return rec(n, zero(), x, y, g);
    }
    case 10: return id_type(base("G"), random_expr(rng, depth - 1, scope), random_expr(rng, depth - 1, scope));
    default: {
      std::string x = "x" + std::to_string(scope.size());
      scope.push_back(x);
      Expr phi = random_expr(rng, depth - 1, scope);
      scope.pop_back();
      return jelim("p", "q", "z", base("G"), base("G"), x, phi, basic("a"), basic("b"), random_expr(rng, depth - 1, scope));
    }
  }
}
}  // namespace

TEST_CASE("parse: constructors") {
  CHECK(alpha_equal(P("r(<a>)"), refl(basic("a"))));
  CHECK(alpha_equal(P("app(lam x:N. x, 0)"), app(lam("x", nat(), var("x")), zero())));
  Expr j = P("J([x,y:G,z:Id(G,x,y)] G, [x:G] c, a, b, f)");
  REQUIRE(j->kind == Kind::J);
  CHECK(j->kids[0]->kind == Kind::Base);
  CHECK(alpha_equal(j->kids[1], base("G")));
  CHECK(alpha_equal(j->kids[2], var("c")));
  CHECK(alpha_equal(j, jelim("x", "y", "z", base(), base(), "x", var("c"), var("a"), var("b"), var("f"))));
}

TEST_CASE("parse: errors carry positions") {
  CHECK_THROWS_AS(P("app(0"), ParseError);
  CHECK_THROWS_AS(P("lam r:N. r"), ParseError);
  CHECK_THROWS_AS(P("J([x,y:G,z:Id(G,y,x)] G, [x:G] x, a, b, f)"), ParseError);
  CHECK_THROWS_AS(P("J([x,y:G,z:Id(G,x,y)] G, [x:N] x, a, b, f)"), ParseError);
  try {
    P("S(0) junk");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.pos == 5);
  }
}

TEST_CASE("parse: base names and degenerate cells") {
  CHECK(P("G")->name == "G");
  CHECK(P("G H")->name == "H");
  Expr d = P("<i(i(a))>");
  CHECK(d->kind == Kind::Basic);
  CHECK(d->name == "a");
  CHECK(d->index == 2);
  CHECK(print(d) == "<i(i(a))>");
  // G followed by a keyword is the default base
  CHECK(alpha_equal(P("Pi x:G. N"), pi("x", base(), nat())));
}

TEST_CASE("substitute") {
  CHECK(alpha_equal(substitute(var("x"), "x", zero()), zero()));
  Expr l = lam("x", nat(), var("x"));
  CHECK(alpha_equal(substitute(l, "x", zero()), l));
  CHECK(alpha_equal(substitute(P("Id(G, x, <b>)"), "x", basic("a")), P("Id(G, <a>, <b>)")));
  // no capture: substituting y := x under a binder named x
  Expr body = lam("x", nat(), app(var("y"), var("x")));
  Expr s = substitute(body, "y", var("x"));
  CHECK(print(s) == "lam x1:N. app(x, x1)");
}

TEST_CASE("alpha_equal") {
  CHECK(alpha_equal(P("lam x:N. x"), P("lam y:N. y")));
  CHECK_FALSE(alpha_equal(P("lam x:N. x"), P("lam x:N. 0")));
  CHECK(alpha_equal(P("J([x,y:G,z:Id(G,x,y)] Id(G,x,y), [x:G] r(x), a, b, f)"),
                    P("J([u,v:G,w:Id(G,u,v)] Id(G,u,v), [t:G] r(t), a, b, f)")));
  CHECK_FALSE(alpha_equal(P("J([x,y:G,z:Id(G,x,y)] Id(G,x,y), [x:G] r(x), a, b, f)"),
                          P("J([x,y:G,z:Id(G,x,y)] Id(G,y,x), [x:G] r(x), a, b, f)")));
}

TEST_CASE("replace_basic and iterated_id_type") {
  std::map<std::string, Expr> m{{"a", basic("b")}};
  CHECK(alpha_equal(replace_basic(basic("a"), m, "H"), basic("b")));
  CHECK(alpha_equal(replace_basic(refl(basic("a")), m, "H"), refl(basic("b"))));
  CHECK(alpha_equal(replace_basic(zero(), {}, "H"), zero()));
  CHECK(alpha_equal(replace_basic(P("Id(G, <a>, <a>)"), m, "H"), P("Id(G H, <b>, <b>)")));
  CHECK(alpha_equal(replace_basic(basic("a", 1), m, "H"), refl(basic("b"))));
  CHECK_THROWS_AS(replace_basic(basic("q"), m, "H"), MissingCell);

  Expr G = base();
  CHECK(alpha_equal(iterated_id_type(G, {}), G));
  CHECK(alpha_equal(iterated_id_type(G, {{var("a"), var("b")}}), id_type(G, var("a"), var("b"))));
  CHECK(alpha_equal(iterated_id_type(G, {{var("a"), var("b")}, {var("f"), var("g")}}),
                    id_type(id_type(G, var("a"), var("b")), var("f"), var("g"))));
}

TEST_CASE("size counts every node") {
  CHECK(term_size(basic("a")) == 1);
  CHECK(term_size(P("r(<a>)")) == 2);
  CHECK(term_size(P("lam x:N. x")) == 3);
  // J: A once, B, phi, a, b, f
  CHECK(term_size(P("J([x,y:G,z:Id(G,x,y)] G, [x:G] <c>, <a>, <b>, <f>)")) == 7);
}

TEST_CASE("properties: round trip, substitution lemma, congruence") {
  std::mt19937 rng(7);
  for (int i = 0; i < 400; ++i) {
    std::vector<std::string> sc;
    Expr e = random_expr(rng, 4, sc);
    std::string s = print(e);
    Expr back = parse_expression(s);
    INFO(s);
    CHECK(alpha_equal(back, e));
    CHECK(print(back) == s);

    // substitute(substitute(e,v,s),w,t) = substitute(substitute(e,w,t),v,substitute(s,w,t))
    Expr s1 = random_expr(rng, 2, sc);
    Expr t1 = zero();  // v not free in t
    Expr lhs = substitute(substitute(e, "u", s1), "w", t1);
    Expr rhs = substitute(substitute(e, "w", t1), "u", substitute(s1, "w", t1));
    CHECK(alpha_equal(lhs, rhs));

    // replace_basic commutes with constructors
    std::map<std::string, Expr> m{{"a", basic("c")}, {"b", basic("d")}};
    Expr wrapped = refl(pair(e, s1));
    CHECK(alpha_equal(replace_basic(wrapped, m, "G"),
                      refl(pair(replace_basic(e, m, "G"), replace_basic(s1, m, "G")))));
  }
}

TEST_CASE("open and close are inverse") {
  Expr body = abstract(app(var("x"), var("y")), {"x", "y"});
  CHECK(body->kids[0]->kind == Kind::BVar);
  Expr back = instantiate(body, {var("x"), var("y")});
  CHECK(alpha_equal(back, app(var("x"), var("y"))));
  Expr swapped = instantiate(body, {var("y"), var("x")});
  CHECK(alpha_equal(swapped, app(var("y"), var("x"))));
}
