#include "doctest.h"
#include "mlcx/derived.hpp"
#include "mlcx/enumerate.hpp"

using namespace mlcx;

namespace {

Expr P(const std::string& s) { return parse_expression(s); }

GlobularSet W() { return validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"f", 1, "a", "b"}}); }

bool has(const std::vector<Expr>& v, const Expr& e) {
  for (auto& x : v)
    if (alpha_equal(x, e)) return true;
  return false;
}

}  // namespace

TEST_CASE("size one terms of G") {
  auto ts = enumerate_closed_terms(adjoin_globular(1, W()), base(), 1);
  REQUIRE(ts.size() == 2);
  CHECK(has(ts, basic("a")));
  CHECK(has(ts, basic("b")));
}

TEST_CASE("budget zero is empty") {
  CHECK(enumerate_closed_terms(adjoin_globular(1, W()), base(), 0).empty());
}

TEST_CASE("identity type terms") {
  Theory T = adjoin_globular(1, W());
  Expr G = base(), a = basic("a"), b = basic("b"), f = basic("f");
  Expr A = id_type(G, a, b);
  auto ts = enumerate_closed_terms(T, A, term_size(flat_term(G, a, b, f)));
  CHECK(has(ts, f));
  CHECK_FALSE(has(ts, refl(a)));
  CHECK(has(ts, flat_term(G, a, b, f)));
  for (auto& t : ts) CHECK(check_term(T, {}, t, A).accepted);
  auto loops = enumerate_closed_terms(T, id_type(G, a, a), 2);
  CHECK(has(loops, refl(a)));
  CHECK(has(loops, P("<i(a)>")));
}

TEST_CASE("doppelgangers appear at size seven") {
  Theory T = adjoin_globular(1, W());
  auto ts = enumerate_closed_terms(T, base(), 7);
  CHECK(has(ts, P("J([x,y:G,z:Id(G,x,y)] G, [w:G] <a>, <a>, <b>, <f>)")));
  CHECK(has(ts, P("J([x,y:G,z:Id(G,x,y)] G, [w:G] w, <a>, <b>, <f>)")));
  std::vector<int> sizes;
  for (auto& t : ts) sizes.push_back(term_size(t));
  CHECK(std::is_sorted(sizes.begin(), sizes.end()));
}

TEST_CASE("determinism and monotonicity") {
  Theory T = adjoin_globular(1, W());
  auto x = enumerate_closed_terms(T, base(), 7);
  auto y = enumerate_closed_terms(T, base(), 7);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(alpha_equal(x[i], y[i]));
  auto small = enumerate_closed_terms(T, base(), 5);
  REQUIRE(small.size() <= x.size());
  for (std::size_t i = 0; i < small.size(); ++i) CHECK(alpha_equal(small[i], x[i]));
}

TEST_CASE("numerals, functions and pairs") {
  Theory T = plain_theory();
  auto ns = enumerate_closed_terms(T, nat(), 3);
  CHECK(has(ns, numeral(2)));
  auto fs = enumerate_closed_terms(T, P("Pi x:N. N"), 4);
  CHECK(has(fs, P("lam x:N. x")));
  CHECK(has(fs, P("lam x:N. S(x)")));
  auto ps = enumerate_closed_terms(T, P("Sigma x:N. N"), 3);
  CHECK(has(ps, pair(zero(), zero())));
  auto rs = enumerate_closed_terms(T, nat(), 4);
  CHECK(has(rs, P("rec(0, 0, [x,y] 0)")));
}
