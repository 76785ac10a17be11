#include "doctest.h"
#include "mlcx/monad.hpp"
#include "mlcx/semantics.hpp"

using namespace mlcx;

namespace {

Expr P(const std::string& s) { return parse_expression(s); }

GlobularSet W() { return validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"f", 1, "a", "b"}}); }
GlobularSet point() { return validate_globular({{"p", 0, "", ""}}); }
GlobularSet discrete2() { return validate_globular({{"u", 0, "", ""}, {"v", 0, "", ""}}); }

TCell cell(std::vector<Expr> comps) {
  int d = static_cast<int>(comps.size() / 2);
  return TCell{d, std::move(comps)};
}

}  // namespace

TEST_CASE("unit on generators") {
  CHECK(unit_eta(W(), "f") == cell({basic("a"), basic("b"), basic("f")}));
  CHECK(unit_eta(W(), "a") == cell({basic("a")}));
  TCell ia = unit_eta(W(), "i(a)");
  CHECK(ia.dim == 1);
  CHECK(def_equal(adjoin_globular(kOmega, W()), {}, ia.top(), refl(basic("a")), P("Id(G, <a>, <a>)")));
  CHECK(unit_eta(W(), "f").name() == "(<a>, <b>; <f>)");
}

TEST_CASE("generated globular set") {
  Theory T1 = adjoin_globular(1, W());
  CHECK(glob_of_type(T1, base(), 0).size() == 0);
  auto fr = glob_of_type(T1, base(), 3);
  REQUIRE(fr.cells.size() >= 2);
  CHECK(fr.contains(cell({basic("a"), basic("b"), basic("f")})));
  for (auto& layer : fr.cells)
    for (auto& c : layer) CHECK(tcell_valid(T1, base(), c));
  GlobularSet g = fr.to_globular();
  CHECK(g.has("(<a>, <b>; <f>)"));
  // monotone in the budget
  auto big = glob_of_type(T1, base(), 5);
  for (auto& layer : fr.cells)
    for (auto& c : layer) CHECK(big.contains(c));
}

TEST_CASE("dimension zero classes match components") {
  Theory T0 = adjoin_globular(0, discrete2());
  auto fr = glob_of_type(T0, base(), 7, 0);
  CHECK(fr.class_count(0) == pi0(discrete2()).size());
  auto fw = glob_of_type(adjoin_globular(0, W()), base(), 7, 0);
  CHECK(fw.class_count(0) == 1);
  auto f1 = glob_of_type(adjoin_globular(1, W()), base(), 7, 0);
  CHECK(f1.class_count(0) > fw.class_count(0));
}

TEST_CASE("multiplication removes the outer brackets") {
  FreeMonad m({W()});
  TCell a = m.eta("a");
  TCell outer = cell({basic(a.name())});
  CHECK(m.mu(outer) == a);
  TCell f = m.eta("f");
  CHECK(mult_mu(W(), {f}, cell({basic(f.source().name()), basic(f.target().name()), basic(f.name())})) == f);
}

TEST_CASE("monad laws on enumerated cells") {
  Theory T1 = adjoin_globular(1, W());
  auto fr = glob_of_type(T1, base(), 5);
  FreeMonad m({W()});
  std::vector<TCell> t1;
  for (auto& layer : fr.cells)
    for (auto& c : layer) t1.push_back(m.remember(c));
  REQUIRE(t1.size() > 4);
  std::vector<TCell> t2;
  for (auto& c : t1) {
    CHECK(m.left_unit(c));
    CHECK(m.right_unit(c));
    t2.push_back(m.eta(c));
    t2.push_back(m.T_eta(c));
  }
  // genuine T^2 terms over the fragment
  GlobularSet tg = fr.to_globular();
  auto f2 = glob_of_type(adjoin_globular(1, tg), base(), 2);
  for (auto& layer : f2.cells)
    for (auto& c : layer) t2.push_back(m.remember(c));
  for (auto& c2 : t2) {
    CHECK(m.left_unit(c2));
    CHECK(m.right_unit(c2));
    CHECK(m.associative(m.eta(c2)));
    CHECK(m.associative(m.T_eta(c2)));
    CHECK(m.associative(m.TT_eta(c2)));
  }
}

TEST_CASE("functorial action on cells") {
  std::map<std::string, std::string> collapse{{"a", "p"}, {"b", "p"}, {"f", "i(p)"}};
  TCell f = unit_eta(W(), "f");
  TCell img = map_cells(cell_fn(collapse), f);
  CHECK(img == cell({basic("p"), basic("p"), basic("p", 1)}));
  std::map<std::string, std::string> id{{"a", "a"}, {"b", "b"}, {"f", "f"}};
  auto fr = glob_of_type(adjoin_globular(1, W()), base(), 5);
  std::map<std::string, std::string> swap{{"a", "b"}, {"b", "a"}, {"f", "f"}};
  for (auto& layer : fr.cells)
    for (auto& c : layer) {
      CHECK(map_cells(cell_fn(id), c) == c);
      // (collapse . swap)_* = collapse_* . swap_*
      std::map<std::string, std::string> both;
      for (auto& [k, v] : swap) both[k] = collapse.at(v);
      CHECK(map_cells(cell_fn(both), c) == map_cells(cell_fn(collapse), map_cells(cell_fn(swap), c)));
    }
  // induced morphism preserves typing
  TheoryMorphism phi{adjoin_globular(1, W()), adjoin_globular(1, point()), collapse};
  CHECK(phi.is_globular_map());
  for (auto& c : fr.cells[0]) CHECK(check_term(phi.target, {}, phi.apply(c.top()), base()).accepted);
}

TEST_CASE("flavor inclusions") {
  TCell f = unit_eta(W(), "f");
  CHECK(include_flavor(kOmega, 1, f) == f);
  CHECK_THROWS(include_flavor(0, 1, f));
  CHECK_FALSE(def_equal(adjoin_globular(1, W()), {}, basic("a"), basic("b"), base()));
  CHECK(def_equal(adjoin_globular(0, W()), {}, basic("a"), basic("b"), base()));
  TCell a = unit_eta(W(), "a");
  CHECK(include_flavor(1, 0, unit_eta(W(), "a")) == a);
}

TEST_CASE("coequalizers") {
  Theory pt = adjoin_globular(1, point()), d2 = adjoin_globular(1, discrete2());
  TheoryMorphism f{pt, d2, {{"p", "u"}}}, g{pt, d2, {{"p", "v"}}};
  Theory q = coequalizer_theory(f, g);
  CHECK(def_equal(q, {}, basic("u"), basic("v"), base()));
  CHECK_FALSE(def_equal(d2, {}, basic("u"), basic("v"), base()));
  Theory same = coequalizer_theory(f, f);
  CHECK(same.equations.empty());
  TheoryMorphism bad{adjoin_globular(1, W()), d2, {{"a", "u"}, {"b", "u"}, {"f", "i(u)"}}};
  CHECK_THROWS_AS(coequalizer_theory(f, bad), NotParallel);
  // the quotient map preserves derivable judgements
  auto terms = enumerate_closed_terms(d2, P("Id(G, <u>, <u>)"), 11);
  REQUIRE(terms.size() >= 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(check_term(q, {}, terms[i], P("Id(G, <u>, <u>)")).accepted);
    Expr n = normalize(d2, {}, terms[i]);
    CHECK(def_equal(q, {}, terms[i], n, P("Id(G, <u>, <u>)")));
  }
}

TEST_CASE("coproducts") {
  std::vector<std::map<std::string, std::string>> ren;
  Theory c = coproduct_theory({adjoin_globular(1, W()), adjoin_globular(1, point())}, &ren);
  CHECK(c.gset->of_dim(0).size() == 3);
  CHECK_FALSE(def_equal(c, {}, basic("a"), basic("p"), base()));
  Model m(c);
  CHECK_FALSE(m.inhabited(P("Id(G, <a>, <p>)")));
  CHECK(m.inhabited(P("Id(G, <a>, <b>)")));
  Theory ww = coproduct_theory({adjoin_globular(1, W()), adjoin_globular(1, W())}, &ren);
  CHECK(ww.gset->of_dim(0).size() == 4);
  CHECK(ren.back().at("f") == "f_1");
  CHECK(ww.gset->src("f_1") == "a_1");
}
