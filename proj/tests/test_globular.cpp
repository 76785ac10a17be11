#include "doctest.h"
#include "mlcx/globular.hpp"

#include <random>

using namespace mlcx;

namespace {

GlobularSet W() { return validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"f", 1, "a", "b"}}); }
GlobularSet discrete2() { return validate_globular({{"u", 0, "", ""}, {"v", 0, "", ""}}); }
GlobularSet path_plus_point() {
  return validate_globular(
      {{"a", 0, "", ""}, {"b", 0, "", ""}, {"c", 0, "", ""}, {"d", 0, "", ""}, {"f", 1, "a", "b"}, {"g", 1, "b", "c"}});
}
GlobularSet C2() {
  return validate_globular(
      {{"a", 0, "", ""}, {"b", 0, "", ""}, {"f", 1, "a", "b"}, {"g", 1, "a", "b"}, {"al", 2, "f", "g"}});
}
GlobularSet loop() { return validate_globular({{"a", 0, "", ""}, {"e", 1, "a", "a"}}); }

// independent oracle: naive closure over edges
std::set<std::set<std::string>> closure_classes(const GlobularSet& g) {
  std::map<std::string, std::set<std::string>> cls;
  for (auto& v : g.of_dim(0)) cls[v] = {v};
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& e : g.of_dim(1)) {
      auto s = cls[g.src(e)];
      auto t = cls[g.tgt(e)];
      if (s == t) continue;
      std::set<std::string> u = s;
      u.insert(t.begin(), t.end());
      for (auto& x : u) cls[x] = u;
      changed = true;
    }
  }
  std::set<std::set<std::string>> out;
  for (auto& [k, v] : cls) out.insert(v);
  return out;
}

// independent oracle: rewrite at a random position until no redex
Word rewrite_randomly(Word w, std::mt19937& rng) {
  for (;;) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i].edge == w[i + 1].edge && w[i].inv != w[i + 1].inv) pos.push_back(i);
    if (pos.empty()) return w;
    std::size_t p = pos[std::uniform_int_distribution<std::size_t>(0, pos.size() - 1)(rng)];
    w.erase(w.begin() + static_cast<long>(p), w.begin() + static_cast<long>(p) + 2);
  }
}

}  // namespace

TEST_CASE("validate_globular") {
  CHECK_NOTHROW(W());
  try {
    validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"i(a)", 1, "b", "a"}});
    FAIL("expected violation");
  } catch (const GlobularError& e) {
    REQUIRE(!e.violations.empty());
    CHECK(e.violations[0].identity == "eq-2.2");
  }
  try {
    validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"c", 0, "", ""}, {"f", 1, "a", "b"}, {"g", 1, "c", "b"},
                       {"al", 2, "f", "g"}});
    FAIL("expected violation");
  } catch (const GlobularError& e) {
    REQUIRE(e.violations.size() == 1);
    CHECK(e.violations[0].identity == "eq-2.1");
    CHECK(e.violations[0].cell == "al");
  }
}

TEST_CASE("file format") {
  auto raw = parse_globular_text("gset v1\n# walking arrow\ncell a : 0\ncell b:0\ncell f : 1 a b\n");
  CHECK(raw.size() == 3);
  auto g = validate_globular(raw);
  CHECK(g.src("f") == "a");
  CHECK_THROWS_AS(parse_globular_text("cell a : 0\n"), FormatError);
}

TEST_CASE("pi0") {
  CHECK(pi0(W()).size() == 1);
  CHECK(pi0(discrete2()).size() == 2);
  auto p = pi0(path_plus_point());
  std::set<std::set<std::string>> got;
  for (auto& c : p) got.insert(std::set<std::string>(c.begin(), c.end()));
  CHECK(got == closure_classes(path_plus_point()));
  CHECK(got.size() == 2);
}

TEST_CASE("truncate") {
  auto t0 = truncate(W(), 0);
  CHECK(t0.result.of_dim(0).size() == 1);
  CHECK(t0.result.of_dim(1).empty());
  auto t1 = truncate(C2(), 1);
  CHECK(t1.result.of_dim(1).size() == 1);
  CHECK(t1.cell_map["f"] == t1.cell_map["g"]);
  CHECK(t1.cell_map["al"] == "i(f)");
  auto td = truncate(discrete2(), 0);
  CHECK(td.result.of_dim(0).size() == 2);
  for (auto& g : {W(), C2(), discrete2(), path_plus_point()}) CHECK(pi0(truncate(g, 1).result) == pi0(g));
}

TEST_CASE("reduce_word") {
  auto g = W();
  auto r = reduce_word(g, {{"f", false}, {"f", true}});
  CHECK(r.word.empty());
  CHECK(r.dom == "a");
  CHECK(r.cod == "a");
  auto r2 = reduce_word(g, {{"i(a)", false}});
  CHECK(r2.word.empty());
  CHECK(r2.dom == "a");
  auto p = path_plus_point();
  auto r3 = reduce_word(p, {{"f", false}, {"g", false}});
  CHECK(r3.word.size() == 2);
  CHECK_THROWS_AS(reduce_word(p, {{"g", false}, {"f", false}}), ChainError);

  // confluence against random rewriting orders
  auto lp = loop();
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    Word w;
    int n = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int k = 0; k < n; ++k) w.push_back({"e", std::uniform_int_distribution<int>(0, 1)(rng) == 1});
    auto red = reduce_word(lp, w, "a");
    CHECK(red.word == rewrite_randomly(w, rng));
    CHECK(reduce_word(lp, red.word, "a").word == red.word);
  }
}

TEST_CASE("groupoid laws on words") {
  auto lp = loop();
  auto all = free_groupoid_hom(lp, "a", "a", 3);
  for (auto& x : all)
    for (auto& y : all) {
      for (auto& z : all) CHECK(compose_arrows(lp, z, compose_arrows(lp, y, x)) == compose_arrows(lp, compose_arrows(lp, z, y), x));
      CHECK(compose_arrows(lp, x, identity_arrow("a")) == x);
    }
  for (auto& x : all) CHECK(compose_arrows(lp, inverse_arrow(x), x).word.empty());
}

TEST_CASE("free_groupoid_hom") {
  auto h = free_groupoid_hom(W(), "a", "b", 4);
  REQUIRE(h.size() == 1);
  CHECK(h[0].word == Word{{"f", false}});
  // brute force oracle: all letter strings of length <= 4, reduced, ending at b
  {
    auto g = W();
    std::set<Word> found;
    std::vector<Letter> L{{"f", false}, {"f", true}};
    std::vector<Word> cur{{}};
    for (int len = 0; len <= 4; ++len) {
      std::vector<Word> next;
      for (auto& w : cur) {
        try {
          auto r = reduce_word(g, w, "a");
          if (r.cod == "b") found.insert(r.word);
        } catch (const ChainError&) {
        }
        for (auto& l : L) {
          Word w2 = w;
          w2.push_back(l);
          next.push_back(w2);
        }
      }
      cur = next;
    }
    CHECK(found.size() == 1);
  }
  auto l = free_groupoid_hom(loop(), "a", "a", 2);
  CHECK(l.size() == 5);
  CHECK(free_groupoid_hom(discrete2(), "u", "v", 5).empty());
}

TEST_CASE("quotient groupoid") {
  // walking isomorphism: f:a->b, g:b->a with g.f = 1, f.g = 1
  auto g = validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"f", 1, "a", "b"}, {"g", 1, "b", "a"}});
  QuotientGroupoid q(g, {}, {{{{"f", false}, {"g", false}}, {}}, {{{"g", false}, {"f", false}}, {}}});
  CHECK(q.exact());
  CHECK(q.finite());
  CHECK(q.equal({"b", "a", {{"g", false}}}, {"b", "a", {{"f", true}}}));
  auto fg = to_finite_groupoid(q);
  CHECK(fg.arrows.size() == 4);
  CHECK(fg.check_laws().empty());

  QuotientGroupoid free(loop(), {}, {});
  CHECK_FALSE(free.finite());
  CHECK_FALSE(free.equal({"a", "a", {{"e", false}}}, {"a", "a", {}}));
  CHECK(free.normalize({"a", "a", {{"e", false}, {"e", true}, {"e", false}}}).word == Word{{"e", false}});
}

TEST_CASE("check_equivalence") {
  QuotientGroupoid qw(W(), {}, {});
  auto w = to_finite_groupoid(qw);
  FiniteFunctor id{&w, &w, {0, 1}, {}};
  for (std::size_t i = 0; i < w.arrows.size(); ++i) id.on_arrows.push_back(i);
  auto r = check_equivalence(id);
  CHECK(r.faithful);
  CHECK(r.full);
  CHECK(r.essentially_surjective);

  auto t = terminal_groupoid();
  QuotientGroupoid qd(discrete2(), {}, {});
  auto d = to_finite_groupoid(qd);
  FiniteFunctor bang{&d, &t, {0, 0}, std::vector<std::size_t>(d.arrows.size(), 0)};
  auto r2 = check_equivalence(bang);
  CHECK(r2.faithful);
  CHECK_FALSE(r2.full);
  CHECK(r2.essentially_surjective);

  auto gi = validate_globular({{"a", 0, "", ""}, {"b", 0, "", ""}, {"f", 1, "a", "b"}, {"g", 1, "b", "a"}});
  QuotientGroupoid qi(gi, {}, {{{{"f", false}, {"g", false}}, {}}, {{{"g", false}, {"f", false}}, {}}});
  auto iso = to_finite_groupoid(qi);
  FiniteFunctor bang2{&iso, &t, {0, 0}, std::vector<std::size_t>(iso.arrows.size(), 0)};
  auto r3 = check_equivalence(bang2);
  CHECK(r3.equivalence());

  FiniteFunctor broken{&w, &w, {0, 1}, std::vector<std::size_t>(w.arrows.size(), 0)};
  CHECK_THROWS_AS(check_equivalence(broken), FunctorError);
}
