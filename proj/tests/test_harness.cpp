#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mlcx/harness.hpp"

using namespace mlcx;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_terms(const std::vector<Expr>& x, const std::vector<Expr>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!alpha_equal(x[i], y[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("fixture files match the embedded fixtures") {
  for (auto& n : fixture_names()) {
    INFO(n);
    std::string dir = MLCX_FIXTURE_DIR;
    CHECK(slurp(dir + "/" + n + ".gset") == fixture_gset_text(n));
    CHECK(slurp(dir + "/" + n + ".theory") == fixture_theory_text(n));
    Theory T = load_theory(dir + "/" + n + ".theory");
    CHECK(T.gset->cells().size() == fixture(n).gset.cells().size());
    CHECK(T.equations.size() == fixture(n).equations.size());
  }
  CHECK_THROWS_AS(fixture("nope"), ConfigError);
}

TEST_CASE("fixture shapes") {
  CHECK(fixture("W").forest);
  CHECK_FALSE(fixture("loop").forest);
  CHECK(pi0(fixture("path_isolated").gset).size() == 2);
  CHECK(pi0(fixture("discrete2").gset).size() == 2);
  // iso equations hold definitionally
  Theory T = fixture("iso").theory();
  Expr G = base(), a = basic("a"), b = basic("b");
  CHECK(def_equal(T, {}, compose(G, a, b, a, basic("f"), basic("g")), refl(a), id_type(G, a, a)));
}

TEST_CASE("sharded enumeration equals the sequential one") {
  Theory T = fixture("W").theory();
  for (int jobs : {1, 2, 3}) {
    CHECK(same_terms(enumerate_sharded(T, base(), 7, jobs), enumerate_closed_terms(T, base(), 7)));
    CHECK(same_terms(enumerate_sharded(T, id_type(base(), basic("a"), basic("b")), 8, jobs),
                     enumerate_closed_terms(T, id_type(base(), basic("a"), basic("b")), 8)));
  }
}

TEST_CASE("reports merge and serialise") {
  SuiteReport x, y;
  x.suite = y.suite = "A1";
  x.fixture = "W";
  y.fixture = "P3";
  x.count("checked", 3);
  y.count("checked", 4);
  y.fail({"t", "G", "broken", "mlcx canon ..."});
  x.merge(y);
  CHECK(x.counts["checked"] == 7);
  CHECK(x.fixture == "W,P3");
  CHECK_FALSE(x.pass());
  auto j = x.to_json(false);
  CHECK(j["verdict"] == "fail");
  CHECK(j["failures"][0]["reproduce"] == "mlcx canon ...");
  CHECK_FALSE(j.contains("elapsed_ms"));
}

TEST_CASE("suite configuration errors") {
  CHECK_THROWS_AS(run_suite("A13", "", {}), ConfigError);
  CHECK_THROWS_AS(run_suite("A5", "W", {}), ConfigError);
  SuiteConfig bad;
  bad.jobs = 0;
  CHECK_THROWS_AS(run_suite("A1", "W", bad), ConfigError);
}

TEST_CASE("parallel and sequential suite runs agree") {
  SuiteConfig c1, c3;
  c1.size = c3.size = 7;
  c3.jobs = 3;
  auto r1 = run_suite("A1", "default", c1), r3 = run_suite("A1", "default", c3);
  CHECK(r1.pass());
  CHECK(r1.counts == r3.counts);
  CHECK(r1.fixture == r3.fixture);
}

TEST_CASE("reports are deterministic up to timing") {
  SuiteConfig cfg;
  cfg.size = 9;
  cfg.samples = 20;
  for (const char* id : {"A7", "A8", "A10"}) {
    INFO(id);
    CHECK(run_suite(id, "default", cfg).to_json(false).dump() == run_suite(id, "default", cfg).to_json(false).dump());
  }
}

TEST_CASE("walking isomorphism unit is an equivalence") {
  FiniteGroupoid g = walking_iso_groupoid();
  REQUIRE(g.check_laws().empty());
  GroupoidTheory gt = groupoid_to_theory(g);
  CHECK(gt.theory.equations.size() == 2);
  std::string why;
  CHECK(groupoid_unit_check(g, &why).equivalence());
  CHECK(why.empty());
}

TEST_CASE("codiscrete groupoid unit is an equivalence") {
  // one arrow between every ordered pair of three objects
  FiniteGroupoid g;
  g.objects = {"x", "y", "z"};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) g.arrows.push_back({i, j, g.objects[i] + g.objects[j]});
  g.comp.assign(9, std::vector<long>(9, -1));
  for (std::size_t h = 0; h < 9; ++h)
    for (std::size_t f = 0; f < 9; ++f)
      if (g.arrows[f].cod == g.arrows[h].dom) g.comp[h][f] = static_cast<long>(g.arrows[f].dom * 3 + g.arrows[h].cod);
  g.identity = {0, 4, 8};
  for (std::size_t f = 0; f < 9; ++f) g.inverse.push_back(g.arrows[f].cod * 3 + g.arrows[f].dom);
  REQUIRE(g.check_laws().empty());
  GroupoidTheory gt = groupoid_to_theory(g);
  CHECK(gt.theory.gset->of_dim(1).size() == 6);
  std::string why;
  CHECK_MESSAGE(groupoid_unit_check(g, &why).equivalence(), why);
}

TEST_CASE("trivial groupoid has no equations") {
  GroupoidTheory gt = groupoid_to_theory(terminal_groupoid());
  CHECK(gt.theory.equations.empty());
  CHECK(groupoid_unit_check(terminal_groupoid()).equivalence());
}

TEST_CASE("nontrivial vertex groups are reported unsupported") {
  // Z/3 on one object
  FiniteGroupoid g;
  g.objects = {"*"};
  for (int i = 0; i < 3; ++i) g.arrows.push_back({0, 0, "r" + std::to_string(i)});
  g.comp.assign(3, std::vector<long>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g.comp[i][j] = (i + j) % 3;
  g.identity = {0};
  g.inverse = {0, 2, 1};
  REQUIRE(g.check_laws().empty());
  CHECK(groupoid_to_theory(g).theory.equations.size() == 4);
  std::string why;
  CHECK_FALSE(groupoid_unit_check(g, &why).equivalence());
  CHECK(why.find("unsupported") != std::string::npos);
}

TEST_CASE("two algebras are distinguished") {
  SuiteConfig cfg;
  cfg.size = 7;
  auto r = two_algebras_experiment(cfg);
  CHECK_MESSAGE(r.pass(), r.to_json().dump());
  CHECK(r.counts["disagreeing_cells"] > 0);
  CHECK(r.counts["sampled_cells"] > 0);
}
