// mlcx: command-line front end.
// Exit codes: 0 pass, 1 logic failure, 2 input/config error, 3 budget exhausted.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlcx/harness.hpp"

using namespace mlcx;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kLogic = 1, kInput = 2, kBudget = 3 };

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (auto& x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_theory_file(const std::string& path) { return slurp(path).find("theory v1") != std::string::npos; }

void emit(bool as_json, const json& j, const std::string& text) {
  if (as_json) std::cout << j.dump(2) << "\n";
  else std::cout << text;
}

int cmd_validate(const std::string& path) {
  if (is_theory_file(path)) {
    Theory T = load_theory(path);
    std::cout << "ok: theory flavor=" << (T.level == kOmega ? "omega" : std::to_string(T.level)) << ", "
              << (T.gset ? T.gset->cells().size() : 0) << " cells, " << T.equations.size() << " equations\n";
  } else {
    GlobularSet g = load_globular(path);
    std::cout << "ok: " << g.cells().size() << " cells, dimension " << g.max_dim() << ", "
              << (is_forest(g) ? "forest" : "not a forest") << "\n";
  }
  return kPass;
}

int cmd_check(const std::string& theory, const std::string& judgement, bool as_json) {
  Theory T = load_theory(theory);
  std::string text = judgement;
  if (std::filesystem::exists(judgement)) text = slurp(judgement);
  else if (text.find("check ") == std::string::npos && text.find("eq ") != 0) text = "check " + text;
  Judgement j = parse_judgement_text(text);
  bool ok;
  std::string msg;
  if (j.kind == JudgementKind::TermEquality) {
    ok = check_term(T, j.ctx, j.lhs, j.type).accepted && check_term(T, j.ctx, j.rhs, j.type).accepted &&
         def_equal(T, j.ctx, j.lhs, j.rhs, j.type);
    msg = ok ? "definitionally equal" : "not derivably equal";
  } else {
    auto r = check_term(T, j.ctx, j.lhs, j.type);
    ok = r.accepted;
    msg = ok ? "accepted" : "rejected: " + r.message;
  }
  emit(as_json, {{"accepted", ok}, {"message", msg}}, msg + "\n");
  return ok ? kPass : kLogic;
}

int cmd_normalize(const std::string& theory, const std::string& term, bool as_json) {
  Theory T = load_theory(theory);
  Expr e = parse_expression(term);
  auto ty = infer_type(T, {}, e);
  if (!ty.accepted) {
    std::cerr << "rejected: " << ty.message << "\n";
    return kLogic;
  }
  Expr n = normalize(T, {}, e);
  emit(as_json, {{"term", print(e)}, {"type", print(ty.type)}, {"normal_form", print(n)}}, print(n) + " : " + print(ty.type) + "\n");
  return kPass;
}

int cmd_canon(const std::string& theory, const std::string& judgement, bool as_json) {
  Theory T = load_theory(theory);
  auto [e, A] = parse_typed(judgement);
  auto in = check_term(T, {}, e, A);
  if (!in.accepted) {
    std::cerr << "input rejected: " << in.message << "\n";
    return kInput;
  }
  Canonicalizer cz(T);
  CanonicalForm c;
  try {
    c = cz.canonicalize(e, A);
  } catch (const CanonFailure& err) {
    emit(as_json, {{"term", print(e)}, {"type", print(A)}, {"error", err.what()}}, std::string("no canonical form: ") + err.what() + "\n");
    return kLogic;
  }
  Expr wt = id_type(A, e, c.canonical);
  bool wok = check_term(T, {}, c.witness, wt).accepted;
  bool cok = check_term(T, {}, c.canonical, A).accepted;
  json j{{"term", print(e)},        {"type", print(A)},          {"canonical", print(c.canonical)},
         {"kind", canon_kind_name(c.kind)}, {"strategy", c.strategy}, {"witness", print(c.witness)},
         {"witness_type", print(wt)}, {"canonical_accepted", cok}, {"witness_accepted", wok}};
  std::string text = "canonical: " + print(c.canonical) + "\nkind: " + canon_kind_name(c.kind) + "\nwitness: " +
                     print(c.witness) + "\nwitness type: " + print(wt) + "\nkernel: canonical " +
                     (cok ? "accepted" : "rejected") + ", witness " + (wok ? "accepted" : "rejected") + "\n";
  emit(as_json, j, text);
  return wok && cok ? kPass : kLogic;
}

int cmd_pi0(const std::string& path, bool as_json) {
  Partition p = pi0(load_globular(path));
  json j = p;
  std::string text = std::to_string(p.size()) + " components\n";
  for (auto& c : p) text += "  {" + join(c) + "}\n";
  emit(as_json, {{"count", p.size()}, {"components", j}}, text);
  return kPass;
}

int cmd_freegpd(const std::string& path, const std::string& a, const std::string& b, int bound, bool as_json) {
  GlobularSet g = load_globular(path);
  if (!g.has(a) || !g.has(b) || g.dim(a) != 0 || g.dim(b) != 0) throw ConfigError("endpoints must be vertices of the graph");
  auto hom = free_groupoid_hom(g, a, b, bound);
  json arr = json::array();
  std::string text;
  for (auto& h : hom) {
    arr.push_back(word_string(h.word));
    text += word_string(h.word) + "\n";
  }
  emit(as_json, {{"from", a}, {"to", b}, {"bound", bound}, {"arrows", arr}}, text);
  return kPass;
}

int cmd_interp(const std::string& theory, const std::string& term, bool as_json) {
  Theory T = load_theory(theory);
  Expr e = parse_expression(term);
  auto ty = infer_type(T, {}, e);
  if (!ty.accepted) {
    std::cerr << "rejected: " << ty.message << "\n";
    return kInput;
  }
  Model m(T);
  SVal v = m.eval(e);
  SVal n = m.eval(normalize(T, {}, e));
  bool same = m.same(v, n);
  json j{{"term", print(e)}, {"type", print(ty.type)}, {"value", m.show(v)}, {"normal_form_value", m.show(n)}, {"agree", same}};
  emit(as_json, j, m.show(v) + (same ? "" : "   (normal form: " + m.show(n) + ")") + "\n");
  return same ? kPass : kLogic;
}

int cmd_derive(const std::string& theory, const std::string& what, const std::vector<std::string>& args, bool as_json) {
  Theory T = load_theory(theory);
  std::vector<Expr> xs;
  for (auto& a : args) xs.push_back(parse_expression(a));
  auto need = [&](std::size_t n, const char* usage) {
    if (xs.size() != n) throw ConfigError(std::string("usage: derive ") + what + " " + usage);
  };
  Expr G = base(T.base_name().empty() ? "G" : T.base_name());
  std::vector<WitnessedTerm> out;
  if (what == "doppelganger") {
    need(4, "TAU A B F  (TAU : G)");
    out.push_back(doppelganger(xs[0], G, G, xs[1], xs[2], xs[3]));
  } else if (what == "sharp") {
    need(3, "A B F");
    auto [l, r] = sharp(G, xs[0], xs[1], xs[2]);
    out = {l, r};
  } else if (what == "flat") {
    need(3, "A B F");
    out.push_back(flat(G, xs[0], xs[1], xs[2]));
  } else if (what == "inverse" || what == "compose") {
    Expr t = what == "inverse" ? (need(3, "A B F"), inverse(G, xs[0], xs[1], xs[2]))
                               : (need(5, "A B C F G"), compose(G, xs[0], xs[1], xs[2], xs[3], xs[4]));
    auto r = infer_type(T, {}, t);
    json j{{"subject", print(t)}, {"type", r.accepted ? print(r.type) : ""}, {"accepted", r.accepted}};
    emit(as_json, j, print(t) + " : " + (r.accepted ? print(r.type) : "rejected: " + r.message) + "\n");
    return r.accepted ? kPass : kLogic;
  } else {
    throw ConfigError("unknown construction '" + what + "' (doppelganger, sharp, flat, inverse, compose)");
  }
  json arr = json::array();
  std::string text;
  bool all = true;
  for (auto& w : out) {
    bool ok = check_term(T, {}, w.witness, w.witness_type).accepted;
    all = all && ok;
    arr.push_back({{"subject", print(w.subject)}, {"type", print(w.type)}, {"witness", print(w.witness)},
                   {"witness_type", print(w.witness_type)}, {"accepted", ok}});
    text += "subject: " + print(w.subject) + "\ntype: " + print(w.type) + "\nwitness: " + print(w.witness) +
            "\nwitness type: " + print(w.witness_type) + "\nkernel: " + (ok ? "accepted" : "rejected") + "\n";
  }
  emit(as_json, arr, text);
  return all ? kPass : kLogic;
}

int cmd_cells(const std::string& theory, int budget, int dim) {
  Theory T = load_theory(theory);
  auto fr = glob_of_type(T, base(T.base_name()), budget, dim);
  for (auto& layer : fr.cells)
    for (auto& c : layer) std::cout << c.dim << " " << c.name() << "\n";
  return kPass;
}

int cmd_verify(const std::string& suite, const std::string& fixture_name, const SuiteConfig& cfg, const std::string& report,
               bool as_json) {
  SuiteReport r = run_suite(suite, fixture_name, cfg);
  if (!report.empty()) {
    std::ofstream out(report);
    if (!out) throw ConfigError("cannot write " + report);
    out << r.to_json().dump(2) << "\n";
  }
  if (as_json) std::cout << r.to_json().dump(2) << "\n";
  else {
    std::cout << r.summary() << "\n";
    for (auto& f : r.failures) {
      std::cout << "  " << f.detail << (f.term.empty() ? "" : "  term: " + f.term) << "\n";
      if (!f.reproduce.empty()) std::cout << "    reproduce: " << f.reproduce << "\n";
    }
    for (auto& n : r.notes) std::cout << "  note: " << n << "\n";
  }
  return r.pass() ? kPass : kLogic;
}

int cmd_fixtures(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (auto& n : fixture_names()) {
    std::ofstream(dir + "/" + n + ".gset") << fixture_gset_text(n);
    std::ofstream(dir + "/" + n + ".theory") << fixture_theory_text(n);
  }
  std::cout << "wrote " << fixture_names().size() << " fixtures to " << dir << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlcx: type theory kernel, models and verification harness"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string file, theory, a, b, what, suite = "A1", fixture_name = "default", report;
  std::vector<std::string> rest;
  int bound = 4, budget = 5, dim = 1;
  SuiteConfig cfg;

  auto* validate = app.add_subcommand("validate", "validate a globular set or theory file");
  validate->add_option("file", file)->required();
  auto* check = app.add_subcommand("check", "check a judgement ('t : A', 'eq l = r : A', or a judgement file)");
  check->add_option("theory", theory)->required();
  check->add_option("judgement", rest)->required();
  auto* norm = app.add_subcommand("normalize", "normal form of a closed term");
  norm->add_option("theory", theory)->required();
  norm->add_option("term", rest)->required();
  auto* canon = app.add_subcommand("canon", "canonical form with witness");
  canon->add_option("theory", theory)->required();
  canon->add_option("judgement", rest, "TERM : TYPE")->required();
  auto* p0 = app.add_subcommand("pi0", "connected components");
  p0->add_option("gset", file)->required();
  auto* fg = app.add_subcommand("freegpd", "reduced words between two vertices");
  fg->add_option("gset", file)->required();
  fg->add_option("a", a)->required();
  fg->add_option("b", b)->required();
  fg->add_option("--bound", bound, "maximum word length")->check(CLI::NonNegativeNumber);
  auto* interp = app.add_subcommand("interp", "interpret a closed term in the model");
  interp->add_option("theory", theory)->required();
  interp->add_option("term", rest)->required();
  auto* derive = app.add_subcommand("derive", "emit a derived construction with its witness");
  derive->add_option("theory", theory)->required();
  derive->add_option("construction", what)->required();
  derive->add_option("args", rest);
  auto* cells = app.add_subcommand("cells", "dump generated cells, one tuple per line");
  cells->add_option("theory", theory)->required();
  cells->add_option("--budget", budget)->check(CLI::NonNegativeNumber);
  cells->add_option("--dim", dim)->check(CLI::Range(0, 3));
  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("--suite", suite, "A1..A12");
  verify->add_option("--fixture", fixture_name);
  verify->add_option("--size", cfg.size, "enumeration size bound (0: suite default)");
  verify->add_option("--jobs", cfg.jobs);
  verify->add_option("--samples", cfg.samples);
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--report", report, "write the JSON report here");
  auto* fx = app.add_subcommand("fixtures", "write the built-in fixture files");
  fx->add_option("dir", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kInput;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*check) return cmd_check(theory, join(rest), as_json);
    if (*norm) return cmd_normalize(theory, join(rest), as_json);
    if (*canon) return cmd_canon(theory, join(rest), as_json);
    if (*p0) return cmd_pi0(file, as_json);
    if (*fg) return cmd_freegpd(file, a, b, bound, as_json);
    if (*interp) return cmd_interp(theory, join(rest), as_json);
    if (*derive) return cmd_derive(theory, what, rest, as_json);
    if (*cells) return cmd_cells(theory, budget, dim);
    if (*verify) return cmd_verify(suite, fixture_name, cfg, report, as_json);
    if (*fx) return cmd_fixtures(file);
  } catch (const EnumBudget& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const CanonBudget& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const WordBoundExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const TypeError& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kLogic;
  } catch (const SemanticUnsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kLogic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
