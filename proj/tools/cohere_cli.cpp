// Command-line front end: term normal forms, coherence search and
// certificates, strictification, 2-terms and worldsheets.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "cli_json.hpp"
#include "cohere/cobordism.hpp"
#include "cohere/coherence.hpp"
#include "cohere/strictify.hpp"
#include "cohere/sym_fixtures.hpp"
#include "cohere/two_theory.hpp"

using namespace cohere;
using cohere::cli::Json;

namespace {

enum Exit { kTrue = 0, kFalse = 1, kUnknown = 2, kError = 3 };

struct Outcome {
  Json body;
  int code = kTrue;
  bool always_json = false;  // data meant to be read back
};

struct Global {
  std::uint64_t seed = 1;
  bool json = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Inline JSON when it looks like JSON, otherwise a file name.
Json load_json(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\r\n");
  auto text = first != std::string::npos && (arg[first] == '[' || arg[first] == '{') ? arg : read_file(arg);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

// Text rendering: one line per top-level field.
std::string render_text(const Json& j) {
  std::string out;
  for (const auto& [k, v] : j.items()) out += k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  return out;
}

// Theory and engine options shared by the term subcommands

struct TheoryOpts {
  std::string sig = "cmon";
  std::string sig_file;
  std::string laplaza = "full";
  Caps caps;

  void add(CLI::App* app, bool with_caps) {
    app->add_option("--sig", sig, "signature: cmon, csr, or a name for --sig-file")->capture_default_str();
    app->add_option("--sig-file", sig_file, "free signature, one 'symbol arity' per line");
    app->add_option("--laplaza", laplaza, "Laplaza set: full, operadic, laplaza-semiring")->capture_default_str();
    if (!with_caps) return;
    app->add_option("--size", caps.size, "term size cap")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--depth", caps.depth, "path depth cap")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--step-size", caps.step_size, "size cap of rewritten subterms (0: none)")->capture_default_str();
    app->add_option("--max-nodes", caps.max_nodes, "objects a search may visit")->capture_default_str();
  }

  Theory theory() const {
    if (!sig_file.empty()) return Theory::free(Signature::parse_config(sig, read_file(sig_file)));
    if (sig == "cmon") return Theory::cmon();
    if (sig == "csr") return Theory::csr();
    throw ParseError("unknown signature '" + sig + "' (use cmon, csr, or --sig-file)");
  }
};

Json signature_json(const Theory& th) {
  Json gens = Json::array();
  for (std::uint32_t g = 0; g < th.sig.size(); ++g) gens.push_back(Json::array({th.sig.at(g).symbol, th.sig.at(g).arity}));
  return Json{{"name", th.name()}, {"kind", th.kind == TheoryKind::Free ? "free" : th.name()}, {"generators", gens}};
}

Theory theory_from_json(const Json& j) {
  auto kind = cli::as<std::string>(cli::field(j, "kind"), "kind");
  if (kind == "cmon") return Theory::cmon();
  if (kind == "csr") return Theory::csr();
  std::string config;
  for (const auto& g : cli::field(j, "generators"))
    config += cli::as<std::string>(g.at(0), "generators") + " " + std::to_string(cli::as<std::uint32_t>(g.at(1), "generators")) + "\n";
  return Theory::free(Signature::parse_config(cli::as<std::string>(cli::field(j, "name"), "name"), config));
}

Json model_json(const Theory& th, const CoherencePath& p) {
  if (th.kind == TheoryKind::CommutativeMonoid) return Json{{"perm_model", perm_model(th, p).to_string()}};
  if (th.kind == TheoryKind::CommutativeSemiring) return Json{{"monomial_model", cli::to_json(monomial_model(th, p))}};
  return nullptr;
}

// Subcommands

Outcome run_normalize(const TheoryOpts& o, const std::string& text) {
  auto th = o.theory();
  auto t = parse_term(th.sig, text);
  check_signature(th.sig, t);
  return {Json{{"signature", th.name()}, {"term", to_string(th.sig, t)}, {"normal_form", to_string(th, project(th, t))}}};
}

Outcome run_laplaza(const TheoryOpts& o, const std::string& text) {
  auto th = o.theory();
  auto spec = parse_laplaza_spec(o.laplaza);
  auto t = parse_term(th.sig, text);
  check_signature(th.sig, t);
  bool member = laplaza_member(spec, th, t);
  return {Json{{"signature", th.name()},
               {"laplaza", std::string(to_string(spec))},
               {"term", to_string(th.sig, t)},
               {"projection", to_string(th, project(th, t))},
               {"member", member}},
          member ? kTrue : kFalse};
}

Outcome run_exists(const TheoryOpts& o, const std::string& a_text, const std::string& b_text) {
  auto th = o.theory();
  CoherenceEngine eng(th, parse_laplaza_spec(o.laplaza), o.caps);
  auto a = parse_term(th.sig, a_text), b = parse_term(th.sig, b_text);
  auto m = std::max(a.ambient_arity(), b.ambient_arity());
  a = parse_term(th.sig, a_text, m);
  b = parse_term(th.sig, b_text, m);
  auto r = eng.find_path(a, b);
  Json body{{"verdict", r.status == SearchStatus::Found ? "exists" : r.status == SearchStatus::Absent ? "absent" : "unknown"},
            {"certificate", r.path ? cli::to_json(th.sig, *r.path) : Json(nullptr)},
            {"model_witness", r.path ? model_json(th, *r.path) : Json(nullptr)},
            {"explored", r.explored},
            {"reason", r.reason}};
  return {body, r.status == SearchStatus::Found ? kTrue : r.status == SearchStatus::Absent ? kFalse : kUnknown};
}

int verdict_code(Verdict v) {
  return v == Verdict::ForcedEqual ? kTrue : v == Verdict::ModelDistinct ? kFalse : kUnknown;
}

Json equal_body(const Theory& th, LaplazaSpec spec, const CoherencePath& p, const CoherencePath& q, const Decision& d) {
  auto steps = [&](const CoherencePath& x) { return cli::to_json(th.sig, x).at("steps"); };
  Json witness = nullptr;
  if (th.kind != TheoryKind::Free) witness = Json{{"p", model_json(th, p)}, {"q", model_json(th, q)}};
  return Json{{"verdict", std::string(to_string(d.verdict))},
              {"reason", d.reason},
              {"certificate", Json{{"signature", signature_json(th)},
                                   {"laplaza", std::string(to_string(spec))},
                                   {"source", to_string(th.sig, p.source)},
                                   {"target", to_string(th.sig, p.target)},
                                   {"arity", p.source.ambient_arity()},
                                   {"p", steps(p)},
                                   {"q", steps(q)},
                                   {"verdict", std::string(to_string(d.verdict))}}},
              {"model_witness", witness}};
}

Outcome run_equal(const TheoryOpts& o, const std::string& a_text, const std::string& b_text, const std::string& p_script,
                  const std::string& q_script) {
  auto th = o.theory();
  auto spec = parse_laplaza_spec(o.laplaza);
  CoherenceEngine eng(th, spec, o.caps);
  auto a = parse_term(th.sig, a_text), b = parse_term(th.sig, b_text);
  auto m = std::max(a.ambient_arity(), b.ambient_arity());
  a = parse_term(th.sig, a_text, m);
  b = parse_term(th.sig, b_text, m);
  // a missing script is replaced by a searched path: forwards for p,
  // the reverse of a search from b for q
  auto obtain = [&](const std::string& script, bool forward) -> std::variant<CoherencePath, Outcome> {
    if (!script.empty()) {
      auto path = eng.make_path(a, cli::steps_from_json(th.sig, load_json(script)));
      if (path.target != b) throw Error("path script ends at " + to_string(th.sig, path.target) + ", not at the target");
      return path;
    }
    auto r = forward ? eng.find_path(a, b) : eng.find_path(b, a);
    if (!r.path) {
      Json body{{"verdict", r.status == SearchStatus::Absent ? "absent" : "unknown"},
                {"reason", r.reason},
                {"certificate", nullptr},
                {"model_witness", nullptr}};
      return Outcome{body, r.status == SearchStatus::Absent ? kFalse : kUnknown};
    }
    return forward ? *r.path : reverse_path(*r.path);
  };
  auto p = obtain(p_script, true);
  if (auto* out = std::get_if<Outcome>(&p)) return *out;
  auto q = obtain(q_script, false);
  if (auto* out = std::get_if<Outcome>(&q)) return *out;
  const auto& pp = std::get<CoherencePath>(p);
  const auto& qq = std::get<CoherencePath>(q);
  auto d = eng.decide_equal(pp, qq);
  return {equal_body(th, spec, pp, qq, d), verdict_code(d.verdict)};
}

Outcome run_replay(const TheoryOpts& o, const std::string& file) {
  auto j = load_json(file);
  if (j.contains("certificate")) j = j.at("certificate");
  auto th = theory_from_json(cli::field(j, "signature"));
  auto spec = parse_laplaza_spec(cli::as<std::string>(cli::field(j, "laplaza"), "laplaza"));
  CoherenceEngine eng(th, spec, o.caps);
  const auto m = cli::as<std::uint32_t>(cli::field(j, "arity"), "arity");
  auto source = parse_term(th.sig, cli::as<std::string>(cli::field(j, "source"), "source"), m);
  auto target = parse_term(th.sig, cli::as<std::string>(cli::field(j, "target"), "target"), m);
  auto p = eng.make_path(source, cli::steps_from_json(th.sig, cli::field(j, "p")));
  auto q = eng.make_path(source, cli::steps_from_json(th.sig, cli::field(j, "q")));
  if (p.target != target || q.target != target) throw Error("certificate paths do not end at the recorded target");
  auto d = eng.decide_equal(p, q);
  auto recorded = cli::as<std::string>(cli::field(j, "verdict"), "verdict");
  if (recorded != to_string(d.verdict))
    throw Error("certificate does not replay: recorded " + recorded + ", got " + std::string(to_string(d.verdict)));
  auto body = equal_body(th, spec, p, q, d);
  body["replayed"] = true;
  return {body, verdict_code(d.verdict)};
}

Outcome run_model_eval(const TheoryOpts& o, const std::string& source_text, const std::string& script) {
  auto th = o.theory();
  if (th.kind == TheoryKind::Free) throw Error("no registered model for a free signature");
  CoherenceEngine eng(th, parse_laplaza_spec(o.laplaza), o.caps);
  auto source = parse_term(th.sig, source_text);
  auto steps = cli::steps_from_json(th.sig, load_json(script));
  std::uint32_t m = source.ambient_arity();
  for (const auto& s : steps) m = std::max(m, s.relabel.cod_size());
  auto p = eng.make_path(parse_term(th.sig, source_text, m), std::move(steps));
  Json body = cli::to_json(th.sig, p);
  const auto model = model_json(th, p);
  for (const auto& [k, v] : model.items()) body[k] = v;
  return {body};
}

struct StrictifyOpts {
  std::string file;
  std::string fixture;
  std::vector<std::uint32_t> order;
  std::uint32_t cap = 3;
  bool dump_input = false;
  bool list = false;
};

Outcome run_strictify(const StrictifyOpts& o) {
  if (o.list) {
    Json names = Json::array();
    for (const auto& f : fixtures::all()) names.push_back(Json{{"name", f.name}, {"strictifiable", f.strictifiable}});
    return {Json{{"fixtures", names}}};
  }
  if (o.file.empty() == o.fixture.empty()) throw ParseError("give exactly one of a JSON file or --fixture");
  FinSymMonCat c;
  std::string input = o.file;
  if (!o.fixture.empty()) {
    bool found = false;
    for (const auto& f : fixtures::all())
      if (f.name == o.fixture) {
        c = f.category;
        found = true;
      }
    if (!found) throw ParseError("unknown fixture '" + o.fixture + "'");
    input = "fixture:" + o.fixture;
  } else {
    c = cli::sym_mon_from_json(load_json(o.file));
  }
  if (o.dump_input) return {cli::to_json(c), kTrue, true};
  Json body{{"input", input}};
  try {
    auto s = strictify(c, o.order.empty() ? std::nullopt : std::optional(o.order), o.cap);
    auto vs = verify_strict(s.algebra);
    auto ve = verify_equivalence(s.functor);
    body["coherent"] = true;
    body["verify_strict"] = Json{{"ok", vs.ok}, {"witness", vs.witness}};
    body["verify_equivalence"] = Json{{"ok", ve.ok}, {"witness", ve.witness}};
    body["result"] = cli::to_json(s);
    return {body, vs.ok && ve.ok ? kTrue : kFalse};
  } catch (const IncoherentError& e) {
    body["coherent"] = false;
    body["reason"] = e.what();
    return {body, kFalse};
  }
}

std::optional<std::uint32_t> opt_arity(int a) { return a < 0 ? std::nullopt : std::optional<std::uint32_t>(a); }

Outcome run_two_normalize(const std::string& text, int arity) {
  auto t = parse_two_term(text, opt_arity(arity));
  auto ty = typecheck(t);
  auto nf = normalize(t);
  return {Json{{"term", to_string(t)},
               {"typing", cli::to_json(ty)},
               {"normal_form", cli::to_json(nf)},
               {"replay", to_string(replay(nf, ty.sources))}}};
}

Outcome run_two_equal(const std::string& s_text, const std::string& t_text, int arity, std::size_t oracle_depth) {
  auto s0 = parse_two_term(s_text, opt_arity(arity));
  auto t0 = parse_two_term(t_text, opt_arity(arity));
  // both sides share one arity: the larger of the two
  const auto m = std::max(s0.arity, t0.arity);
  auto s = parse_two_term(s_text, m), t = parse_two_term(t_text, m);
  bool eq = two_equal(s, t);
  Json body{{"equal", eq}, {"left", cli::to_json(normalize(s))}, {"right", cli::to_json(normalize(t))},
            {"target_left", cli::to_json(target_of(s))}, {"target_right", cli::to_json(target_of(t))}};
  if (oracle_depth > 0) body["oracle"] = axiom_rewrite_oracle(s, t, oracle_depth);
  return {body, eq ? kTrue : kFalse};
}

Outcome run_glue(const std::string& input, const std::vector<std::string>& labels) {
  auto x = cli::cobordism_from_json(load_json(input));
  auto g = self_glue(x, labels);
  auto body = cli::to_json(g);
  body["total_genus"] = g.total_genus();
  return {body};
}

Outcome run_gould() {
  auto r = gould_certificate();
  return {Json{{"forced", r.full.verdict == Verdict::ForcedEqual},
               {"reason", r.full.reason},
               {"model", r.model_value.to_string()},
               {"model_is_transposition", r.model_is_transposition},
               {"operadic_verdict", std::string(to_string(r.operadic.verdict))},
               {"operadic_in_scope", r.operadic_in_scope},
               {"discrepancy", r.discrepancy}},
          r.discrepancy ? kTrue : kFalse};
}

Outcome run_selftest(bool quick, std::uint64_t seed) {
  Json checks = Json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok, Json detail) {
    all = all && ok;
    checks.push_back(Json{{"name", name}, {"ok", ok}, {"detail", std::move(detail)}});
  };

  auto g = gould_certificate();
  record("gould", g.discrepancy && g.model_is_transposition, Json{{"model", g.model_value.to_string()}});

  {
    bool ok = true;
    Json seen = Json::array();
    for (const auto& f : fixtures::all()) {
      bool good;
      try {
        auto s = strictify(f.category);
        good = f.strictifiable && verify_strict(s.algebra).ok && verify_equivalence(s.functor).ok;
      } catch (const IncoherentError&) {
        good = !f.strictifiable;
      }
      ok = ok && good;
      seen.push_back(f.name);
    }
    record("strictify-fixtures", ok, Json{{"fixtures", seen}});
  }

  {
    auto th = Theory::csr();
    auto sq = laplaza_member(LaplazaSpec::LaplazaSemiring, th, parse_term(th.sig, "(times x1 x1)"));
    auto sf = laplaza_member(LaplazaSpec::LaplazaSemiring, th, parse_term(th.sig, "(plus (times x1 x2) x3)"));
    record("laplaza-semiring", !sq && sf, Json{{"x1*x1", sq}, {"x1*x2+x3", sf}});
  }

  {
    auto th = Theory::cmon();
    CoherenceEngine eng(th, LaplazaSpec::Operadic, Caps{8, 8, 0, 200000});
    auto a = parse_term(th.sig, "(plus x1 (plus x2 x3))"), b = parse_term(th.sig, "(plus (plus x3 x1) x2)");
    auto c = parse_term(th.sig, "(plus x2 (plus x3 x1))");
    auto p = eng.find_path(a, b), p1 = eng.find_path(a, c), p2 = eng.find_path(c, b);
    bool ok = p.path && p1.path && p2.path;
    std::string verdict = "unknown";
    if (ok) {
      auto d = eng.decide_equal(*p.path, concat_paths(*p1.path, *p2.path));
      verdict = to_string(d.verdict);
      ok = d.verdict == Verdict::ForcedEqual;
    }
    record("operadic-coherence", ok, Json{{"verdict", verdict}});
  }

  {
    std::mt19937_64 rng(seed);
    const std::vector<std::string> seeds = {
        "(plus (slot 1 [x1 + x2 | x1]) (slot 2 [x1 | x1 + x2]))",
        "(check (plus (slot 1 [x1 + x2 | x1]) (slot 2 [x1 | x1 + x2])) [x1])",
        "(plus (check (slot 1 [x1 + x2 | x2 + x2]) [x2]) zero)",
        "(check (plus (plus (slot 2 [x2 | x1]) (slot 1 [x1 | x2])) (slot 3 [x1 | x1])) [x1 + x2])"};
    const std::size_t walks = quick ? 20 : 100;
    std::size_t agreed = 0;
    for (std::size_t k = 0; k < walks; ++k) {
      auto s = parse_two_term(seeds[k % seeds.size()], 2);
      auto cur = s;
      for (int step = 0; step < 4; ++step) {
        auto ns = axiom_neighbors(cur, s.size() + 2);
        if (ns.empty()) break;
        cur = ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)];
      }
      auto one = axiom_neighbors(s, s.size() + 2);
      auto v = one[std::uniform_int_distribution<std::size_t>(0, one.size() - 1)(rng)];
      agreed += two_equal(s, cur) && two_equal(s, v) && axiom_rewrite_oracle(s, v, 1);
    }
    record("two-normal-form", agreed == walks, Json{{"walks", walks}, {"agreed", agreed}});
  }

  {
    auto r = check_cmc_axioms(seed, quick ? 100 : 500);
    record("worldsheet-axioms", r.ok(), Json{{"samples", r.samples}, {"passed", r.passed}});
  }

  {
    auto r = check_operadic_coherence(quick ? 2 : 3, Caps{6, 8, 0, 200000}, seed, quick ? 10 : 30);
    record("worldsheet-coherence", r.ok() && r.pairs > 0,
           Json{{"pairs", r.pairs}, {"paths", r.paths}, {"agreeing", r.agreeing}});
  }

  return {Json{{"quick", quick}, {"seed", seed}, {"checks", checks}, {"ok", all}}, all ? kTrue : kFalse};
}

// Machine-readable output descriptions

Json obj(std::initializer_list<std::pair<const char*, const char*>> props) {
  Json p = Json::object(), req = Json::array();
  for (const auto& [k, t] : props) {
    p[k] = Json::parse(t);
    req.push_back(k);
  }
  return Json{{"$schema", "http://json-schema.org/draft-07/schema#"}, {"type", "object"}, {"properties", p},
              {"required", req}};
}

const std::map<std::string, Json>& schemas() {
  static const std::map<std::string, Json> s = {
      {"normalize", obj({{"signature", R"({"type":"string"})"}, {"term", R"({"type":"string"})"},
                         {"normal_form", R"({"type":"string"})"}})},
      {"laplaza-check", obj({{"signature", R"({"type":"string"})"}, {"laplaza", R"({"type":"string"})"},
                             {"term", R"({"type":"string"})"}, {"projection", R"({"type":"string"})"},
                             {"member", R"({"type":"boolean"})"}})},
      {"coherence-exists", obj({{"verdict", R"({"enum":["exists","absent","unknown"]})"},
                                {"certificate", R"({"type":["object","null"]})"},
                                {"model_witness", R"({"type":["object","null"]})"},
                                {"explored", R"({"type":"integer"})"}, {"reason", R"({"type":"string"})"}})},
      {"coherence-equal", obj({{"verdict", R"({"enum":["forced-equal","model-distinct","unknown","absent"]})"},
                               {"reason", R"({"type":"string"})"},
                               {"certificate", R"({"type":["object","null"]})"},
                               {"model_witness", R"({"type":["object","null"]})"}})},
      {"model-eval", obj({{"source", R"({"type":"string"})"}, {"target", R"({"type":"string"})"},
                          {"steps", R"({"type":"array"})"}})},
      {"strictify", obj({{"input", R"({"type":"string"})"}, {"coherent", R"({"type":"boolean"})"}})},
      {"two-normalize", obj({{"term", R"({"type":"string"})"}, {"typing", R"({"type":"object"})"},
                             {"normal_form", R"({"type":"object"})"}, {"replay", R"({"type":"string"})"}})},
      {"two-equal", obj({{"equal", R"({"type":"boolean"})"}, {"left", R"({"type":"object"})"},
                         {"right", R"({"type":"object"})"}, {"target_left", R"({"type":"object"})"},
                         {"target_right", R"({"type":"object"})"}})},
      {"glue", obj({{"inbound", R"({"type":"array","items":{"type":"string"}})"},
                    {"outbound", R"({"type":"array","items":{"type":"string"}})"},
                    {"components", R"({"type":"array"})"}, {"total_genus", R"({"type":"integer"})"}})},
      {"gould", obj({{"forced", R"({"type":"boolean"})"}, {"reason", R"({"type":"string"})"},
                     {"model", R"({"type":"string"})"}, {"model_is_transposition", R"({"type":"boolean"})"},
                     {"operadic_verdict", R"({"type":"string"})"}, {"operadic_in_scope", R"({"type":"boolean"})"},
                     {"discrepancy", R"({"type":"boolean"})"}})},
      {"selftest", obj({{"quick", R"({"type":"boolean"})"}, {"seed", R"({"type":"integer"})"},
                        {"checks", R"({"type":"array"})"}, {"ok", R"({"type":"boolean"})"}})},
  };
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohere: normal forms, coherence search, strictification and worldsheets"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "seed for sampled checks")->capture_default_str();
  app.add_flag("--json", g.json, "print JSON instead of text");

  std::map<std::string, bool> want_schema;
  auto sub = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->add_flag("--schema", want_schema[name], "print the JSON schema of the output and exit");
    return s;
  };

  TheoryOpts th;
  std::string t1, t2, p_script, q_script, replay_file;

  auto* normalize_cmd = sub("normalize", "print the normal form of a term");
  th.add(normalize_cmd, false);
  normalize_cmd->add_option("term", t1, "term, e.g. \"(plus x1 (times x2 x3))\"");

  auto* laplaza_cmd = sub("laplaza-check", "test membership of a term in a Laplaza set (exit 0 member, 1 not)");
  th.add(laplaza_cmd, false);
  laplaza_cmd->add_option("term", t1, "term");

  auto* exists_cmd = sub("coherence-exists", "search for a coherence path between two objects");
  th.add(exists_cmd, true);
  exists_cmd->add_option("source", t1, "source object");
  exists_cmd->add_option("target", t2, "target object");

  auto* equal_cmd = sub("coherence-equal", "decide whether two parallel coherence paths are equal");
  th.add(equal_cmd, true);
  equal_cmd->add_option("source", t1, "source object");
  equal_cmd->add_option("target", t2, "target object");
  equal_cmd->add_option("--p", p_script, "path script (JSON list of steps, inline or file); default: searched");
  equal_cmd->add_option("--q", q_script, "second path script; default: reverse of a search from the target");
  equal_cmd->add_option("--replay", replay_file, "re-verify a certificate (file or inline JSON) without search");

  auto* model_cmd = sub("model-eval", "evaluate a path script in the registered model (cmon: permutation, csr: monomials)");
  th.add(model_cmd, false);
  model_cmd->add_option("source", t1, "source object")->required();
  model_cmd->add_option("--path", p_script, "path script (inline JSON or file)")->required();

  StrictifyOpts so;
  auto* strict_cmd = sub("strictify", "strictify a finite symmetric monoidal category given as JSON tables");
  strict_cmd->add_option("file", so.file, "JSON tables (file or inline)");
  strict_cmd->add_option("--fixture", so.fixture, "use a built-in fixture instead of a file");
  strict_cmd->add_option("--order", so.order, "class representatives in order, starting with the unit")->delimiter(',');
  strict_cmd->add_option("--cap", so.cap, "maximal number of summands")->capture_default_str()->check(CLI::PositiveNumber);
  strict_cmd->add_flag("--dump-input", so.dump_input, "print the input tables as JSON and exit");
  strict_cmd->add_flag("--list-fixtures", so.list, "list the built-in fixtures");

  int arity = -1;
  std::size_t oracle_depth = 0;
  auto* two_norm_cmd = sub("two-normalize", "type and normalize a 2-term");
  two_norm_cmd->add_option("term", t1, "2-term, e.g. \"(check (plus (slot 1 [x1 | x1 + x2]) zero) [x1])\"");
  two_norm_cmd->add_option("--arity", arity, "number of index variables (default: largest used)");
  auto* two_eq_cmd = sub("two-equal", "decide equality of two 2-terms (exit 0 equal, 1 not)");
  two_eq_cmd->add_option("left", t1, "2-term");
  two_eq_cmd->add_option("right", t2, "2-term");
  two_eq_cmd->add_option("--arity", arity, "number of index variables (default: largest used)");
  two_eq_cmd->add_option("--oracle-depth", oracle_depth, "also run the rewrite oracle to this depth (0: skip)");

  std::string cob;
  std::vector<std::string> labels;
  auto* glue_cmd = sub("glue", "glue labels present on both sides of a cobordism");
  glue_cmd->add_option("cobordism", cob, "JSON {inbound, outbound, components:[{in, out, genus}]} (file or inline)");
  glue_cmd->add_option("--labels", labels, "labels to glue")->delimiter(',');

  sub("gould", "the symmetry on a + a against the identity (exit 0 when the discrepancy is reproduced)");

  bool quick = false;
  auto* self_cmd = sub("selftest", "run the built-in consistency sweeps");
  self_cmd->add_flag("--quick", quick, "smaller samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  auto* chosen = app.get_subcommands().front();
  const auto name = chosen->get_name();
  if (want_schema[name]) {
    std::cout << schemas().at(name).dump(2) << "\n";
    return kTrue;
  }

  auto need = [&](const std::string& v, const char* what) {
    if (v.empty()) throw ParseError(std::string("missing ") + what);
  };

  Outcome out;
  try {
    if (name == "normalize") {
      need(t1, "term");
      out = run_normalize(th, t1);
    } else if (name == "laplaza-check") {
      need(t1, "term");
      out = run_laplaza(th, t1);
    } else if (name == "coherence-exists") {
      need(t1, "source");
      need(t2, "target");
      out = run_exists(th, t1, t2);
    } else if (name == "coherence-equal") {
      if (!replay_file.empty()) {
        out = run_replay(th, replay_file);
      } else {
        need(t1, "source");
        need(t2, "target");
        out = run_equal(th, t1, t2, p_script, q_script);
      }
    } else if (name == "model-eval") {
      out = run_model_eval(th, t1, p_script);
    } else if (name == "strictify") {
      out = run_strictify(so);
    } else if (name == "two-normalize") {
      need(t1, "term");
      out = run_two_normalize(t1, arity);
    } else if (name == "two-equal") {
      need(t1, "left term");
      need(t2, "right term");
      out = run_two_equal(t1, t2, arity, oracle_depth);
    } else if (name == "glue") {
      need(cob, "cobordism");
      out = run_glue(cob, labels);
    } else if (name == "gould") {
      out = run_gould();
    } else if (name == "selftest") {
      out = run_selftest(quick, g.seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }

  if (g.json || out.always_json)
    std::cout << out.body.dump(2) << "\n";
  else
    std::cout << render_text(out.body);
  return out.code;
}
