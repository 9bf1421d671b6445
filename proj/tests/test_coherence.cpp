#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "cohere/coherence.hpp"
#include "support/random_terms.hpp"

using namespace cohere;
using namespace cohere::testing;

namespace {

const Theory kCmon = Theory::cmon();
const Theory kCsr = Theory::csr();

Term C(const char* s, std::optional<std::uint32_t> n = std::nullopt) { return parse_term(kCmon.sig, s, n); }
Term S(const char* s, std::optional<std::uint32_t> n = std::nullopt) { return parse_term(kCsr.sig, s, n); }

// A random walk of `len` steps out of `a`.
CoherencePath random_walk(Rng& rng, CoherenceEngine& eng, const Term& a, std::size_t len) {
  CoherencePath p{a, a, {}};
  for (std::size_t k = 0; k < len; ++k) {
    auto ns = eng.rewrite_neighbors(p.target);
    if (ns.empty()) break;
    auto& [s, t] = ns[uniform(rng, 0, static_cast<std::uint32_t>(ns.size() - 1))];
    p.steps.push_back(s);
    p.target = t;
  }
  return p;
}

// Closes a path to `b` with a single step replacing the whole object, which
// exists whenever the endpoints' projection lies in S.
CoherencePath close_to(const CoherencePath& p, const Term& b) {
  auto q = p;
  if (q.target != b) {
    FinMap id = FinMap::identity(b.ambient_arity());
    q.steps.push_back(normalize_step({}, q.target, b, id));
    q.target = b;
  }
  return q;
}

}  // namespace

TEST_CASE("step normal form, application and inverse", "[coherence]") {
  auto s = normalize_step({0}, C("(plus x2 x1)"), C("(plus x1 x2)"), FinMap(3, {3, 1}));
  CHECK(s.before == C("(plus x1 x2)"));
  CHECK(s.after == C("(plus x2 x1)"));
  CHECK(s.relabel == FinMap(3, {1, 3}));
  auto a = C("(plus (plus x1 x3) x2)");
  auto b = apply_step(a, s);
  CHECK(b == C("(plus (plus x3 x1) x2)"));
  CHECK(apply_step(b, reverse_step(s)) == a);
  CHECK(reverse_step(reverse_step(s)) == s);
  CHECK_THROWS_AS(apply_step(b, s), Error);
}

TEST_CASE("rewrite_neighbors", "[coherence]") {
  CoherenceEngine tight(kCmon, LaplazaSpec::Operadic, Caps{1, 12, 0, 1000});
  CHECK(tight.rewrite_neighbors(C("x1")).empty());
  auto mag = Theory::free(Signature::parse_config("mag", "m 2\n"));
  CoherenceEngine free_eng(mag, LaplazaSpec::Operadic);
  CHECK(free_eng.rewrite_neighbors(parse_term(mag.sig, "(m x1 x2)")).empty());

  CoherenceEngine full(kCmon, LaplazaSpec::Full);
  auto ns = full.rewrite_neighbors(C("(plus x1 x2)"));
  bool swapped = false;
  for (const auto& [s, t] : ns) swapped = swapped || t == C("(plus x2 x1)");
  CHECK(swapped);
  // deterministic: same list twice
  auto again = full.rewrite_neighbors(C("(plus x1 x2)"));
  CHECK(ns == again);
  for (const auto& [s, t] : ns) {
    CHECK(apply_step(C("(plus x1 x2)"), s) == t);
    CHECK(t.size() <= 10);
  }
}

TEST_CASE("the neighbor relation is symmetric", "[coherence][property]") {
  Rng rng(51);
  struct Setup {
    Theory th;
    LaplazaSpec spec;
  };
  for (const auto& [th, spec] : {Setup{kCmon, LaplazaSpec::Operadic}, Setup{kCmon, LaplazaSpec::Full},
                                 Setup{kCsr, LaplazaSpec::LaplazaSemiring}}) {
    CoherenceEngine eng(th, spec, Caps{6, 12, 0, 100000});
    for (int trial = 0; trial < 15; ++trial) {
      auto a = random_term(rng, th.sig, uniform(rng, 1, 2), 5);
      for (const auto& [s, b] : eng.rewrite_neighbors(a)) {
        bool reversed = false, undone = false;
        for (const auto& [s2, c] : eng.rewrite_neighbors(b)) {
          if (c != a) continue;
          reversed = reversed || s2 == reverse_step(s);
          // a zero-killed variable may be matched to an occupied one; then a
          // parallel step with the same strand map has to come back
          if (th.kind == TheoryKind::CommutativeSemiring)
            undone = undone || monomial_model(th, eng.make_path(a, {s, s2})) == StrandMap::identity(expand(th, a));
        }
        INFO(to_string(th.sig, a) << " -> " << to_string(th.sig, b));
        REQUIRE((reversed || undone));
      }
    }
  }
}

TEST_CASE("find_path", "[coherence]") {
  CoherenceEngine op(kCmon, LaplazaSpec::Operadic);
  auto a = C("(plus (plus x1 x2) x3)"), b = C("(plus x1 (plus x2 x3))");
  auto same = op.find_path(a, a);
  CHECK(same.status == SearchStatus::Found);
  CHECK(same.path->steps.empty());

  auto r = op.find_path(a, b);
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(path_objects(*r.path).back() == b);

  auto none = op.find_path(a, C("(plus (plus x1 x1) x3)"));
  CHECK(none.status == SearchStatus::Absent);

  // a longer rearrangement, and one restricted to small local words
  auto far = op.find_path(C("(plus (plus (plus x1 x2) x3) x4)"), C("(plus x4 (plus x3 (plus x2 x1)))"));
  REQUIRE(far.status == SearchStatus::Found);
  CHECK(path_objects(*far.path).back() == C("(plus x4 (plus x3 (plus x2 x1)))"));
  CoherenceEngine small(kCmon, LaplazaSpec::Operadic, Caps{10, 12, 5, 200000});
  auto inner = small.find_path(C("(plus (plus (plus x1 x2) x3) x4)"), C("(plus (plus x3 (plus x2 x1)) x4)"));
  REQUIRE(inner.status == SearchStatus::Found);
  for (const auto& s : inner.path->steps) CHECK(s.before.size() <= 5);

  // a depth cap that is too small is reported as such, not as absence
  CoherenceEngine shallow(kCmon, LaplazaSpec::Operadic, Caps{10, 1, 3, 200000});
  auto cut = shallow.find_path(C("(plus (plus x1 x2) x3)"), C("(plus x3 (plus x2 x1))"));
  CHECK(cut.status == SearchStatus::CapExhausted);

  CHECK_THROWS_AS(op.find_path(a, C("(plus x1 x2)")), ArityError);
}

TEST_CASE("strand models", "[coherence]") {
  CoherenceEngine full(kCmon, LaplazaSpec::Full);
  auto ab = C("(plus x1 x2)");
  CHECK(perm_model(kCmon, CoherencePath{ab, ab, {}}) == FinMap::identity(2));
  auto tau = full.make_path(ab, {normalize_step({}, ab, C("(plus x2 x1)"), FinMap::identity(2))});
  CHECK(perm_model(kCmon, tau) == FinMap(2, {2, 1}));

  auto g = gould_certificate();
  CHECK(g.model_value == FinMap(2, {2, 1}));
  CHECK(g.model_is_transposition);

  // distributivity: the two result monomials trace back to the two summands
  CoherenceEngine lap(kCsr, LaplazaSpec::LaplazaSemiring);
  auto src = S("(times (plus x1 x2) x3)"), dst = S("(plus (times x1 x3) (times x2 x3))");
  auto d = lap.make_path(src, {normalize_step({}, src, dst, FinMap::identity(3))});
  auto v = monomial_model(kCsr, d);
  auto es = expand(kCsr, src), ed = expand(kCsr, dst);
  REQUIRE(es.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    auto label = [](const Term& t, const Expanded& e) {
      std::vector<std::uint32_t> l;
      for (auto f : e.factors) l.push_back(t.node(f).var());
      return l;
    };
    CHECK(label(src, es[i]) == label(dst, ed[v.mono[i]]));
  }
  CHECK(v.mono == std::vector<std::uint32_t>{0, 1});
  CHECK(monomial_model(kCsr, CoherencePath{src, src, {}}) == StrandMap::identity(es));
  CHECK_THROWS_AS(perm_model(kCsr, d), ArityError);
  CHECK_THROWS_AS(monomial_model(kCmon, tau), ArityError);
}

TEST_CASE("x1*x1 admits parallel paths with different monomial bijections", "[coherence]") {
  CoherenceEngine lap(kCsr, LaplazaSpec::LaplazaSemiring);
  auto sq = S("(times x1 x1)");
  CHECK_FALSE(lap.in_s(sq));
  auto swap = lap.make_path(sq, {normalize_step({}, S("(times x1 x2)"), S("(times x2 x1)"), FinMap(1, {1, 1}))});
  CHECK(swap.target == sq);
  auto empty = CoherencePath{sq, sq, {}};
  CHECK(monomial_model(kCsr, swap) != monomial_model(kCsr, empty));
  auto d = lap.decide_equal(swap, empty);
  CHECK(d.verdict == Verdict::ModelDistinct);
}

TEST_CASE("decide_equal", "[coherence]") {
  CoherenceEngine op(kCmon, LaplazaSpec::Operadic);
  auto a = C("(plus (plus x1 x2) x3)"), b = C("(plus x1 (plus x2 x3))");
  auto p = *op.find_path(a, b).path;
  CHECK(op.decide_equal(p, p).verdict == Verdict::ForcedEqual);

  auto g = gould_certificate();
  CHECK(g.full.verdict == Verdict::ForcedEqual);
  CHECK(g.operadic.verdict == Verdict::ModelDistinct);
  CHECK_FALSE(g.operadic_in_scope);
  CHECK(g.discrepancy);

  // x1 + x1 under Full: nothing registered, yet forced
  CoherenceEngine full(kCmon, LaplazaSpec::Full);
  auto d = full.decide_equal(g.swap, g.identity);
  CHECK(d.verdict == Verdict::ForcedEqual);
  CHECK_FALSE(d.p_value.has_value());

  // a swap inside a non-linear context changes the permutation
  auto src = C("(plus (plus x1 x1) x2)");
  auto assoc = normalize_step({}, C("(plus (plus x1 x2) x3)"), C("(plus x1 (plus x2 x3))"), FinMap(2, {1, 1, 2}));
  auto inner = normalize_step({0}, C("(plus x1 x2)"), C("(plus x2 x1)"), FinMap(2, {1, 1}));
  auto p1 = op.make_path(src, {assoc});
  auto p2 = op.make_path(src, {inner, assoc});
  CHECK(op.decide_equal(p1, p2).verdict == Verdict::ModelDistinct);

  CHECK_THROWS_AS(op.decide_equal(p1, CoherencePath{src, src, {}}), Error);
}

TEST_CASE("forced equalities through a common generalization", "[coherence][property]") {
  // parallel paths on a linear object stay forced equal after identifying
  // variables, although their common source is no longer in S
  Rng rng(57);
  CoherenceEngine op(kCmon, LaplazaSpec::Operadic, Caps{9, 12, 5, 50000});
  auto lin = C("(plus (plus x1 x2) (plus x3 x4))");
  auto goal = C("(plus x4 (plus x2 (plus x1 x3)))");
  int lifted = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto p = close_to(random_walk(rng, op, lin, uniform(rng, 0, 4)), goal);
    auto q = close_to(random_walk(rng, op, lin, uniform(rng, 0, 4)), goal);
    auto g = random_map(rng, 4, 2);
    auto pg = map_path(p, g), qg = map_path(q, g);
    REQUIRE(op.make_path(pg.source, pg.steps).target == pg.target);
    auto d = op.decide_equal(pg, qg);
    REQUIRE(d.verdict == Verdict::ForcedEqual);
    REQUIRE(perm_model(kCmon, pg) == perm_model(kCmon, qg));
    lifted += !op.in_s(pg.source);
  }
  CHECK(lifted > 20);
}

TEST_CASE("path invariants", "[coherence][property]") {
  Rng rng(61);
  struct Setup {
    Theory th;
    LaplazaSpec spec;
  };
  for (const auto& [th, spec] : {Setup{kCmon, LaplazaSpec::Operadic}, Setup{kCsr, LaplazaSpec::LaplazaSemiring},
                                 Setup{kCmon, LaplazaSpec::Full}}) {
    CoherenceEngine eng(th, spec, Caps{9, 12, 5, 50000});
    for (int trial = 0; trial < 40; ++trial) {
      auto a = random_term(rng, th.sig, uniform(rng, 1, 3), 7);
      auto p = random_walk(rng, eng, a, uniform(rng, 0, 4));
      auto q = random_walk(rng, eng, p.target, uniform(rng, 0, 4));
      // projection is constant along a path
      for (const auto& o : path_objects(p)) REQUIRE(project(th, o) == project(th, a));
      // p followed by its reverse is forced equal to the identity
      auto loop = concat_paths(p, reverse_path(p));
      REQUIRE(eng.decide_equal(loop, CoherencePath{a, a, {}}).verdict == Verdict::ForcedEqual);
      // the models are functors
      auto pq = concat_paths(p, q);
      REQUIRE(path_value(th, pq) == then(path_value(th, p), path_value(th, q)));
      REQUIRE(path_value(th, reverse_path(p)) == invert(path_value(th, p)));
      // steps are preserved by relabeling
      auto g = random_map(rng, a.ambient_arity(), uniform(rng, 1, 3));
      auto pg = map_path(p, g);
      REQUIRE(path_objects(pg).back() == act(p.target, g));
      REQUIRE(path_value(th, pg) == path_value(th, p));
    }
  }
}

TEST_CASE("decisions are never both forced and model-distinct", "[coherence][property]") {
  Rng rng(67);
  std::size_t counts[3] = {0, 0, 0};
  struct Setup {
    Theory th;
    LaplazaSpec spec;
    const char* source;
  };
  for (const auto& [th, spec, text] :
       {Setup{kCmon, LaplazaSpec::Operadic, "(plus (plus x1 x1) (plus x2 x1))"},
        Setup{kCmon, LaplazaSpec::Operadic, "(plus x1 (plus x2 x3))"},
        Setup{kCsr, LaplazaSpec::LaplazaSemiring, "(times (plus x1 x2) x1)"},
        Setup{kCsr, LaplazaSpec::LaplazaSemiring, "(times x1 (plus x2 x3))"}}) {
    CoherenceEngine eng(th, spec, Caps{9, 12, 5, 50000});
    auto a = parse_term(th.sig, text);
    for (int trial = 0; trial < 60; ++trial) {
      auto p = random_walk(rng, eng, a, uniform(rng, 0, 3));
      // a second path to the same target: walk away, then find a way back
      auto q = random_walk(rng, eng, a, uniform(rng, 0, 3));
      auto back = eng.find_path(q.target, p.target);
      if (back.status != SearchStatus::Found) continue;
      q = concat_paths(q, *back.path);
      auto d = eng.decide_equal(p, q);  // throws on a soundness violation
      ++counts[static_cast<int>(d.verdict)];
    }
  }
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
}

TEST_CASE("Laplaza words: all short parallel paths agree in the monomial model", "[coherence]") {
  // brute force: every pair of paths of length <= 2 between words of size <= 5
  CoherenceEngine lap(kCsr, LaplazaSpec::LaplazaSemiring, Caps{5, 12, 0, 100000});
  auto words = enumerate_terms(kCsr.sig, 2, 5);
  std::size_t compared = 0;
  for (std::size_t sz = 1; sz <= 5; ++sz)
    for (const auto& a : words[sz]) {
      if (!lap.in_s(a)) continue;
      std::map<Term, std::vector<StrandMap>> values;
      values[a].push_back(StrandMap::identity(expand(kCsr, a)));
      for (const auto& [s1, b] : lap.rewrite_neighbors(a)) {
        auto v1 = step_value(kCsr, a, s1);
        values[b].push_back(v1);
        for (const auto& [s2, c] : lap.rewrite_neighbors(b)) values[c].push_back(then(v1, step_value(kCsr, b, s2)));
      }
      for (const auto& [t, vs] : values) {
        for (const auto& v : vs) REQUIRE(v == vs.front());
        REQUIRE(vs.front() == label_map(kCsr, a, t));
        compared += vs.size();
      }
    }
  CHECK(compared > 1000);
}
