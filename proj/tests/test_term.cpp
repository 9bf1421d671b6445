#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "cohere/enumerate.hpp"
#include "cohere/term.hpp"
#include "support/random_terms.hpp"

using namespace cohere;
using namespace cohere::testing;

namespace {

const Signature kCmon = Signature::cmon();
const Signature kCsr = Signature::csr();

Term T(const Signature& sig, const char* text, std::optional<std::uint32_t> n = std::nullopt) {
  return parse_term(sig, text, n);
}

std::vector<Term> random_args(Rng& rng, const Signature& sig, std::size_t k, std::size_t max_nodes) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(random_term(rng, sig, uniform(rng, 1, 3), max_nodes));
  return out;
}

}  // namespace

TEST_CASE("parsing and printing", "[term]") {
  auto t = T(kCmon, "(plus (plus x1 x2) zero)");
  CHECK(t.ambient_arity() == 2);
  CHECK(t.size() == 5);
  CHECK(to_string(kCmon, t) == "(plus (plus x1 x2) (zero))");
  CHECK(T(kCmon, "(plus x1 (zero))") == T(kCmon, "(plus x1 zero)"));
  CHECK(T(kCmon, "x1", 4).ambient_arity() == 4);
  CHECK_THROWS_AS(T(kCmon, "(plus x1)"), ParseError);
  CHECK_THROWS_AS(T(kCmon, "(times x1 x2)"), ParseError);
  CHECK_THROWS_AS(T(kCmon, "x0"), ParseError);
  CHECK_THROWS_AS(T(kCmon, "x3", 2), ArityError);
  CHECK_THROWS_AS(T(kCmon, "(plus x1 x2) x3"), ParseError);
}

TEST_CASE("signature config files", "[term]") {
  auto sig = Signature::parse_config("mag", "# a magma with a point\nm 2\ne 0\n");
  CHECK(sig.size() == 2);
  CHECK(sig.at(sig.id("m")).arity == 2);
  CHECK_THROWS_AS(Signature::parse_config("bad", "m 2\nm 1\n"), ParseError);
  CHECK_THROWS_AS(Signature::parse_config("bad", "x 2\n"), ParseError);
}

TEST_CASE("gamma", "[term]") {
  auto w = T(kCmon, "(plus x1 x2)");
  CHECK(gamma(Term::var(1, 1), {w}) == w);
  CHECK(gamma(w, {Term::var(1, 1), Term::var(1, 1)}) == w);
  CHECK(gamma(w, {T(kCmon, "(plus x1 x2)"), T(kCmon, "x1")}) == T(kCmon, "(plus (plus x1 x2) x3)"));
  // argument of arity 0 contributes no variables
  CHECK(gamma(w, {T(kCmon, "zero", 0), T(kCmon, "x2", 2)}) == T(kCmon, "(plus zero x2)"));
  CHECK_THROWS_AS(gamma(w, {T(kCmon, "x1")}), ArityError);
}

TEST_CASE("act", "[term]") {
  auto w = T(kCmon, "(plus x1 x2)");
  CHECK(act(w, FinMap::identity(2)) == w);
  CHECK(act(w, FinMap(1, {1, 1})) == T(kCmon, "(plus x1 x1)"));
  CHECK(act(w, FinMap(4, {4, 2})) == T(kCmon, "(plus x4 x2)", 4));
  CHECK_THROWS_AS(act(w, FinMap::identity(3)), ArityError);

  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::uint32_t k = uniform(rng, 0, 4), l = uniform(rng, 1, 4), m = uniform(rng, 1, 4);
    auto t = random_term(rng, kCsr, k, 9);
    auto f = random_map(rng, k, l), g = random_map(rng, l, m);
    REQUIRE(act(act(t, f), g) == act(t, compose(f, g)));
  }
}

TEST_CASE("is_linear", "[term]") {
  CHECK(is_linear(T(kCmon, "(plus x1 x2)")));
  CHECK_FALSE(is_linear(T(kCmon, "(plus x1 x1)")));
  CHECK(is_linear(T(kCmon, "zero", 0)));
  CHECK_FALSE(is_linear(T(kCmon, "x1", 2)));  // x2 unused
}

TEST_CASE("canonicalize", "[term]") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = random_term(rng, kCsr, 3, 11);
    auto c = canonicalize(t);
    REQUIRE(canonicalize(c) == c);
    REQUIRE(canonicalize(Term(t.ambient_arity(), {t.nodes().begin(), t.nodes().end()})) == c);
  }
  // the free theory identifies nothing: distinct trees stay distinct
  CHECK(canonicalize(T(kCmon, "(plus x1 x2)")) != canonicalize(T(kCmon, "(plus x2 x1)")));
  CHECK(canonicalize(T(kCmon, "(plus (plus x1 x2) x3)")) !=
        canonicalize(T(kCmon, "(plus x1 (plus x2 x3))")));
}

TEST_CASE("subterms and replacement", "[term]") {
  auto t = T(kCsr, "(times (plus x1 x2) x3)");
  CHECK(t.subterm({0}) == T(kCsr, "(plus x1 x2)", 3));
  CHECK(t.subterm({0, 1}) == T(kCsr, "x2", 3));
  CHECK(t.subterm({}) == t);
  CHECK(t.replace({0}, T(kCsr, "(plus x2 x1)", 3)) == T(kCsr, "(times (plus x2 x1) x3)"));
  CHECK(t.position_of(t.index_of({1})) == Position{1});
  CHECK_THROWS_AS(t.subterm({2}), ArityError);
  auto [r, inc] = restrict_to_used(T(kCmon, "(plus x3 x1)", 4));
  CHECK(r == T(kCmon, "(plus x2 x1)"));
  CHECK(inc == FinMap(4, {1, 3}));
}

TEST_CASE("eval in a finite algebra", "[term]") {
  FiniteAlgebra z2{2, {{0, 1, 1, 0}, {0}}};  // xor, 0
  z2.check(kCmon);
  std::vector<std::uint32_t> a{1};
  CHECK(eval(Term::var(1, 1), z2, a) == 1);
  std::vector<std::uint32_t> ones{1, 1};
  CHECK(eval(T(kCmon, "(plus (plus x1 x2) x2)"), z2, ones) == 1);
  std::vector<std::uint32_t> bad{2, 0};
  CHECK_THROWS_AS(eval(T(kCmon, "(plus x1 x2)"), z2, bad), ArityError);

  // eval(act_f(w), xs) == eval(w, xs o f) in a random 3-element csr algebra
  Rng rng(5);
  FiniteAlgebra alg{3, {}};
  for (const auto& g : kCsr.generators()) {
    std::vector<std::uint32_t> tab(ipow(3, g.arity));
    for (auto& v : tab) v = uniform(rng, 0, 2);
    alg.tables.push_back(tab);
  }
  for (int trial = 0; trial < 300; ++trial) {
    std::uint32_t k = uniform(rng, 0, 3), l = uniform(rng, 1, 3);
    auto w = random_term(rng, kCsr, k, 9);
    auto f = random_map(rng, k, l);
    std::vector<std::uint32_t> xs(l), pulled;
    for (auto& x : xs) x = uniform(rng, 0, 2);
    for (auto v : f.table()) pulled.push_back(xs[v - 1]);
    REQUIRE(eval(act(w, f), alg, xs) == eval(w, alg, pulled));
  }
}

TEST_CASE("theory axioms on random terms", "[term][property]") {
  Rng rng(17);
  for (const auto* sig : {&kCmon, &kCsr}) {
    for (int trial = 0; trial < 400; ++trial) {
      // (1) associativity of gamma
      auto w = random_term(rng, *sig, uniform(rng, 0, 3), 7);
      auto us = random_args(rng, *sig, w.ambient_arity(), 7);
      std::vector<Term> vs_flat, inner;
      for (const auto& u : us) {
        auto vs = random_args(rng, *sig, u.ambient_arity(), 5);
        vs_flat.insert(vs_flat.end(), vs.begin(), vs.end());
        inner.push_back(gamma(u, vs));
      }
      REQUIRE(canonicalize(gamma(gamma(w, us), vs_flat)) == canonicalize(gamma(w, inner)));

      // (2) units
      std::vector<Term> ones(w.ambient_arity(), Term::var(1, 1));
      REQUIRE(gamma(w, ones) == w);
      REQUIRE(gamma(Term::var(1, 1), {w}) == w);

      // (3) equivariance in the outer word
      std::uint32_t l = uniform(rng, 1, 3);
      auto f = random_map(rng, w.ambient_arity(), l);
      auto ws = random_args(rng, *sig, l, 5);
      std::vector<Term> pulled;
      std::vector<std::uint32_t> arities;
      for (const auto& x : ws) arities.push_back(x.ambient_arity());
      for (auto v : f.table()) pulled.push_back(ws[v - 1]);
      REQUIRE(canonicalize(gamma(act(w, f), ws)) ==
              canonicalize(act(gamma(w, pulled), block_map(f, arities))));

      // (4) equivariance in the arguments
      std::vector<Term> acted;
      std::vector<FinMap> gs;
      for (const auto& u : us) {
        gs.push_back(random_map(rng, u.ambient_arity(), uniform(rng, 1, 3)));
        acted.push_back(act(u, gs.back()));
      }
      REQUIRE(canonicalize(gamma(w, acted)) == canonicalize(act(gamma(w, us), juxtapose(gs))));
    }
  }
}

TEST_CASE("gamma agrees with End(X) composition under eval", "[term][property]") {
  // eval is a theory morphism into End(X): compare against the test-side gamma
  Rng rng(19);
  FiniteAlgebra alg{2, {{0, 1, 1, 1}, {1, 0, 0, 1}, {0}, {1}}};
  alg.check(kCsr);
  auto table_of = [&](const Term& t) {
    EndFn e{2, t.ambient_arity(), std::vector<std::uint32_t>(ipow(2, t.ambient_arity()))};
    for (std::size_t idx = 0; idx < e.table.size(); ++idx) {
      auto xs = decode(idx, 2, t.ambient_arity());
      e.table[idx] = eval(t, alg, xs);
    }
    return e;
  };
  for (int trial = 0; trial < 200; ++trial) {
    auto w = random_term(rng, kCsr, uniform(rng, 0, 3), 7);
    auto us = random_args(rng, kCsr, w.ambient_arity(), 7);
    std::vector<EndFn> es;
    for (const auto& u : us) es.push_back(table_of(u));
    REQUIRE(table_of(gamma(w, us)) == end_gamma(table_of(w), es));
  }
}

TEST_CASE("operad elements: representatives modulo bijections", "[term][property]") {
  Rng rng(23);
  auto linear_term = [&](std::uint32_t m) {
    // random shape, then leaves labelled by a random permutation
    for (;;) {
      auto t = random_term(rng, kCmon, 1, 2 * m + 2);
      auto leaves = t.leaves();
      if (leaves.size() != m) continue;
      auto sigma = random_bijection(rng, m);
      std::vector<Node> nodes(t.nodes().begin(), t.nodes().end());
      std::uint32_t k = 0;
      for (auto& n : nodes)
        if (n.is_var()) n.head = -static_cast<std::int32_t>(sigma(++k));
      return Term(m, std::move(nodes));
    }
  };
  for (int trial = 0; trial < 300; ++trial) {
    std::uint32_t m = uniform(rng, 1, 4), n = uniform(rng, 1, 4);
    auto u = linear_term(m);
    auto f = random_map(rng, m, n);
    auto sigma = random_bijection(rng, m);
    OperadElem a(compose(sigma, f), u), b(f, act(u, sigma));
    REQUIRE(a.to_term() == b.to_term());
    REQUIRE(a.canonical() == b.canonical());
    REQUIRE(a.canonical().to_term() == a.to_term());
    REQUIRE(a.canonical().canonical() == a.canonical());
  }
  CHECK_THROWS_AS(OperadElem(FinMap(1, {1}), T(kCmon, "(plus x1 x1)")), ArityError);
}

TEST_CASE("the canonical map from the operad into the theory is injective", "[term][slow]") {
  // every canonical representative (f, u) with u linear in first-occurrence
  // order, arity n <= 5, size <= 8, must give a different term
  auto terms = enumerate_terms(kCmon, 5, 8);
  for (std::uint32_t n = 1; n <= 5; ++n) {
    std::set<Term> seen;
    std::size_t count = 0;
    for (std::size_t s = 1; s <= 8; ++s)
      for (const auto& t : terms[s]) {
        auto leaves = t.leaves();
        std::uint32_t m = static_cast<std::uint32_t>(leaves.size());
        bool first_order = true;
        for (std::uint32_t k = 0; k < m; ++k) first_order = first_order && leaves[k] == k + 1;
        if (!first_order) continue;
        Term u(m, {t.nodes().begin(), t.nodes().end()});
        // all maps m -> n
        std::vector<std::uint32_t> tab(m, 1);
        for (;;) {
          OperadElem e(FinMap(n, tab), u);
          REQUIRE(e.canonical() == e);
          seen.insert(e.to_term());
          ++count;
          std::uint32_t k = 0;
          while (k < m && tab[k] == n) tab[k++] = 1;
          if (k == m) break;
          ++tab[k];
        }
      }
    CHECK(seen.size() == count);
  }
}
