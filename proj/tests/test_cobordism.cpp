#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "cohere/cobordism.hpp"
#include "support/euler.hpp"
#include "support/random_terms.hpp"
#include "support/two_enum.hpp"

using namespace cohere;
using namespace cohere::testing;

TEST_CASE("gluing one component raises its genus", "[cobordism]") {
  auto cyl = Cobordism::make({"a"}, {"a"}, {{{"a"}, {"a"}, 0}});
  auto torus = self_glue(cyl, {"a"});
  REQUIRE(torus.components().size() == 1);
  CHECK(torus.components()[0].genus == 1);
  CHECK(torus.inbound().empty());

  auto pants = Cobordism::make({"a", "b"}, {"a", "c"}, {{{"a", "b"}, {"a", "c"}, 2}});
  auto g = self_glue(pants, {"a"});
  CHECK(g == Cobordism::make({"b"}, {"c"}, {{{"b"}, {"c"}, 3}}));
}

TEST_CASE("gluing two components joins them without genus", "[cobordism]") {
  auto x = Cobordism::make({"a", "b"}, {"a", "c"}, {{{"a"}, {"c"}, 1}, {{"b"}, {"a"}, 2}});
  auto g = self_glue(x, {"a"});
  CHECK(g == Cobordism::make({"b"}, {"c"}, {{{"b"}, {"c"}, 3}}));
  // a second seam between the same pair adds a handle
  auto y = Cobordism::make({"a", "d"}, {"a", "d"}, {{{"a"}, {"d"}, 0}, {{"d"}, {"a"}, 0}});
  CHECK(self_glue(y, {"a"}).components()[0].genus == 0);
  CHECK(self_glue(y, {"a", "d"}).components()[0].genus == 1);
}

TEST_CASE("genus after gluing matches the Euler characteristic count", "[cobordism]") {
  CobRng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> glue;
    auto x = random_gluable(rng, glue);
    CHECK(self_glue(x, glue) == euler_glue(x, glue));
  }
}

TEST_CASE("gluing does not depend on the order of the seams", "[cobordism]") {
  CobRng rng(78);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> glue;
    auto x = random_gluable(rng, glue);
    auto once = self_glue(x, glue);
    auto shuffled = glue;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(self_glue(x, shuffled) == once);
    auto step = x;
    for (const auto& l : shuffled) step = self_glue(step, {l});
    CHECK(step == once);
  }
}

TEST_CASE("the six diagrams commute on random cobordisms", "[cobordism]") {
  auto r = check_cmc_axioms(2718, 500);
  for (std::size_t i = 0; i < 6; ++i) {
    INFO("diagram " << i);
    CHECK(r.passed[i] == r.samples);
  }
  CHECK(r.ok());
}

TEST_CASE("disjoint union tags and relabeling", "[cobordism]") {
  auto x = Cobordism::make({"a"}, {"b"}, {{{"a"}, {"b"}, 1}});
  auto y = Cobordism::make({}, {"b"}, {{{}, {"b"}, 0}});
  auto u = disjoint_union(x, y);
  CHECK(u.inbound() == std::vector<std::string>{"L.a"});
  CHECK(u.outbound() == std::vector<std::string>{"L.b", "R.b"});
  CHECK(u.total_genus() == 1);
  CHECK_THROWS_AS(relabel(u, [](const std::string&) { return std::string("z"); },
                          [](const std::string&) { return std::string("z"); }),
                  LabelError);
  CHECK_THROWS_AS(relabel(x, std::map<std::string, std::string>{}, std::map<std::string, std::string>{{"b", "c"}}),
                  LabelError);
  CHECK_THROWS_AS(relabel(x, std::map<std::string, std::string>{{"q", "c"}}, std::map<std::string, std::string>{{"b", "c"}}),
                  LabelError);
  CHECK(relabel(x, std::map<std::string, std::string>{{"a", "c"}}, std::map<std::string, std::string>{{"b", "d"}}) ==
        Cobordism::make({"c"}, {"d"}, {{{"c"}, {"d"}, 1}}));
  CHECK_THROWS_AS(Cobordism::make({"a", "a"}, {}, {{{"a", "a"}, {}, 0}}), LabelError);
  CHECK_THROWS_AS(Cobordism::make({"a"}, {}, {}), LabelError);
  CHECK_THROWS_AS(self_glue(x, {"a"}), LabelError);
}

TEST_CASE("evaluation factors through the normal form", "[cobordism]") {
  Rng rng(31);
  CobRng crng(32);
  const LabelInterp I{{{"p", "q"}, {"r"}, {"s"}}};
  std::size_t exact = 0, checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t m = uniform(rng, 1, 3);
    std::vector<IndexWord> types;
    for (std::uint32_t q = uniform(rng, 0, 3); q > 0; --q)
      types.push_back(IndexWord::of(random_word(rng, m, 2), random_word(rng, m, 2)));
    auto t = random_two_term(rng, m, types);
    auto ty = typecheck(t);
    std::map<std::uint32_t, Cobordism> inputs;
    for (const auto& [i, w] : ty.sources)
      inputs[i] = random_cobordism(crng, word_labels(w.in, I), word_labels(w.out, I), 3, 1);
    auto r = replay(normalize(t), ty.sources);
    auto a = eval_two_term(t, I, inputs), b = eval_two_term(r, I, inputs);
    INFO(to_string(t) << " ~> " << to_string(r));
    auto in = word_labels(ty.target.in, I), out = word_labels(ty.target.out, I);
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    CHECK(a.inbound() == in);
    CHECK(a.outbound() == out);
    auto chi = [](const Cobordism& x) { return static_cast<long>(x.components().size()) - static_cast<long>(x.total_genus()); };
    CHECK(chi(a) == chi(b));
    // with no variable repeated across all slots, no cancellation has a choice to make
    auto total = IndexWord::zero(m);
    for (const auto& w : types) total = total + w;
    bool linear = true;
    for (const auto* side : {&total.in, &total.out})
      linear = linear && std::adjacent_find(side->vars.begin(), side->vars.end()) == side->vars.end();
    if (linear) {
      CHECK(a == b);
      ++checked;
    }
    exact += a == b;
  }
  CHECK(exact > 50);
  CHECK(checked > 30);
}

TEST_CASE("coherence paths move worldsheets consistently", "[cobordism]") {
  for (std::uint32_t n = 1; n <= 3; ++n) {
    INFO("n = " << n);
    auto r = check_operadic_coherence(n, Caps{6, 8, 0, 200000}, 100 + n, 30);
    CHECK(r.pairs > 0);
    CHECK(r.ok());
  }
}
