#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "cohere/strictify.hpp"
#include "cohere/sym_fixtures.hpp"

using namespace cohere;
namespace fx = cohere::fixtures;

namespace {

std::uint32_t morphism_named(const Category& c, const std::string& name) {
  for (std::uint32_t f = 0; f < c.num_morphisms(); ++f)
    if (c.mor(f).name == name) return f;
  FAIL("no morphism " << name);
  return 0;
}

// Builds the comparison map between the strictifications for two class
// orders (with the same representatives) and checks it is an isomorphism
// of strict algebras.
void check_orders_agree(const FinSymMonCat& c, const std::vector<std::uint32_t>& order2) {
  auto r1 = strictify(c);
  auto r2 = strictify(c, order2);
  const auto &a = r1.algebra, &b = r2.algebra;
  REQUIRE(a.cat.num_objects() == b.cat.num_objects());
  REQUIRE(a.cat.num_morphisms() == b.cat.num_morphisms());
  ShuffleIsos isos1(c, r1.order);
  // class index in order 1 -> class index in order 2
  std::vector<std::uint32_t> rank(r1.order.representative.size());
  for (std::uint32_t i = 0; i < rank.size(); ++i) {
    auto rep = r1.order.representative[i];
    rank[i] = r2.order.class_of[rep];
    REQUIRE(r2.order.representative[rank[i]] == rep);
  }
  std::map<FormalSum, std::uint32_t> index2;
  for (std::uint32_t y = 0; y < b.sums.size(); ++y) index2[b.sums[y]] = y;
  std::vector<std::uint32_t> phi_obj, p;
  for (const auto& x : a.sums) {
    FormalSum y;
    for (auto i : x) y.push_back(rank[i]);
    std::vector<std::uint32_t> idx(x.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return y[i] < y[j]; });
    std::vector<std::uint32_t> target(x.size());
    for (std::uint32_t s = 0; s < idx.size(); ++s) target[idx[s]] = s;
    std::sort(y.begin(), y.end());
    phi_obj.push_back(index2.at(y));
    p.push_back(isos1.permute(x, target));
  }
  const auto& k = c.cat;
  std::vector<std::uint32_t> phi_mor;
  for (std::uint32_t f = 0; f < a.cat.num_morphisms(); ++f) {
    const auto& m = a.cat.mor(f);
    auto want = k.chain({k.inverse_of(p[m.src]), r1.functor.on_morphisms[f], p[m.tgt]});
    std::optional<std::uint32_t> hit;
    for (auto g : b.cat.hom(phi_obj[m.src], phi_obj[m.tgt]))
      if (r2.functor.on_morphisms[g] == want) hit = g;
    REQUIRE(hit);
    phi_mor.push_back(*hit);
  }
  auto sorted_obj = phi_obj, sorted_mor = phi_mor;
  std::sort(sorted_obj.begin(), sorted_obj.end());
  std::sort(sorted_mor.begin(), sorted_mor.end());
  CHECK(std::adjacent_find(sorted_obj.begin(), sorted_obj.end()) == sorted_obj.end());
  CHECK(std::adjacent_find(sorted_mor.begin(), sorted_mor.end()) == sorted_mor.end());
  for (const auto& [gf, h] : a.cat.composition_table())
    REQUIRE(b.cat.try_compose(phi_mor[gf.first], phi_mor[gf.second]) == phi_mor[h]);
  for (const auto& [xy, z] : a.plus_obj) REQUIRE(b.plus(phi_obj[xy.first], phi_obj[xy.second]) == phi_obj[z]);
  for (const auto& [fg, h] : a.plus_mor) REQUIRE(b.plus_m(phi_mor[fg.first], phi_mor[fg.second]) == phi_mor[h]);
}

}  // namespace

TEST_CASE("fixtures are coherent symmetric monoidal categories", "[strictify]") {
  for (const auto& f : fx::all()) {
    INFO(f.name);
    auto e = check_coherent(f.category);
    CHECK_FALSE(e.has_value());
  }
}

TEST_CASE("incoherent tables are rejected with the failing diagram", "[strictify]") {
  auto c = fx::sign_lines();
  c.lambda[1] = morphism_named(c.cat, "neg_L1");
  auto e = check_coherent(c);
  REQUIRE(e);
  CHECK(e->find("triangle") != std::string::npos);
  CHECK_THROWS_AS(strictify(c), IncoherentError);

  // a symmetry sign that is not bilinear breaks the hexagon
  auto bad = fx::graded_lines(4, fx::xor_table(2), 2, [](auto a, auto b) { return a * b == 2; });
  e = check_coherent(bad);
  REQUIRE(e);
  CHECK(e->find("hexagon") != std::string::npos);

  auto broken = fx::capped_monoid(2);
  broken.cat.set_compose(0, 0, 1);
  e = check_coherent(broken);
  REQUIRE(e);

  auto asym = fx::sign_lines();
  asym.tau[1 * 2 + 0] = morphism_named(asym.cat, "neg_L1");
  e = check_coherent(asym);
  REQUIRE(e);
}

TEST_CASE("strictification of every strictifiable fixture", "[strictify]") {
  for (const auto& f : fx::all()) {
    if (!f.strictifiable) continue;
    INFO(f.name);
    auto r = strictify(f.category);
    auto s = verify_strict(r.algebra);
    INFO(s.witness);
    CHECK(s.ok);
    auto e = verify_equivalence(r.functor);
    INFO(e.witness);
    CHECK(e.ok);
  }
}

TEST_CASE("a nontrivial switch on equal summands blocks strictification", "[strictify]") {
  auto c = fx::super_lines();
  REQUIRE_FALSE(check_coherent(c));
  ShuffleIsos isos(c, class_order(c));
  auto w = shuffle_witnesses(isos, 3);
  REQUIRE_FALSE(w.empty());
  // exactly the sums with two or more odd summands need the switch
  for (const auto& x : formal_sums(2, 3))
    for (const auto& y : formal_sums(2, 3)) {
      if (x.size() + y.size() > 3) continue;
      bool listed = std::any_of(w.begin(), w.end(), [&](const auto& s) { return s.x == x && s.y == y; });
      CHECK(listed == (x.size() + y.size() >= 2));
    }
  try {
    strictify(c);
    FAIL("expected rejection");
  } catch (const IncoherentError& e) {
    CHECK(std::string(e.what()).find("switch") != std::string::npos);
  }
  // the coherent relatives pass the same check
  CHECK(shuffle_witnesses(ShuffleIsos(fx::sign_lines(), class_order(fx::sign_lines())), 3).empty());
}

TEST_CASE("strict algebra shapes", "[strictify]") {
  // one object: the unit
  auto t = strictify(fx::trivial());
  CHECK(t.algebra.sums.size() == 1);
  CHECK(verify_strict(t.algebra).ok);

  // a duplicate of the unit collapses to a0 alone
  auto u = strictify(fx::indiscrete(2));
  CHECK(u.algebra.sums == std::vector<FormalSum>{FormalSum{}});
  CHECK(u.functor.on_objects == std::vector<std::uint32_t>{0});
  CHECK(u.functor.target.num_objects() == 2);
  CHECK(verify_equivalence(u.functor).ok);

  // capped monoid: classes 1..3, sums of length <= 3
  auto cm = strictify(fx::capped_monoid(3));
  CHECK(cm.algebra.sums.size() == 1 + 3 + 6 + 10);
  CHECK(cm.functor.on_objects[3] == 3);  // a3 -> L3
  auto two = strictify(fx::capped_monoid(3), std::nullopt, 2);
  CHECK(two.algebra.sums.size() == 1 + 3 + 6);
  CHECK(verify_strict(two.algebra).ok);
}

TEST_CASE("the shuffle of two single summands is the switch", "[strictify]") {
  auto c = fx::klein_lines();
  ShuffleIsos isos(c, class_order(c));
  const auto& k = c.cat;
  for (std::uint32_t i = 1; i < 4; ++i)
    for (std::uint32_t j = 1; j < 4; ++j) {
      auto s = isos.shuffle({i}, {j});
      if (i > j)
        CHECK(s == c.swap(i, j));
      else
        CHECK(s == k.id(c.obj(i, j)));
    }
  // the switch is a sign here, so summing morphisms really conjugates
  CHECK(k.mor(c.swap(1, 2)).name == "neg_L3");
  auto r = strictify(c);
  CHECK(verify_strict(r.algebra).ok);
}

TEST_CASE("verify_strict and verify_equivalence reject corrupted tables", "[strictify]") {
  auto r = strictify(fx::sign_lines());
  auto bad = r.algebra;
  auto key = bad.plus_obj.begin();
  while (key->first.first == key->first.second || key->first.first == 0 || key->first.second == 0) ++key;
  key->second = 0;
  auto v = verify_strict(bad);
  CHECK_FALSE(v.ok);
  CHECK_FALSE(v.witness.empty());

  bad = r.algebra;
  // send neg+id to id+id on the same objects
  std::uint32_t x1 = 1, neg = 0;
  for (auto f : bad.cat.hom(x1, x1))
    if (f != bad.cat.id(x1)) neg = f;
  auto it = bad.plus_mor.find({neg, bad.cat.id(0)});
  REQUIRE(it != bad.plus_mor.end());
  it->second = bad.cat.id(x1);
  CHECK_FALSE(verify_strict(bad).ok);

  CHECK(verify_equivalence(identity_functor(r.algebra.cat)).ok);
  auto F = r.functor;
  F.on_morphisms[neg] = F.on_morphisms[r.algebra.cat.id(x1)];
  auto e = verify_equivalence(F);
  CHECK_FALSE(e.ok);
  CHECK_FALSE(e.witness.empty());

  // dropping a target object from the essential image
  auto G = strictify(fx::capped_monoid(3), std::nullopt, 1).functor;
  CHECK(verify_equivalence(G).ok);
  G.target.add_object("extra");
  G.target.set_identity(4, G.target.add_morphism("id_extra", 4, 4));
  G.target.set_compose(G.target.id(4), G.target.id(4), G.target.id(4));
  CHECK_FALSE(verify_equivalence(G).ok);
}

TEST_CASE("class orders and representatives", "[strictify]") {
  auto c = fx::inflate(fx::sign_lines(), 2);
  auto o = class_order(c);
  REQUIRE(o.representative.size() == 2);
  CHECK(o.representative[0] == c.unit);
  CHECK(o.class_of[1] == 0);  // the copy of the unit
  CHECK_THROWS_AS(class_order(c, std::vector<std::uint32_t>{2, 0}), IncoherentError);
  CHECK_THROWS_AS(class_order(c, std::vector<std::uint32_t>{0, 1}), IncoherentError);
  auto o2 = class_order(c, std::vector<std::uint32_t>{1, 3});
  CHECK(o2.representative == std::vector<std::uint32_t>{c.unit, 3});
}

TEST_CASE("the result depends on the class order only up to isomorphism", "[strictify]") {
  check_orders_agree(fx::capped_monoid(3), {0, 3, 2, 1});
  check_orders_agree(fx::klein_lines(), {0, 3, 1, 2});
}
