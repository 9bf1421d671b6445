#pragma once

// Finite, table-presented symmetric monoidal categories and their
// strictification to a strictly commutative monoid of formal sums.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cohere/error.hpp"

namespace cohere {

/// Input tables that fail a category, functor or coherence law.
class IncoherentError : public Error {
 public:
  using Error::Error;
};

struct Morphism {
  std::string name;
  std::uint32_t src = 0;
  std::uint32_t tgt = 0;
};

class Category {
 public:
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<std::uint32_t> identity;  // per object

  std::uint32_t add_object(std::string name) {
    objects.push_back(std::move(name));
    return static_cast<std::uint32_t>(objects.size() - 1);
  }
  std::uint32_t add_morphism(std::string name, std::uint32_t src, std::uint32_t tgt) {
    morphisms.push_back(Morphism{std::move(name), src, tgt});
    out_[src].push_back(static_cast<std::uint32_t>(morphisms.size() - 1));
    return static_cast<std::uint32_t>(morphisms.size() - 1);
  }
  void set_identity(std::uint32_t obj, std::uint32_t mor) {
    if (identity.size() < objects.size()) identity.resize(objects.size());
    identity[obj] = mor;
  }
  /// Records g∘f = h.
  void set_compose(std::uint32_t g, std::uint32_t f, std::uint32_t h) { comp_[{g, f}] = h; }

  std::size_t num_objects() const { return objects.size(); }
  std::size_t num_morphisms() const { return morphisms.size(); }
  const Morphism& mor(std::uint32_t f) const { return morphisms.at(f); }
  std::uint32_t id(std::uint32_t obj) const { return identity.at(obj); }

  std::optional<std::uint32_t> try_compose(std::uint32_t g, std::uint32_t f) const {
    auto it = comp_.find({g, f});
    if (it == comp_.end()) return std::nullopt;
    return it->second;
  }
  /// g∘f; throws when the table has no entry.
  std::uint32_t compose(std::uint32_t g, std::uint32_t f) const {
    auto h = try_compose(g, f);
    if (!h) throw IncoherentError("composite " + mor(g).name + " . " + mor(f).name + " missing");
    return *h;
  }
  /// Composes a chain given in application order (first applied first).
  std::uint32_t chain(std::initializer_list<std::uint32_t> fs) const {
    auto it = fs.begin();
    std::uint32_t acc = *it;
    for (++it; it != fs.end(); ++it) acc = compose(*it, acc);
    return acc;
  }

  std::vector<std::uint32_t> hom(std::uint32_t a, std::uint32_t b) const {
    std::vector<std::uint32_t> out;
    auto it = out_.find(a);
    if (it == out_.end()) return out;
    for (auto f : it->second)
      if (morphisms[f].tgt == b) out.push_back(f);
    return out;
  }

  std::optional<std::uint32_t> inverse(std::uint32_t f) const {
    const auto& m = mor(f);
    for (auto g : hom(m.tgt, m.src))
      if (try_compose(g, f) == id(m.src) && try_compose(f, g) == id(m.tgt)) return g;
    return std::nullopt;
  }
  std::uint32_t inverse_of(std::uint32_t f) const {
    auto g = inverse(f);
    if (!g) throw IncoherentError(mor(f).name + " is not invertible");
    return *g;
  }
  bool isomorphic(std::uint32_t a, std::uint32_t b) const {
    for (auto f : hom(a, b))
      if (inverse(f)) return true;
    return false;
  }

  const std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>& composition_table() const {
    return comp_;
  }

 private:
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> comp_;
  std::map<std::uint32_t, std::vector<std::uint32_t>> out_;
};

/// First violated law, if any.
inline std::optional<std::string> check_category(const Category& c) {
  const auto n = static_cast<std::uint32_t>(c.num_objects());
  const auto m = static_cast<std::uint32_t>(c.num_morphisms());
  if (c.identity.size() != n) return "identity table has wrong size";
  for (std::uint32_t f = 0; f < m; ++f)
    if (c.mor(f).src >= n || c.mor(f).tgt >= n) return "morphism " + c.mor(f).name + " has an unknown endpoint";
  for (std::uint32_t a = 0; a < n; ++a) {
    auto i = c.id(a);
    if (i >= m || c.mor(i).src != a || c.mor(i).tgt != a) return "identity of " + c.objects[a] + " is mistyped";
  }
  for (const auto& [gf, h] : c.composition_table()) {
    auto [g, f] = gf;
    if (c.mor(f).tgt != c.mor(g).src || c.mor(h).src != c.mor(f).src || c.mor(h).tgt != c.mor(g).tgt)
      return "composite " + c.mor(g).name + " . " + c.mor(f).name + " is mistyped";
  }
  for (std::uint32_t f = 0; f < m; ++f) {
    const auto& mf = c.mor(f);
    if (c.try_compose(f, c.id(mf.src)) != f || c.try_compose(c.id(mf.tgt), f) != f)
      return "identity law fails at " + mf.name;
  }
  for (std::uint32_t f = 0; f < m; ++f)
    for (std::uint32_t g = 0; g < m; ++g) {
      if (c.mor(f).tgt != c.mor(g).src) continue;
      if (!c.try_compose(g, f)) return "composite " + c.mor(g).name + " . " + c.mor(f).name + " missing";
      for (std::uint32_t h = 0; h < m; ++h) {
        if (c.mor(g).tgt != c.mor(h).src) continue;
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          return "associativity fails at " + c.mor(h).name + ", " + c.mor(g).name + ", " + c.mor(f).name;
      }
    }
  return std::nullopt;
}

/// A biased symmetric monoidal structure on a finite category.
struct FinSymMonCat {
  Category cat;
  std::uint32_t unit = 0;
  std::vector<std::uint32_t> tensor_obj;  // a*N + b
  std::vector<std::uint32_t> tensor_mor;  // f*M + g
  std::vector<std::uint32_t> alpha;       // (a⊕b)⊕c -> a⊕(b⊕c), index (a*N + b)*N + c
  std::vector<std::uint32_t> lambda;      // I⊕a -> a
  std::vector<std::uint32_t> rho;         // a⊕I -> a
  std::vector<std::uint32_t> tau;         // a⊕b -> b⊕a, index a*N + b

  std::uint32_t n() const { return static_cast<std::uint32_t>(cat.num_objects()); }
  std::uint32_t m() const { return static_cast<std::uint32_t>(cat.num_morphisms()); }
  std::uint32_t obj(std::uint32_t a, std::uint32_t b) const { return tensor_obj.at(a * n() + b); }
  std::uint32_t mor(std::uint32_t f, std::uint32_t g) const { return tensor_mor.at(f * m() + g); }
  std::uint32_t assoc(std::uint32_t a, std::uint32_t b, std::uint32_t c) const {
    return alpha.at((a * n() + b) * n() + c);
  }
  std::uint32_t swap(std::uint32_t a, std::uint32_t b) const { return tau.at(a * n() + b); }
};

/// The first failing diagram, described by name and the objects or
/// morphisms it was instantiated at.
inline std::optional<std::string> check_coherent(const FinSymMonCat& c) {
  if (auto e = check_category(c.cat)) return e;
  const auto n = c.n(), m = c.m();
  const auto& k = c.cat;
  if (c.unit >= n) return "unit object unknown";
  if (c.tensor_obj.size() != std::size_t{n} * n || c.tensor_mor.size() != std::size_t{m} * m ||
      c.alpha.size() != std::size_t{n} * n * n || c.lambda.size() != n || c.rho.size() != n ||
      c.tau.size() != std::size_t{n} * n)
    return "structure tables have wrong sizes";
  for (auto o : c.tensor_obj)
    if (o >= n) return "tensor of objects out of range";
  auto name = [&](std::uint32_t a) { return k.objects[a]; };
  auto typed = [&](std::uint32_t f, std::uint32_t s, std::uint32_t t) {
    return f < m && k.mor(f).src == s && k.mor(f).tgt == t;
  };
  // tensor is a bifunctor
  for (std::uint32_t f = 0; f < m; ++f)
    for (std::uint32_t g = 0; g < m; ++g) {
      const auto &mf = k.mor(f), &mg = k.mor(g);
      if (!typed(c.mor(f, g), c.obj(mf.src, mg.src), c.obj(mf.tgt, mg.tgt)))
        return "tensor of " + mf.name + " and " + mg.name + " is mistyped";
    }
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      if (c.mor(k.id(a), k.id(b)) != k.id(c.obj(a, b)))
        return "tensor of identities at " + name(a) + ", " + name(b);
  for (std::uint32_t f = 0; f < m; ++f)
    for (std::uint32_t g = 0; g < m; ++g)
      for (std::uint32_t f2 = 0; f2 < m; ++f2) {
        if (k.mor(f2).src != k.mor(f).tgt) continue;
        for (std::uint32_t g2 = 0; g2 < m; ++g2) {
          if (k.mor(g2).src != k.mor(g).tgt) continue;
          if (c.mor(k.compose(f2, f), k.compose(g2, g)) != k.compose(c.mor(f2, g2), c.mor(f, g)))
            return "interchange law at " + k.mor(f).name + ", " + k.mor(g).name + ", " + k.mor(f2).name + ", " +
                   k.mor(g2).name;
        }
      }
  // components: typed and invertible
  for (std::uint32_t a = 0; a < n; ++a) {
    if (!typed(c.lambda[a], c.obj(c.unit, a), a) || !k.inverse(c.lambda[a])) return "lambda at " + name(a);
    if (!typed(c.rho[a], c.obj(a, c.unit), a) || !k.inverse(c.rho[a])) return "rho at " + name(a);
    for (std::uint32_t b = 0; b < n; ++b) {
      if (!typed(c.swap(a, b), c.obj(a, b), c.obj(b, a)) || !k.inverse(c.swap(a, b)))
        return "tau at " + name(a) + ", " + name(b);
      for (std::uint32_t d = 0; d < n; ++d)
        if (!typed(c.assoc(a, b, d), c.obj(c.obj(a, b), d), c.obj(a, c.obj(b, d))) || !k.inverse(c.assoc(a, b, d)))
          return "alpha at " + name(a) + ", " + name(b) + ", " + name(d);
    }
  }
  // naturality
  const auto idu = k.id(c.unit);
  for (std::uint32_t f = 0; f < m; ++f) {
    const auto& mf = k.mor(f);
    if (k.compose(f, c.lambda[mf.src]) != k.compose(c.lambda[mf.tgt], c.mor(idu, f)))
      return "naturality of lambda at " + mf.name;
    if (k.compose(f, c.rho[mf.src]) != k.compose(c.rho[mf.tgt], c.mor(f, idu)))
      return "naturality of rho at " + mf.name;
    for (std::uint32_t g = 0; g < m; ++g) {
      const auto& mg = k.mor(g);
      if (k.compose(c.mor(g, f), c.swap(mf.src, mg.src)) != k.compose(c.swap(mf.tgt, mg.tgt), c.mor(f, g)))
        return "naturality of tau at " + mf.name + ", " + mg.name;
      for (std::uint32_t h = 0; h < m; ++h) {
        const auto& mh = k.mor(h);
        auto lhs = k.compose(c.mor(f, c.mor(g, h)), c.assoc(mf.src, mg.src, mh.src));
        auto rhs = k.compose(c.assoc(mf.tgt, mg.tgt, mh.tgt), c.mor(c.mor(f, g), h));
        if (lhs != rhs) return "naturality of alpha at " + mf.name + ", " + mg.name + ", " + mh.name;
      }
    }
  }
  // the shape diagrams
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      auto ia = k.id(a), ib = k.id(b);
      if (k.compose(c.mor(ia, c.lambda[b]), c.assoc(a, c.unit, b)) != c.mor(c.rho[a], ib))
        return "triangle at " + name(a) + ", " + name(b);
      if (k.compose(c.swap(b, a), c.swap(a, b)) != k.id(c.obj(a, b)))
        return "symmetry at " + name(a) + ", " + name(b);
      for (std::uint32_t d = 0; d < n; ++d) {
        auto id_ = k.id(d);
        // hexagon: (a⊕b)⊕d -> a⊕(b⊕d) -> (b⊕d)⊕a -> b⊕(d⊕a)
        auto lhs = k.chain({c.assoc(a, b, d), c.swap(a, c.obj(b, d)), c.assoc(b, d, a)});
        auto rhs = k.chain({c.mor(c.swap(a, b), id_), c.assoc(b, a, d), c.mor(ib, c.swap(a, d))});
        if (lhs != rhs) return "hexagon at " + name(a) + ", " + name(b) + ", " + name(d);
        for (std::uint32_t e = 0; e < n; ++e) {
          auto ie = k.id(e);
          auto p1 = k.chain({c.assoc(c.obj(a, b), d, e), c.assoc(a, b, c.obj(d, e))});
          auto p2 = k.chain({c.mor(c.assoc(a, b, d), ie), c.assoc(a, c.obj(b, d), e), c.mor(ia, c.assoc(b, d, e))});
          if (p1 != p2) return "pentagon at " + name(a) + ", " + name(b) + ", " + name(d) + ", " + name(e);
        }
      }
    }
  return std::nullopt;
}

/// Sorted class indices; the empty sum is the unit a_0.
using FormalSum = std::vector<std::uint32_t>;

inline std::string sum_name(const FormalSum& x) {
  if (x.empty()) return "a0";
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "+a" : "a") + std::to_string(x[i]);
  return s;
}

struct StrictAlgebra {
  Category cat;
  std::vector<FormalSum> sums;  // per object
  std::uint32_t length_cap = 0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> plus_obj;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> plus_mor;

  std::uint32_t unit() const { return 0; }
  std::optional<std::uint32_t> plus(std::uint32_t x, std::uint32_t y) const {
    auto it = plus_obj.find({x, y});
    return it == plus_obj.end() ? std::nullopt : std::optional(it->second);
  }
  std::optional<std::uint32_t> plus_m(std::uint32_t f, std::uint32_t g) const {
    auto it = plus_mor.find({f, g});
    return it == plus_mor.end() ? std::nullopt : std::optional(it->second);
  }
};

struct Functor {
  Category source;
  Category target;
  std::vector<std::uint32_t> on_objects;
  std::vector<std::uint32_t> on_morphisms;
};

/// Iso classes in the given order; representatives are the listed objects,
/// except that class 0 is represented by the unit.
struct ClassOrder {
  std::vector<std::uint32_t> representative;
  std::vector<std::uint32_t> class_of;  // per object
};

inline ClassOrder class_order(const FinSymMonCat& c, std::optional<std::vector<std::uint32_t>> order = {}) {
  const auto n = c.n();
  std::vector<std::uint32_t> first;  // one object per class, by first appearance, unit's class first
  std::vector<std::int64_t> cls(n, -1);
  auto visit = [&](std::uint32_t a) {
    if (cls[a] >= 0) return;
    auto idx = static_cast<std::int64_t>(first.size());
    first.push_back(a);
    for (std::uint32_t b = 0; b < n; ++b)
      if (c.cat.isomorphic(a, b)) cls[b] = idx;
  };
  visit(c.unit);
  for (std::uint32_t a = 0; a < n; ++a) visit(a);
  ClassOrder out;
  out.class_of.assign(n, 0);
  if (!order) {
    out.representative = first;
    for (std::uint32_t a = 0; a < n; ++a) out.class_of[a] = static_cast<std::uint32_t>(cls[a]);
    return out;
  }
  if (order->size() != first.size()) throw IncoherentError("order must list one object per isomorphism class");
  std::vector<bool> seen(first.size(), false);
  for (std::size_t i = 0; i < order->size(); ++i) {
    auto a = (*order)[i];
    if (a >= n) throw IncoherentError("order lists an unknown object");
    auto k = static_cast<std::size_t>(cls[a]);
    if (seen[k]) throw IncoherentError("order lists two objects of one isomorphism class");
    seen[k] = true;
    if (i == 0 && k != 0) throw IncoherentError("order must start with the unit's class");
    out.representative.push_back(i == 0 ? c.unit : a);
    for (std::uint32_t b = 0; b < n; ++b)
      if (cls[b] == cls[a]) out.class_of[b] = static_cast<std::uint32_t>(i);
  }
  return out;
}

/// Coherence isomorphisms between iterated tensors of class representatives.
class ShuffleIsos {
 public:
  ShuffleIsos(const FinSymMonCat& c, ClassOrder order) : c_(c), order_(std::move(order)) {}

  const ClassOrder& order() const { return order_; }

  /// Left-nested tensor of the representatives; the unit for the empty sum.
  std::uint32_t object(const FormalSum& x) const {
    if (x.empty()) return c_.unit;
    std::uint32_t acc = rep(x[0]);
    for (std::size_t i = 1; i < x.size(); ++i) acc = c_.obj(acc, rep(x[i]));
    return acc;
  }

  /// F(x)⊕F(y) -> F(x ++ y), reassociating to the left.
  std::uint32_t associate(const FormalSum& x, const FormalSum& y) const {
    const auto& k = c_.cat;
    if (y.empty()) return c_.rho[object(x)];
    if (x.empty()) return c_.lambda[object(y)];
    if (y.size() == 1) return k.id(c_.obj(object(x), object(y)));
    FormalSum y0(y.begin(), y.end() - 1);
    auto last = rep(y.back());
    auto a_inv = k.inverse_of(c_.assoc(object(x), object(y0), last));
    return k.compose(c_.mor(associate(x, y0), k.id(last)), a_inv);
  }

  /// F(w) -> F(w with entries pos, pos+1 exchanged).
  std::uint32_t adjacent_swap(const FormalSum& w, std::size_t pos) const {
    const auto& k = c_.cat;
    auto a = rep(w[pos]), b = rep(w[pos + 1]);
    std::uint32_t m;
    if (pos == 0) {
      m = c_.swap(a, b);
    } else {
      FormalSum prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
      auto p = object(prefix);
      m = k.chain({c_.assoc(p, a, b), c_.mor(k.id(p), c_.swap(a, b)), k.inverse_of(c_.assoc(p, b, a))});
    }
    for (std::size_t i = pos + 2; i < w.size(); ++i) m = c_.mor(m, k.id(rep(w[i])));
    return m;
  }

  /// F(w) -> F(sorted w), moving entry i to slot target[i].
  std::uint32_t permute(FormalSum w, std::vector<std::uint32_t> target) const {
    const auto& k = c_.cat;
    std::uint32_t acc = k.id(object(w));
    for (bool moved = true; moved;) {
      moved = false;
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (target[i] <= target[i + 1]) continue;
        acc = k.compose(adjacent_swap(w, i), acc);
        std::swap(w[i], w[i + 1]);
        std::swap(target[i], target[i + 1]);
        moved = true;
      }
    }
    return acc;
  }

  /// Every coherence isomorphism F(x)⊕F(y) -> F(x+y) obtained by some
  /// sorting of the concatenated summands, one per sorting permutation.
  std::vector<std::uint32_t> shuffles(const FormalSum& x, const FormalSum& y) const {
    FormalSum w = x;
    w.insert(w.end(), y.begin(), y.end());
    auto pre = associate(x, y);
    // slots for each value, in sorted order
    FormalSum sorted = w;
    std::sort(sorted.begin(), sorted.end());
    std::map<std::uint32_t, std::vector<std::uint32_t>> slots, positions;
    for (std::uint32_t i = 0; i < sorted.size(); ++i) slots[sorted[i]].push_back(i);
    for (std::uint32_t i = 0; i < w.size(); ++i) positions[w[i]].push_back(i);
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> target(w.size());
    // enumerate the product of per-value permutations
    std::vector<std::vector<std::uint32_t>> perms;
    std::vector<std::uint32_t> values;
    for (auto& [v, s] : slots) {
      values.push_back(v);
      perms.push_back(s);
    }
    auto rec = [&](auto&& self, std::size_t vi) -> void {
      if (vi == values.size()) {
        out.push_back(c_.cat.compose(permute(w, target), pre));
        return;
      }
      auto& s = perms[vi];
      std::sort(s.begin(), s.end());
      do {
        const auto& pos = positions[values[vi]];
        for (std::size_t j = 0; j < pos.size(); ++j) target[pos[j]] = s[j];
        self(self, vi + 1);
      } while (std::next_permutation(s.begin(), s.end()));
    };
    rec(rec, 0);
    return out;
  }

  /// The chosen shuffle: the stable sort.
  std::uint32_t shuffle(const FormalSum& x, const FormalSum& y) const {
    FormalSum w = x;
    w.insert(w.end(), y.begin(), y.end());
    std::vector<std::uint32_t> idx(w.size());
    for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return w[i] < w[j]; });
    std::vector<std::uint32_t> target(w.size());
    for (std::uint32_t s = 0; s < idx.size(); ++s) target[idx[s]] = s;
    return c_.cat.compose(permute(w, target), associate(x, y));
  }

 private:
  std::uint32_t rep(std::uint32_t cls) const { return order_.representative.at(cls); }

  const FinSymMonCat& c_;
  ClassOrder order_;
};

inline FormalSum merge(const FormalSum& x, const FormalSum& y) {
  FormalSum out;
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

/// All formal sums over classes 1..k-1 with at most `cap` summands, by
/// length and then lexicographically; the empty sum comes first.
inline std::vector<FormalSum> formal_sums(std::uint32_t classes, std::uint32_t cap) {
  std::vector<FormalSum> out{{}};
  if (classes <= 1) return out;
  std::vector<FormalSum> layer{{}};
  for (std::uint32_t len = 1; len <= cap; ++len) {
    std::vector<FormalSum> next;
    for (const auto& x : layer)
      for (std::uint32_t i = x.empty() ? 1 : x.back(); i < classes; ++i) {
        auto y = x;
        y.push_back(i);
        next.push_back(y);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

/// A pair of summands whose shuffle isomorphisms disagree.
struct ShuffleWitness {
  FormalSum x;
  FormalSum y;
  std::uint32_t first = 0;
  std::uint32_t second = 0;
};

/// Pairs of formal sums (total length <= cap) for which the result of +
/// would depend on the shuffle. Empty exactly when + is well defined.
inline std::vector<ShuffleWitness> shuffle_witnesses(const ShuffleIsos& isos, std::uint32_t cap) {
  std::vector<ShuffleWitness> out;
  auto sums = formal_sums(static_cast<std::uint32_t>(isos.order().representative.size()), cap);
  for (const auto& x : sums)
    for (const auto& y : sums) {
      if (x.size() + y.size() > cap) continue;
      auto all = isos.shuffles(x, y);
      for (auto s : all)
        if (s != all.front()) {
          out.push_back(ShuffleWitness{x, y, all.front(), s});
          break;
        }
    }
  return out;
}

struct Strictification {
  StrictAlgebra algebra;
  Functor functor;
  ClassOrder order;
};

/// The strict algebra of sorted formal sums with at most `cap` summands,
/// and the functor sending a sum to the left-nested tensor of its entries.
/// Throws IncoherentError naming the first failing diagram.
inline Strictification strictify(const FinSymMonCat& c, std::optional<std::vector<std::uint32_t>> order = {},
                                 std::uint32_t cap = 3) {
  if (auto e = check_coherent(c)) throw IncoherentError("incoherent input: " + *e);
  ShuffleIsos isos(c, class_order(c, std::move(order)));
  if (auto w = shuffle_witnesses(isos, cap); !w.empty()) {
    const auto& k = c.cat;
    throw IncoherentError("shuffle dependence: " + sum_name(w[0].x) + " + " + sum_name(w[0].y) +
                          " has distinct shuffles " + k.mor(w[0].first).name + " and " + k.mor(w[0].second).name +
                          "; the switch on equal summands must be the identity");
  }
  const auto& k = c.cat;
  Strictification r;
  r.order = isos.order();
  auto& a = r.algebra;
  a.length_cap = cap;
  a.sums = formal_sums(static_cast<std::uint32_t>(r.order.representative.size()), cap);
  std::map<FormalSum, std::uint32_t> index;
  std::vector<std::uint32_t> fobj;
  for (const auto& x : a.sums) {
    index[x] = a.cat.add_object(sum_name(x));
    fobj.push_back(isos.object(x));
  }
  // hom sets pulled back along F; remember which C-morphism each one is
  std::vector<std::uint32_t> fmor;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> lift;  // (x, y, f) -> morphism
  const auto no = static_cast<std::uint32_t>(a.sums.size());
  for (std::uint32_t x = 0; x < no; ++x)
    for (std::uint32_t y = 0; y < no; ++y)
      for (auto f : k.hom(fobj[x], fobj[y])) {
        auto g = a.cat.add_morphism(k.mor(f).name + ":" + a.cat.objects[x] + "->" + a.cat.objects[y], x, y);
        fmor.push_back(f);
        lift[{x, y, f}] = g;
      }
  for (std::uint32_t x = 0; x < no; ++x) a.cat.set_identity(x, lift.at({x, x, k.id(fobj[x])}));
  const auto nm = static_cast<std::uint32_t>(a.cat.num_morphisms());
  for (std::uint32_t f = 0; f < nm; ++f)
    for (std::uint32_t g = 0; g < nm; ++g) {
      if (a.cat.mor(f).tgt != a.cat.mor(g).src) continue;
      a.cat.set_compose(g, f, lift.at({a.cat.mor(f).src, a.cat.mor(g).tgt, k.compose(fmor[g], fmor[f])}));
    }
  for (std::uint32_t x = 0; x < no; ++x)
    for (std::uint32_t y = 0; y < no; ++y)
      if (a.sums[x].size() + a.sums[y].size() <= cap) a.plus_obj[{x, y}] = index.at(merge(a.sums[x], a.sums[y]));
  for (std::uint32_t f = 0; f < nm; ++f)
    for (std::uint32_t g = 0; g < nm; ++g) {
      const auto &mf = a.cat.mor(f), &mg = a.cat.mor(g);
      auto s = a.plus(mf.src, mg.src), t = a.plus(mf.tgt, mg.tgt);
      if (!s || !t) continue;
      auto before = k.inverse_of(isos.shuffle(a.sums[mf.src], a.sums[mg.src]));
      auto after = isos.shuffle(a.sums[mf.tgt], a.sums[mg.tgt]);
      a.plus_mor[{f, g}] = lift.at({*s, *t, k.chain({before, c.mor(fmor[f], fmor[g]), after})});
    }
  r.functor = Functor{a.cat, k, fobj, fmor};
  return r;
}

struct CheckReport {
  bool ok = true;
  std::string witness;
};

/// Exhaustive check that + is strictly commutative, associative and unital
/// on objects and morphisms, and a functor, wherever the sums are defined.
inline CheckReport verify_strict(const StrictAlgebra& a) {
  const auto& k = a.cat;
  const auto n = static_cast<std::uint32_t>(k.num_objects());
  const auto m = static_cast<std::uint32_t>(k.num_morphisms());
  auto fail = [](std::string w) { return CheckReport{false, std::move(w)}; };
  auto on = [&](std::uint32_t x) { return k.objects[x]; };
  auto mn = [&](std::uint32_t f) { return k.mor(f).name; };
  if (auto e = check_category(k)) return fail(*e);
  for (std::uint32_t x = 0; x < n; ++x) {
    if (a.plus(x, a.unit()) != x || a.plus(a.unit(), x) != x) return fail("unit law at " + on(x));
    for (std::uint32_t y = 0; y < n; ++y) {
      auto xy = a.plus(x, y);
      if (xy != a.plus(y, x)) return fail("commutativity at (" + on(x) + ", " + on(y) + ")");
      if (!xy) continue;
      for (std::uint32_t z = 0; z < n; ++z) {
        auto l = a.plus(*xy, z);
        auto yz = a.plus(y, z);
        auto r = yz ? a.plus(x, *yz) : std::nullopt;
        if (l && r && l != r) return fail("associativity at (" + on(x) + ", " + on(y) + ", " + on(z) + ")");
      }
    }
  }
  const auto id0 = k.id(a.unit());
  for (std::uint32_t f = 0; f < m; ++f) {
    if (a.plus_m(f, id0) != f || a.plus_m(id0, f) != f) return fail("unit law at " + mn(f));
    for (std::uint32_t g = 0; g < m; ++g) {
      auto fg = a.plus_m(f, g);
      if (fg != a.plus_m(g, f)) return fail("commutativity at (" + mn(f) + ", " + mn(g) + ")");
      if (!fg) continue;
      const auto &mf = k.mor(f), &mg = k.mor(g);
      if (k.mor(*fg).src != a.plus(mf.src, mg.src) || k.mor(*fg).tgt != a.plus(mf.tgt, mg.tgt))
        return fail("sum of " + mn(f) + " and " + mn(g) + " is mistyped");
      for (std::uint32_t h = 0; h < m; ++h) {
        auto l = a.plus_m(*fg, h);
        auto gh = a.plus_m(g, h);
        auto r = gh ? a.plus_m(f, *gh) : std::nullopt;
        if (l && r && l != r) return fail("associativity at (" + mn(f) + ", " + mn(g) + ", " + mn(h) + ")");
      }
    }
  }
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y) {
      auto xy = a.plus(x, y);
      if (xy && a.plus_m(k.id(x), k.id(y)) != k.id(*xy)) return fail("identities at (" + on(x) + ", " + on(y) + ")");
    }
  for (std::uint32_t f = 0; f < m; ++f)
    for (std::uint32_t g = 0; g < m; ++g) {
      auto fg = a.plus_m(f, g);
      if (!fg) continue;
      for (std::uint32_t f2 = 0; f2 < m; ++f2) {
        if (k.mor(f2).src != k.mor(f).tgt) continue;
        for (std::uint32_t g2 = 0; g2 < m; ++g2) {
          if (k.mor(g2).src != k.mor(g).tgt) continue;
          auto top = a.plus_m(f2, g2);
          if (!top) continue;
          if (a.plus_m(k.compose(f2, f), k.compose(g2, g)) != k.compose(*top, *fg))
            return fail("interchange at (" + mn(f) + ", " + mn(g) + ", " + mn(f2) + ", " + mn(g2) + ")");
        }
      }
    }
  return {};
}

/// Functor laws, essential surjectivity, and full faithfulness, all by
/// enumeration of the tables.
inline CheckReport verify_equivalence(const Functor& F) {
  const auto &s = F.source, &t = F.target;
  auto fail = [](std::string w) { return CheckReport{false, std::move(w)}; };
  if (F.on_objects.size() != s.num_objects() || F.on_morphisms.size() != s.num_morphisms())
    return fail("functor tables have wrong sizes");
  for (auto o : F.on_objects)
    if (o >= t.num_objects()) return fail("object image out of range");
  for (auto f : F.on_morphisms)
    if (f >= t.num_morphisms()) return fail("morphism image out of range");
  for (std::uint32_t f = 0; f < s.num_morphisms(); ++f) {
    const auto &ms = s.mor(f), &mt = t.mor(F.on_morphisms[f]);
    if (mt.src != F.on_objects[ms.src] || mt.tgt != F.on_objects[ms.tgt]) return fail("image of " + ms.name + " is mistyped");
  }
  for (std::uint32_t x = 0; x < s.num_objects(); ++x)
    if (F.on_morphisms[s.id(x)] != t.id(F.on_objects[x])) return fail("identity of " + s.objects[x] + " not preserved");
  for (const auto& [gf, h] : s.composition_table())
    if (F.on_morphisms[h] != t.try_compose(F.on_morphisms[gf.first], F.on_morphisms[gf.second]))
      return fail("composite " + s.mor(h).name + " not preserved");
  for (std::uint32_t b = 0; b < t.num_objects(); ++b) {
    bool hit = false;
    for (std::uint32_t x = 0; x < s.num_objects() && !hit; ++x) hit = t.isomorphic(F.on_objects[x], b);
    if (!hit) return fail("object " + t.objects[b] + " is not in the essential image");
  }
  for (std::uint32_t x = 0; x < s.num_objects(); ++x)
    for (std::uint32_t y = 0; y < s.num_objects(); ++y) {
      std::set<std::uint32_t> image;
      auto src = s.hom(x, y);
      for (auto f : src) image.insert(F.on_morphisms[f]);
      if (image.size() != src.size()) return fail("not faithful on " + s.objects[x] + " -> " + s.objects[y]);
      if (image.size() != t.hom(F.on_objects[x], F.on_objects[y]).size())
        return fail("not full on " + s.objects[x] + " -> " + s.objects[y]);
    }
  return {};
}

/// The identity functor on a category.
inline Functor identity_functor(const Category& c) {
  Functor f{c, c, {}, {}};
  for (std::uint32_t x = 0; x < c.num_objects(); ++x) f.on_objects.push_back(x);
  for (std::uint32_t g = 0; g < c.num_morphisms(); ++g) f.on_morphisms.push_back(g);
  return f;
}

}  // namespace cohere
