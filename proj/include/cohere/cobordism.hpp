#pragma once

// A combinatorial worldsheet model: labeled boundary circles grouped into
// connected components with a genus. Disjoint union tags labels, so the
// structure isomorphisms of + are genuine relabelings.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cohere/coherence.hpp"
#include "cohere/enumerate.hpp"
#include "cohere/error.hpp"
#include "cohere/two_theory.hpp"

namespace cohere {

/// Unknown, duplicated or non-bijectively mapped boundary labels.
class LabelError : public Error {
 public:
  using Error::Error;
};

struct Component {
  std::vector<std::string> in;
  std::vector<std::string> out;
  std::uint32_t genus = 0;

  bool operator==(const Component&) const = default;
  auto operator<=>(const Component&) const = default;
};

/// Stored canonically: labels and components sorted, so equality is
/// equality of the underlying combinatorial surface.
class Cobordism {
 public:
  Cobordism() = default;

  static Cobordism make(std::vector<std::string> inbound, std::vector<std::string> outbound,
                        std::vector<Component> components) {
    Cobordism x;
    std::sort(inbound.begin(), inbound.end());
    std::sort(outbound.begin(), outbound.end());
    auto dup = [](const std::vector<std::string>& v) { return std::adjacent_find(v.begin(), v.end()) != v.end(); };
    if (dup(inbound) || dup(outbound)) throw LabelError("repeated boundary label");
    std::vector<std::string> seen_in, seen_out;
    for (auto& c : components) {
      std::sort(c.in.begin(), c.in.end());
      std::sort(c.out.begin(), c.out.end());
      seen_in.insert(seen_in.end(), c.in.begin(), c.in.end());
      seen_out.insert(seen_out.end(), c.out.begin(), c.out.end());
    }
    std::sort(seen_in.begin(), seen_in.end());
    std::sort(seen_out.begin(), seen_out.end());
    if (seen_in != inbound) throw LabelError("components do not partition the inbound labels");
    if (seen_out != outbound) throw LabelError("components do not partition the outbound labels");
    std::sort(components.begin(), components.end());
    x.in_ = std::move(inbound);
    x.out_ = std::move(outbound);
    x.comps_ = std::move(components);
    return x;
  }

  const std::vector<std::string>& inbound() const { return in_; }
  const std::vector<std::string>& outbound() const { return out_; }
  const std::vector<Component>& components() const { return comps_; }

  std::uint32_t total_genus() const {
    std::uint32_t g = 0;
    for (const auto& c : comps_) g += c.genus;
    return g;
  }

  bool operator==(const Cobordism&) const = default;

 private:
  std::vector<std::string> in_, out_;
  std::vector<Component> comps_;
};

/// Applies label maps to inbound and outbound labels; each must be defined
/// on every label and injective.
inline Cobordism relabel(const Cobordism& x, const std::function<std::string(const std::string&)>& f,
                         const std::function<std::string(const std::string&)>& g) {
  std::vector<Component> cs;
  std::vector<std::string> in, out;
  for (const auto& c : x.components()) {
    Component d{{}, {}, c.genus};
    for (const auto& l : c.in) d.in.push_back(f(l));
    for (const auto& l : c.out) d.out.push_back(g(l));
    in.insert(in.end(), d.in.begin(), d.in.end());
    out.insert(out.end(), d.out.begin(), d.out.end());
    cs.push_back(std::move(d));
  }
  try {
    return Cobordism::make(std::move(in), std::move(out), std::move(cs));
  } catch (const LabelError&) {
    throw LabelError("relabel is not injective");
  }
}

/// Relabels along explicit tables, which must be bijections on the labels.
inline Cobordism relabel(const Cobordism& x, const std::map<std::string, std::string>& f,
                         const std::map<std::string, std::string>& g) {
  auto total = [](const std::map<std::string, std::string>& m, const std::vector<std::string>& labels) {
    if (m.size() != labels.size()) throw LabelError("relabel table does not match the label set");
    for (const auto& l : labels)
      if (!m.contains(l)) throw LabelError("label " + l + " not found in relabel table");
  };
  total(f, x.inbound());
  total(g, x.outbound());
  return relabel(x, [&](const std::string& l) { return f.at(l); }, [&](const std::string& l) { return g.at(l); });
}

inline Cobordism empty_cobordism() { return {}; }

inline std::string tag(std::string_view side, const std::string& label) { return std::string(side) + "." + label; }

/// X + Y, with X's labels tagged "L." and Y's "R.".
inline Cobordism disjoint_union(const Cobordism& x, const Cobordism& y) {
  auto l = relabel(x, [](const std::string& s) { return tag("L", s); }, [](const std::string& s) { return tag("L", s); });
  auto r = relabel(y, [](const std::string& s) { return tag("R", s); }, [](const std::string& s) { return tag("R", s); });
  auto in = l.inbound(), out = l.outbound();
  in.insert(in.end(), r.inbound().begin(), r.inbound().end());
  out.insert(out.end(), r.outbound().begin(), r.outbound().end());
  auto cs = l.components();
  cs.insert(cs.end(), r.components().begin(), r.components().end());
  return Cobordism::make(std::move(in), std::move(out), std::move(cs));
}

/// Glues, for each label in `glue`, its inbound circle to its outbound
/// circle. Joining two components adds their genera; closing a loop inside
/// one component adds a handle.
inline Cobordism self_glue(const Cobordism& x, const std::vector<std::string>& glue) {
  const auto& cs = x.components();
  std::map<std::string, std::uint32_t> in_comp, out_comp;
  for (std::uint32_t i = 0; i < cs.size(); ++i) {
    for (const auto& l : cs[i].in) in_comp[l] = i;
    for (const auto& l : cs[i].out) out_comp[l] = i;
  }
  std::set<std::string> cut(glue.begin(), glue.end());
  if (cut.size() != glue.size()) throw LabelError("label glued twice");
  std::vector<std::uint32_t> parent(cs.size()), genus(cs.size());
  std::iota(parent.begin(), parent.end(), 0u);
  for (std::uint32_t i = 0; i < cs.size(); ++i) genus[i] = cs[i].genus;
  auto find = [&](std::uint32_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& c : glue) {
    auto a = in_comp.find(c), b = out_comp.find(c);
    if (a == in_comp.end() || b == out_comp.end()) throw LabelError("label " + c + " not found on both sides");
    auto ra = find(a->second), rb = find(b->second);
    if (ra == rb) {
      ++genus[ra];
    } else {
      auto [keep, drop] = std::minmax(ra, rb);
      parent[drop] = keep;
      genus[keep] += genus[drop];
    }
  }
  std::map<std::uint32_t, Component> merged;
  for (std::uint32_t i = 0; i < cs.size(); ++i) {
    auto& m = merged[find(i)];
    m.genus = genus[find(i)];
    for (const auto& l : cs[i].in)
      if (!cut.contains(l)) m.in.push_back(l);
    for (const auto& l : cs[i].out)
      if (!cut.contains(l)) m.out.push_back(l);
  }
  std::vector<std::string> in, out;
  for (const auto& l : x.inbound())
    if (!cut.contains(l)) in.push_back(l);
  for (const auto& l : x.outbound())
    if (!cut.contains(l)) out.push_back(l);
  std::vector<Component> comps;
  for (auto& [r, c] : merged) comps.push_back(std::move(c));
  return Cobordism::make(std::move(in), std::move(out), std::move(comps));
}

// Evaluating 2-terms

/// Finite label sets for the variables x1..xm of the index words.
struct LabelInterp {
  std::vector<std::vector<std::string>> sets;
};

/// Boundary labels of a word: one block per occurrence of a variable,
/// named x<j>.<occurrence>.<element>.
inline std::vector<std::string> word_labels(const MonoidNF& w, const LabelInterp& I) {
  std::vector<std::string> out;
  std::map<std::uint32_t, std::uint32_t> seen;
  for (auto v : w.vars) {
    if (v > I.sets.size()) throw LabelError("no label set for x" + std::to_string(v));
    auto k = ++seen[v];
    for (const auto& e : I.sets[v - 1]) out.push_back("x" + std::to_string(v) + "." + std::to_string(k) + "." + e);
  }
  return out;
}

namespace detail {

inline std::string occ_label(std::uint32_t v, std::size_t k, const std::string& e) {
  return "x" + std::to_string(v) + "." + std::to_string(k) + "." + e;
}

// For the right summand of a + b: its labels move past the occurrences
// contributed by the left summand.
inline std::map<std::string, std::string> merge_labels(const MonoidNF& a, const MonoidNF& b, const LabelInterp& I) {
  std::map<std::string, std::string> m;
  std::map<std::uint32_t, std::uint32_t> seen;
  for (auto v : a.vars) {
    auto k = ++seen[v];
    for (const auto& e : I.sets[v - 1]) m[tag("L", occ_label(v, k, e))] = occ_label(v, k, e);
  }
  std::map<std::uint32_t, std::uint32_t> seen_b;
  for (auto v : b.vars) {
    auto k = ++seen_b[v];
    for (const auto& e : I.sets[v - 1]) m[tag("R", occ_label(v, k, e))] = occ_label(v, k + a.count(v), e);
  }
  return m;
}

}  // namespace detail

/// Evaluates a 2-term on cobordisms: slot i receives inputs.at(i), whose
/// boundary must be the labels of the slot's index word. + is disjoint
/// union followed by the canonical relabeling onto the summed word; a
/// cancellation glues the last occurrences of each cancelled variable.
inline Cobordism eval_two_term(const TwoTerm& t, const LabelInterp& I, const std::map<std::uint32_t, Cobordism>& inputs) {
  typecheck(t);
  auto rec = [&](auto&& self, const TwoTerm& u) -> std::pair<Cobordism, IndexWord> {
    switch (u.kind) {
      case TwoKind::Zero:
        return {empty_cobordism(), IndexWord::zero(u.arity)};
      case TwoKind::Slot: {
        auto it = inputs.find(u.slot);
        if (it == inputs.end()) throw LabelError("no input for slot " + std::to_string(u.slot));
        auto in = word_labels(u.type.in, I), out = word_labels(u.type.out, I);
        std::sort(in.begin(), in.end());
        std::sort(out.begin(), out.end());
        if (it->second.inbound() != in || it->second.outbound() != out)
          throw LabelError("input for slot " + std::to_string(u.slot) + " does not match " + to_string(u.type));
        return {it->second, u.type};
      }
      case TwoKind::Plus: {
        auto [x, wx] = self(self, u.kids[0]);
        auto [y, wy] = self(self, u.kids[1]);
        auto sum = disjoint_union(x, y);
        return {relabel(sum, detail::merge_labels(wx.in, wy.in, I), detail::merge_labels(wx.out, wy.out, I)), wx + wy};
      }
      case TwoKind::Check: {
        auto [x, w] = self(self, u.kids[0]);
        const auto& c = u.cancel;
        std::map<std::string, std::string> f, g;
        for (const auto& l : x.inbound()) f[l] = l;
        for (const auto& l : x.outbound()) g[l] = l;
        std::vector<std::string> glue;
        std::map<std::uint32_t, std::uint32_t> seen;
        for (auto v : c.vars) {
          auto r = ++seen[v];
          auto kin = w.in.count(v) - c.count(v) + r, kout = w.out.count(v) - c.count(v) + r;
          for (const auto& e : I.sets[v - 1]) {
            auto name = "glue." + detail::occ_label(v, r, e);
            f[detail::occ_label(v, kin, e)] = name;
            g[detail::occ_label(v, kout, e)] = name;
            glue.push_back(name);
          }
        }
        auto glued = self_glue(relabel(x, f, g), glue);
        return {glued, IndexWord{monoid_sub(w.in, c), monoid_sub(w.out, c)}};
      }
    }
    throw TypingError("unknown constructor");
  };
  return rec(rec, t).first;
}

// Random cobordisms and the axiom diagrams

using CobRng = std::mt19937_64;

/// Random cobordism with the given boundary: every label lands in one of up
/// to `max_components` components (plus possibly a closed one), genera up
/// to `max_genus`.
inline Cobordism random_cobordism(CobRng& rng, const std::vector<std::string>& inbound,
                                  const std::vector<std::string>& outbound, std::uint32_t max_components = 3,
                                  std::uint32_t max_genus = 2) {
  auto pick = [&](std::uint32_t lo, std::uint32_t hi) { return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng); };
  auto k = pick(1, std::max(1u, max_components));
  std::vector<Component> cs(k);
  for (const auto& l : inbound) cs[pick(0, k - 1)].in.push_back(l);
  for (const auto& l : outbound) cs[pick(0, k - 1)].out.push_back(l);
  for (auto& c : cs) c.genus = pick(0, max_genus);
  // drop empty components except for at most one closed surface
  std::vector<Component> keep;
  bool closed = false;
  for (auto& c : cs) {
    if (c.in.empty() && c.out.empty()) {
      if (closed || pick(0, 1) == 0) continue;
      closed = true;
    }
    keep.push_back(std::move(c));
  }
  return Cobordism::make(inbound, outbound, std::move(keep));
}

inline std::vector<std::string> label_names(const std::string& prefix, std::uint32_t n) {
  std::vector<std::string> out;
  for (std::uint32_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

namespace detail {

inline std::function<std::string(const std::string&)> retag(
    std::vector<std::pair<std::string, std::string>> rules) {
  return [rules = std::move(rules)](const std::string& l) {
    for (const auto& [from, to] : rules)
      if (l.starts_with(from)) return to + l.substr(from.size());
    throw LabelError("label " + l + " matches no relabeling rule");
  };
}

inline Cobordism both(const Cobordism& x, const std::function<std::string(const std::string&)>& f) {
  return relabel(x, f, f);
}

}  // namespace detail

// The six diagrams, each an exact equality after the canonical relabeling.

inline bool axiom_commutative(const Cobordism& x, const Cobordism& y) {
  return detail::both(disjoint_union(x, y), detail::retag({{"L.", "R."}, {"R.", "L."}})) == disjoint_union(y, x);
}

inline bool axiom_associative(const Cobordism& x, const Cobordism& y, const Cobordism& z) {
  auto left = disjoint_union(disjoint_union(x, y), z);
  auto right = disjoint_union(x, disjoint_union(y, z));
  return detail::both(left, detail::retag({{"L.L.", "L."}, {"L.R.", "R.L."}, {"R.", "R.R."}})) == right;
}

inline bool axiom_unit(const Cobordism& x) {
  return detail::both(disjoint_union(x, empty_cobordism()), detail::retag({{"L.", ""}})) == x;
}

/// x carries the labels of c and d on both sides.
inline bool axiom_transitive(const Cobordism& x, const std::vector<std::string>& c, const std::vector<std::string>& d) {
  auto cd = c;
  cd.insert(cd.end(), d.begin(), d.end());
  auto once = self_glue(x, cd);
  return self_glue(self_glue(x, d), c) == once && self_glue(self_glue(x, c), d) == once;
}

/// x carries the labels of c on both sides.
inline bool axiom_distributive(const Cobordism& x, const std::vector<std::string>& c, const Cobordism& y) {
  std::vector<std::string> lc;
  for (const auto& l : c) lc.push_back(tag("L", l));
  return self_glue(disjoint_union(x, y), lc) == disjoint_union(self_glue(x, c), y);
}

inline bool axiom_trivial(const Cobordism& x) { return self_glue(x, {}) == x; }

struct CmcReport {
  std::size_t samples = 0;
  std::array<std::size_t, 6> passed{};

  bool ok() const {
    return std::all_of(passed.begin(), passed.end(), [&](auto p) { return p == samples; });
  }
};

/// Checks the six diagrams on `samples` random cobordisms per diagram.
inline CmcReport check_cmc_axioms(std::uint64_t seed, std::size_t samples) {
  CobRng rng(seed);
  auto n = [&](std::uint32_t hi) { return std::uniform_int_distribution<std::uint32_t>(0, hi)(rng); };
  CmcReport r;
  r.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    auto rand = [&](const std::string& p) {
      return random_cobordism(rng, label_names(p + "i", n(3)), label_names(p + "o", n(3)), 3, 2);
    };
    auto x = rand("a"), y = rand("b"), z = rand("c");
    auto c = label_names("c", n(3)), d = label_names("d", n(3));
    auto in = label_names("a", n(2)), out = label_names("b", n(2));
    auto both_sides = [&](std::vector<std::string> side, const std::vector<std::string>& extra) {
      side.insert(side.end(), extra.begin(), extra.end());
      return side;
    };
    auto cd = both_sides(c, d);
    auto xg = random_cobordism(rng, both_sides(in, cd), both_sides(out, cd), 3, 2);
    auto xc = random_cobordism(rng, both_sides(in, c), both_sides(out, c), 3, 2);
    r.passed[0] += axiom_commutative(x, y);
    r.passed[1] += axiom_associative(x, y, z);
    r.passed[2] += axiom_unit(x);
    r.passed[3] += axiom_transitive(xg, c, d);
    r.passed[4] += axiom_distributive(xc, c, y);
    r.passed[5] += axiom_trivial(x);
  }
  return r;
}

// Coherence paths acting on worldsheets

/// Evaluates a commutative monoid term with xs[j] substituted for x_{j+1}.
inline Cobordism eval_cmon(const Theory& th, const Term& u, const std::vector<Cobordism>& xs) {
  auto rec = [&](auto&& self, std::size_t i) -> Cobordism {
    const auto& n = u.node(i);
    if (n.is_var()) return xs.at(n.var() - 1);
    if (n.gen() == th.zero) return empty_cobordism();
    auto kids = u.children(i);
    return disjoint_union(self(self, kids[0]), self(self, kids[1]));
  };
  return rec(rec, 0);
}

/// The label prefix each variable leaf receives in eval_cmon, left to right.
inline std::vector<std::string> leaf_tags(const Theory& th, const Term& u) {
  std::vector<std::string> out;
  auto rec = [&](auto&& self, std::size_t i, const std::string& prefix) -> void {
    const auto& n = u.node(i);
    if (n.is_var()) {
      out.push_back(prefix);
      return;
    }
    if (n.gen() == th.zero) return;
    auto kids = u.children(i);
    self(self, kids[0], prefix + "L.");
    self(self, kids[1], prefix + "R.");
  };
  rec(rec, 0, "");
  return out;
}

/// Moves the labels of eval_cmon(source) along the permutation of the path.
inline Cobordism transport(const Theory& th, const CoherencePath& p, const Cobordism& x) {
  auto from = leaf_tags(th, p.source), to = leaf_tags(th, p.target);
  auto sigma = perm_model(th, p);
  std::vector<std::pair<std::string, std::string>> rules;
  for (std::uint32_t i = 0; i < from.size(); ++i) rules.emplace_back(from[i], to[sigma(i + 1) - 1]);
  std::stable_sort(rules.begin(), rules.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  return detail::both(x, detail::retag(std::move(rules)));
}

struct OperadicCoherenceReport {
  std::size_t pairs = 0;
  std::size_t paths = 0;
  std::size_t agreeing = 0;

  bool ok() const { return agreeing == paths; }
};

/// For linear commutative monoid words in n variables up to the size cap,
/// finds several parallel coherence paths between sampled pairs and checks
/// that every one of them transports the evaluated worldsheet onto the
/// evaluation at the target, all by the same relabeling.
inline OperadicCoherenceReport check_operadic_coherence(std::uint32_t n, Caps caps, std::uint64_t seed,
                                                        std::size_t pairs = 40) {
  const auto th = Theory::cmon();
  CoherenceEngine eng(th, LaplazaSpec::Operadic, caps);
  std::vector<Term> objects;
  for (const auto& layer : enumerate_terms(th.sig, n, caps.size))
    for (const auto& t : layer)
      if (eng.in_s(t)) objects.push_back(t);
  // objects with the same variables, the only candidates for a path
  std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    std::vector<std::uint32_t> vars;
    for (std::size_t j = 0; j < objects[i].size(); ++j)
      if (objects[i].node(j).is_var()) vars.push_back(objects[i].node(j).var());
    std::sort(vars.begin(), vars.end());
    classes[vars].push_back(i);
  }
  std::vector<std::vector<std::size_t>> pool;
  for (auto& [vars, members] : classes)
    if (members.size() > 1) pool.push_back(std::move(members));
  OperadicCoherenceReport r;
  if (pool.empty()) return r;
  CobRng rng(seed);
  auto pick = [&](std::size_t hi) { return std::uniform_int_distribution<std::size_t>(0, hi)(rng); };
  std::vector<Cobordism> xs;
  for (std::uint32_t j = 1; j <= n; ++j)
    xs.push_back(random_cobordism(rng, label_names("i" + std::to_string(j) + "_", 2),
                                  label_names("o" + std::to_string(j) + "_", 1), 2, 1));
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto& cls = pool[pick(pool.size() - 1)];
    const auto& u = objects[cls[pick(cls.size() - 1)]];
    const auto& v = objects[cls[pick(cls.size() - 1)]];
    const auto& w = objects[cls[pick(cls.size() - 1)]];
    auto direct = eng.find_path(u, v);
    auto first = eng.find_path(u, w), second = eng.find_path(w, v);
    if (!direct.path || !first.path || !second.path) continue;
    ++r.pairs;
    auto source = eval_cmon(th, u, xs), target = eval_cmon(th, v, xs);
    std::optional<Cobordism> seen;
    for (const auto& p : {*direct.path, concat_paths(*first.path, *second.path)}) {
      ++r.paths;
      auto moved = transport(th, p, source);
      if (moved == target && (!seen || *seen == moved)) ++r.agreeing;
      seen = moved;
    }
  }
  return r;
}

}  // namespace cohere
