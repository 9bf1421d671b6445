#pragma once

// Coherence paths between objects of the free theory on a Laplaza set S:
// rewriting steps, bounded path search, a sound equality test for parallel
// paths, and the strand-tracking semantic model.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cohere/algebra_nf.hpp"
#include "cohere/enumerate.hpp"
#include "cohere/error.hpp"
#include "cohere/finmap.hpp"
#include "cohere/term.hpp"

namespace cohere {

/// An object of the free theory on S. Every generator of the built-in
/// signatures is itself an S-word under each compatible spec, so any term of
/// the signature is an object; check_sobject verifies this for custom ones.
using SObject = Term;

struct Caps {
  std::size_t size = 10;        // nodes of any object visited
  std::size_t depth = 12;       // steps of any path searched
  std::size_t step_size = 0;    // nodes of a step's local words; 0 means only `size` applies
  std::size_t max_nodes = 200000;  // objects a single search may visit
};

/// One generating arrow placed in context: at `position`, the subterm
/// act(before, relabel) is replaced by act(after, relabel). `before` and
/// `after` are local words over relabel.dom_size() variables, numbered by
/// first occurrence in before then after. The inverse arrow swaps them.
struct CoherenceStep {
  Position position;
  Term before;
  Term after;
  FinMap relabel;

  bool operator==(const CoherenceStep&) const = default;
  auto operator<=>(const CoherenceStep&) const = default;
};

struct CoherencePath {
  Term source;
  Term target;
  std::vector<CoherenceStep> steps;

  bool operator==(const CoherencePath&) const = default;
};

using Permutation = FinMap;

// ---------------------------------------------------------------------------
// Steps

/// Renumbers local variables by first occurrence (before, then after) and
/// drops unused ones.
inline CoherenceStep normalize_step(Position pos, const Term& before, const Term& after,
                                    const FinMap& relabel) {
  if (before.ambient_arity() != relabel.dom_size() || after.ambient_arity() != relabel.dom_size())
    throw ArityError("step local words and relabel map disagree on arity");
  std::vector<std::uint32_t> fresh(relabel.dom_size() + 1, 0), order;
  auto visit = [&](const Term& t) {
    for (auto v : t.leaves())
      if (fresh[v] == 0) {
        order.push_back(v);
        fresh[v] = static_cast<std::uint32_t>(order.size());
      }
  };
  visit(before);
  visit(after);
  auto k = static_cast<std::uint32_t>(order.size());
  auto renumber = [&](const Term& t) {
    std::vector<Node> nodes(t.nodes().begin(), t.nodes().end());
    for (auto& n : nodes)
      if (n.is_var()) n.head = -static_cast<std::int32_t>(fresh[n.var()]);
    return Term(k, std::move(nodes));
  };
  std::vector<std::uint32_t> tab;
  for (auto v : order) tab.push_back(relabel(v));
  return CoherenceStep{std::move(pos), renumber(before), renumber(after),
                       FinMap(relabel.cod_size(), std::move(tab))};
}

inline CoherenceStep reverse_step(const CoherenceStep& s) {
  return normalize_step(s.position, s.after, s.before, s.relabel);
}

/// Applies a step to an object, checking that it matches.
inline Term apply_step(const Term& a, const CoherenceStep& s) {
  if (s.relabel.cod_size() != a.ambient_arity())
    throw ArityError("step relabels into " + std::to_string(s.relabel.cod_size()) +
                     " variables, object has " + std::to_string(a.ambient_arity()));
  auto i = a.index_of(s.position);
  if (a.subterm_at(i) != act(s.before, s.relabel)) throw Error("step does not match the object");
  return a.replace_at(i, act(s.after, s.relabel));
}

inline std::vector<Term> path_objects(const CoherencePath& p) {
  std::vector<Term> out{p.source};
  for (const auto& s : p.steps) out.push_back(apply_step(out.back(), s));
  return out;
}

inline CoherencePath reverse_path(const CoherencePath& p) {
  CoherencePath r{p.target, p.source, {}};
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) r.steps.push_back(reverse_step(*it));
  return r;
}

inline CoherencePath concat_paths(const CoherencePath& p, const CoherencePath& q) {
  if (p.target != q.source) throw Error("paths do not chain");
  CoherencePath r = p;
  r.target = q.target;
  r.steps.insert(r.steps.end(), q.steps.begin(), q.steps.end());
  return r;
}

/// The image of a path under variable relabeling (any map, not only
/// bijections): every object and every step is acted on by g.
inline CoherencePath map_path(const CoherencePath& p, const FinMap& g) {
  CoherencePath r{act(p.source, g), act(p.target, g), {}};
  for (const auto& s : p.steps)
    r.steps.push_back(normalize_step(s.position, s.before, s.after, compose(s.relabel, g)));
  return r;
}

// ---------------------------------------------------------------------------
// Strand-tracking model

/// One monomial of the full expansion of a term: the var/one leaves it
/// selects (node indices, increasing) and which of them are variable factors.
struct Expanded {
  std::vector<std::uint32_t> atoms;
  std::vector<std::uint32_t> factors;
};

inline std::vector<Expanded> expand(const Theory& th, const Term& t) {
  if (th.kind == TheoryKind::Free) throw ArityError("the strand model needs cmon or csr");
  std::vector<std::vector<Expanded>> stack;
  stack.reserve(t.size());
  for (std::size_t i = t.size(); i-- > 0;) {
    const auto& n = t.node(i);
    const auto idx = static_cast<std::uint32_t>(i);
    if (n.is_var()) {
      stack.push_back({Expanded{{idx}, {idx}}});
    } else if (n.gen() == th.zero) {
      stack.push_back({});
    } else if (th.kind == TheoryKind::CommutativeSemiring && n.gen() == th.one) {
      stack.push_back({Expanded{{idx}, {}}});
    } else {
      auto a = std::move(stack.back());
      stack.pop_back();
      auto b = std::move(stack.back());
      stack.pop_back();
      if (n.gen() == th.plus) {
        a.insert(a.end(), b.begin(), b.end());
        stack.push_back(std::move(a));
      } else {
        std::vector<Expanded> out;
        out.reserve(a.size() * b.size());
        for (const auto& x : a)
          for (const auto& y : b) {
            Expanded e = x;
            e.atoms.insert(e.atoms.end(), y.atoms.begin(), y.atoms.end());
            e.factors.insert(e.factors.end(), y.factors.begin(), y.factors.end());
            out.push_back(std::move(e));
          }
        stack.push_back(std::move(out));
      }
    }
  }
  return stack.back();
}

/// A bijection between the monomials of two expansions together with, for
/// each source monomial, a bijection between its factors (0-based).
struct StrandMap {
  std::vector<std::uint32_t> mono;
  std::vector<std::vector<std::uint32_t>> factor;

  bool operator==(const StrandMap&) const = default;

  static StrandMap identity(const std::vector<Expanded>& e) {
    StrandMap m;
    for (std::uint32_t i = 0; i < e.size(); ++i) {
      m.mono.push_back(i);
      std::vector<std::uint32_t> f(e[i].factors.size());
      std::iota(f.begin(), f.end(), 0u);
      m.factor.push_back(std::move(f));
    }
    return m;
  }
};

/// this, then next
inline StrandMap then(const StrandMap& a, const StrandMap& b) {
  StrandMap r;
  for (std::size_t i = 0; i < a.mono.size(); ++i) {
    auto j = a.mono[i];
    r.mono.push_back(b.mono[j]);
    std::vector<std::uint32_t> f;
    for (auto x : a.factor[i]) f.push_back(b.factor[j][x]);
    r.factor.push_back(std::move(f));
  }
  return r;
}

inline StrandMap invert(const StrandMap& a) {
  StrandMap r;
  r.mono.resize(a.mono.size());
  r.factor.resize(a.mono.size());
  for (std::uint32_t i = 0; i < a.mono.size(); ++i) {
    auto j = a.mono[i];
    r.mono[j] = i;
    r.factor[j].resize(a.factor[i].size());
    for (std::uint32_t x = 0; x < a.factor[i].size(); ++x) r.factor[j][a.factor[i][x]] = x;
  }
  return r;
}

namespace detail {

/// Matches the monomials of two terms with equal projections by label: a
/// monomial's label is its multiset of variables, the k-th monomial of a
/// label goes to the k-th, and inside it the k-th occurrence of a variable
/// goes to the k-th.
inline StrandMap match_by_labels(const Term& u, const std::vector<Expanded>& eu, const Term& v,
                                 const std::vector<Expanded>& ev) {
  auto label = [](const Term& t, const Expanded& e) {
    std::vector<std::uint32_t> l;
    for (auto f : e.factors) l.push_back(t.node(f).var());
    std::sort(l.begin(), l.end());
    return l;
  };
  std::map<std::vector<std::uint32_t>, std::deque<std::uint32_t>> pool;
  for (std::uint32_t j = 0; j < ev.size(); ++j) pool[label(v, ev[j])].push_back(j);
  StrandMap m;
  for (const auto& mu : eu) {
    auto& q = pool[label(u, mu)];
    if (q.empty()) throw Error("strand matching: projections differ");
    auto j = q.front();
    q.pop_front();
    m.mono.push_back(j);
    std::map<std::uint32_t, std::deque<std::uint32_t>> slots;
    for (std::uint32_t y = 0; y < ev[j].factors.size(); ++y)
      slots[v.node(ev[j].factors[y]).var()].push_back(y);
    std::vector<std::uint32_t> f;
    for (auto x : mu.factors) {
      auto& s = slots[u.node(x).var()];
      f.push_back(s.front());
      s.pop_front();
    }
    m.factor.push_back(std::move(f));
  }
  return m;
}

}  // namespace detail

/// The label-preserving map between two objects with equal projections. When
/// the projection is a sum of distinct square-free monomials it is the only
/// such map.
inline StrandMap label_map(const Theory& th, const Term& a, const Term& b) {
  return detail::match_by_labels(a, expand(th, a), b, expand(th, b));
}

/// Value of a single step: the local words are matched by labels, the
/// context is carried along unchanged.
inline StrandMap step_value(const Theory& th, const Term& a, const std::vector<Expanded>& ea,
                            const CoherenceStep& s) {
  const auto b = apply_step(a, s);
  const auto i0 = static_cast<std::uint32_t>(a.index_of(s.position));
  const auto e0 = static_cast<std::uint32_t>(a.end_of(i0));
  const auto delta = static_cast<std::int64_t>(s.after.size()) - static_cast<std::int64_t>(s.before.size());
  const auto eb = expand(th, b);
  const auto eu = expand(th, s.before), ev = expand(th, s.after);
  const auto local = detail::match_by_labels(s.before, eu, s.after, ev);

  std::map<std::vector<std::uint32_t>, std::uint32_t> by_atoms_b, by_atoms_u;
  for (std::uint32_t j = 0; j < eb.size(); ++j) by_atoms_b[eb[j].atoms] = j;
  for (std::uint32_t j = 0; j < eu.size(); ++j) by_atoms_u[eu[j].atoms] = j;
  auto outer = [&](std::uint32_t x) {
    return x < i0 ? x : static_cast<std::uint32_t>(static_cast<std::int64_t>(x) + delta);
  };

  StrandMap r;
  for (const auto& m : ea) {
    std::vector<std::uint32_t> inner, atoms;
    for (auto x : m.atoms)
      if (x >= i0 && x < e0) inner.push_back(x - i0);
    std::optional<std::uint32_t> mu;
    if (!inner.empty()) mu = by_atoms_u.at(inner);
    for (auto x : m.atoms)
      if (x < i0 || x >= e0) atoms.push_back(outer(x));
    if (mu)
      for (auto x : ev[local.mono[*mu]].atoms) atoms.push_back(x + i0);
    std::sort(atoms.begin(), atoms.end());
    auto j = by_atoms_b.at(atoms);
    r.mono.push_back(j);
    const auto& target = eb[j].factors;
    std::vector<std::uint32_t> f;
    for (auto x : m.factors) {
      std::uint32_t node;
      if (x < i0 || x >= e0) {
        node = outer(x);
      } else {
        const auto& fu = eu[*mu].factors;
        auto k = static_cast<std::uint32_t>(std::find(fu.begin(), fu.end(), x - i0) - fu.begin());
        node = ev[local.mono[*mu]].factors[local.factor[*mu][k]] + i0;
      }
      f.push_back(static_cast<std::uint32_t>(std::find(target.begin(), target.end(), node) - target.begin()));
    }
    r.factor.push_back(std::move(f));
  }
  return r;
}

inline StrandMap step_value(const Theory& th, const Term& a, const CoherenceStep& s) {
  return step_value(th, a, expand(th, a), s);
}

inline StrandMap path_value(const Theory& th, const CoherencePath& p) {
  Term cur = p.source;
  StrandMap v = StrandMap::identity(expand(th, cur));
  for (const auto& s : p.steps) {
    v = then(v, step_value(th, cur, s));
    cur = apply_step(cur, s);
  }
  return v;
}

/// Occurrences of variables in the source, left to right, to occurrences in
/// the target.
inline Permutation perm_model(const Theory& th, const CoherencePath& p) {
  if (th.kind != TheoryKind::CommutativeMonoid) throw ArityError("perm_model needs cmon");
  auto v = path_value(th, p);
  std::vector<std::uint32_t> tab;
  for (auto j : v.mono) tab.push_back(j + 1);
  const auto n = static_cast<std::uint32_t>(tab.size());
  return FinMap(n, std::move(tab));
}

inline StrandMap monomial_model(const Theory& th, const CoherencePath& p) {
  if (th.kind != TheoryKind::CommutativeSemiring) throw ArityError("monomial_model needs csr");
  return path_value(th, p);
}

/// Whether the strand model is a pseudo algebra for (theory, spec), so that
/// differing values prove two paths are not forced equal.
inline bool has_registered_model(const Theory& th, LaplazaSpec spec) {
  return (th.kind == TheoryKind::CommutativeMonoid && spec == LaplazaSpec::Operadic) ||
         (th.kind == TheoryKind::CommutativeSemiring && spec == LaplazaSpec::LaplazaSemiring);
}

// ---------------------------------------------------------------------------
// The engine

enum class Verdict { ForcedEqual, ModelDistinct, Unknown };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::ForcedEqual:
      return "forced-equal";
    case Verdict::ModelDistinct:
      return "model-distinct";
    case Verdict::Unknown:
      break;
  }
  return "unknown";
}

struct Decision {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::optional<StrandMap> p_value, q_value;
};

enum class SearchStatus { Found, Absent, CapExhausted };

struct SearchResult {
  SearchStatus status = SearchStatus::CapExhausted;
  std::optional<CoherencePath> path;
  std::size_t explored = 0;
  std::string reason;
};

class CoherenceEngine {
 public:
  CoherenceEngine(Theory th, LaplazaSpec spec, Caps caps = {})
      : th_(std::move(th)), spec_(spec), caps_(caps), synth_(th_) {
    check_compatible(spec_, th_);
    if (caps_.size < 1 || caps_.depth < 1) throw ArityError("caps must be at least 1");
  }

  const Theory& theory() const { return th_; }
  LaplazaSpec spec() const { return spec_; }
  const Caps& caps() const { return caps_; }

  /// Every generator, read as a word in its own arguments, lies in S.
  void check_sobject(const Term& a) const {
    check_signature(th_.sig, a);
    for (std::uint32_t g = 0; g < th_.sig.size(); ++g) {
      std::vector<Node> nodes{Node{static_cast<std::int32_t>(g), th_.sig.at(g).arity}};
      for (std::uint32_t k = 1; k <= th_.sig.at(g).arity; ++k)
        nodes.push_back(Node{-static_cast<std::int32_t>(k), 0});
      Term w(th_.sig.at(g).arity, std::move(nodes));
      if (!word_member(spec_, project(th_, w)))
        throw Error("generator " + th_.sig.at(g).symbol + " is not in the Laplaza set");
    }
  }

  /// The projection of `a`, with unused variables dropped, lies in S.
  bool in_s(const Term& a) const { return word_member(spec_, project(th_, restrict_to_used(a).first)); }

  void check_step(const CoherenceStep& s) const {
    if (s.before.ambient_arity() != s.relabel.dom_size() || s.after.ambient_arity() != s.relabel.dom_size())
      throw ArityError("step local arity mismatch");
    check_signature(th_.sig, s.before);
    check_signature(th_.sig, s.after);
    auto pu = project(th_, s.before);
    if (pu != project(th_, s.after)) throw Error("step words have different projections");
    if (!word_member(spec_, restricted_projection(s))) throw Error("step words are not in the Laplaza set");
  }

  /// Validates a user-supplied path and computes its target.
  CoherencePath make_path(const Term& source, std::vector<CoherenceStep> steps) const {
    check_sobject(source);
    CoherencePath p{source, source, {}};
    for (auto& s : steps) {
      auto n = normalize_step(s.position, s.before, s.after, s.relabel);
      check_step(n);
      p.target = apply_step(p.target, n);
      p.steps.push_back(std::move(n));
    }
    return p;
  }

  /// Calls cb(step, target) for every step out of `a` within the caps, in a
  /// fixed order: positions in preorder (root first), then local words.
  /// Stops early when cb returns false; returns whether it ran to the end.
  template <class F>
  bool for_each_step(const Term& a, F&& cb) {
    const auto n = a.ambient_arity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto s = a.subterm_at(i);
      const auto pos = a.position_of(i);
      const std::size_t context = a.size() - s.size();
      if (context >= caps_.size) continue;
      std::size_t limit = caps_.size - context;
      if (caps_.step_size) limit = std::min(limit, caps_.step_size);
      if (caps_.step_size && s.size() > caps_.step_size) continue;
      std::vector<std::size_t> occ;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (s.node(j).is_var()) occ.push_back(j);
      std::vector<std::uint32_t> block_of(occ.size()), block_var;
      bool go_on = true;
      // assign occurrences to local variables, only merging equal ambient ones
      std::function<void(std::size_t)> assign = [&](std::size_t k) {
        if (!go_on) return;
        if (k == occ.size()) {
          go_on = emit(a, i, pos, s, occ, block_of, block_var, n, limit, cb);
          return;
        }
        const auto amb = s.node(occ[k]).var();
        for (std::uint32_t b = 0; b < block_var.size() && go_on; ++b)
          if (block_var[b] == amb) {
            block_of[k] = b;
            assign(k + 1);
          }
        if (!go_on) return;
        block_of[k] = static_cast<std::uint32_t>(block_var.size());
        block_var.push_back(amb);
        assign(k + 1);
        block_var.pop_back();
      };
      assign(0);
      if (!go_on) return false;
    }
    return true;
  }

  std::vector<std::pair<CoherenceStep, Term>> rewrite_neighbors(const Term& a) {
    std::vector<std::pair<CoherenceStep, Term>> out;
    for_each_step(a, [&](const CoherenceStep& s, const Term& t) {
      out.emplace_back(s, t);
      return true;
    });
    return out;
  }

  /// Breadth-first search for a path from a to b. Differing projections give
  /// a definite Absent; running out of caps is reported as CapExhausted.
  SearchResult find_path(const Term& a, const Term& b) {
    if (a.ambient_arity() != b.ambient_arity()) throw ArityError("objects have different arities");
    check_sobject(a);
    check_sobject(b);
    SearchResult r;
    if (a == b) {
      r.status = SearchStatus::Found;
      r.path = CoherencePath{a, b, {}};
      return r;
    }
    if (project(th_, a) != project(th_, b)) {
      r.status = SearchStatus::Absent;
      r.reason = "projections differ, and projection is invariant along paths";
      return r;
    }
    auto tree = search(a, &b);
    r.explored = tree.parent.size();
    if (tree.parent.count(b)) {
      r.status = SearchStatus::Found;
      r.path = tree.path_to(a, b);
    } else {
      r.reason = tree.hit_node_cap ? "object cap reached" : "no path within size and depth caps";
    }
    return r;
  }

  /// All objects reachable from `a` within the caps, with a shortest path to
  /// each. Used for sweeps that query many targets from one source.
  struct SearchTree {
    std::unordered_map<Term, std::pair<Term, CoherenceStep>, TermHash> parent;
    bool hit_node_cap = false;

    std::optional<CoherencePath> path_to(const Term& root, const Term& b) const {
      if (b == root) return CoherencePath{root, root, {}};
      if (!parent.count(b)) return std::nullopt;
      std::vector<CoherenceStep> rev;
      Term cur = b;
      while (cur != root) {
        const auto& [prev, step] = parent.at(cur);
        rev.push_back(step);
        cur = prev;
      }
      return CoherencePath{root, b, {rev.rbegin(), rev.rend()}};
    }
  };

  SearchTree search(const Term& a, const Term* goal = nullptr) {
    SearchTree tree;
    std::vector<Term> frontier{a};
    std::unordered_map<Term, bool, TermHash> seen{{a, true}};
    for (std::size_t d = 0; d < caps_.depth && !frontier.empty(); ++d) {
      std::vector<Term> next;
      for (const auto& x : frontier) {
        bool done = !for_each_step(x, [&](const CoherenceStep& s, const Term& t) {
          if (seen.count(t)) return true;
          seen.emplace(t, true);
          tree.parent.emplace(t, std::make_pair(x, s));
          if (goal && t == *goal) return false;
          if (seen.size() >= caps_.max_nodes) {
            tree.hit_node_cap = true;
            return false;
          }
          next.push_back(t);
          return true;
        });
        if (done) return tree;
      }
      frontier = std::move(next);
    }
    return tree;
  }

  /// Sound test of equality of parallel paths: ForcedEqual only when derived
  /// from the defining relations, ModelDistinct only when a registered model
  /// separates them.
  Decision decide_equal(const CoherencePath& p, const CoherencePath& q) {
    if (p.source != q.source || p.target != q.target) throw Error("paths are not parallel");
    Decision d;
    auto why = derive(p.source, p.steps, q.steps, 0);
    std::optional<bool> distinct;
    if (has_registered_model(th_, spec_)) {
      d.p_value = path_value(th_, p);
      d.q_value = path_value(th_, q);
      distinct = *d.p_value != *d.q_value;
    }
    if (why && distinct.value_or(false))
      throw Error("internal soundness violation: derived equal (" + *why +
                  ") but the registered model separates the paths");
    if (why) {
      d.verdict = Verdict::ForcedEqual;
      d.reason = *why;
    } else if (distinct.value_or(false)) {
      d.verdict = Verdict::ModelDistinct;
      d.reason = "the strand model assigns different values";
    } else {
      d.verdict = Verdict::Unknown;
      d.reason = distinct ? "model values agree but no derivation was found within caps"
                          : "no derivation found and no registered model for this Laplaza set";
    }
    return d;
  }

 private:
  Word restricted_projection(const CoherenceStep& s) const {
    return project(th_, restrict_to_used(s.before).first);
  }

  template <class F>
  bool emit(const Term& a, std::size_t i, const Position& pos, const Term& s,
            const std::vector<std::size_t>& occ, const std::vector<std::uint32_t>& block_of,
            const std::vector<std::uint32_t>& block_var, std::uint32_t n, std::size_t limit, F& cb) {
    const auto ku = static_cast<std::uint32_t>(block_var.size());
    std::vector<Node> nodes(s.nodes().begin(), s.nodes().end());
    for (std::size_t k = 0; k < occ.size(); ++k) nodes[occ[k]].head = -static_cast<std::int32_t>(block_of[k] + 1);
    Term u(ku, std::move(nodes));
    auto pu = project(th_, u);
    if (!word_member(spec_, pu)) return true;
    std::vector<std::uint32_t> tab(block_var);
    if (th_.kind == TheoryKind::CommutativeSemiring) {
      // variables killed by a zero may appear on the other side
      std::vector<bool> hit(n + 1, false);
      for (auto v : block_var) hit[v] = true;
      for (std::uint32_t v = 1; v <= n; ++v)
        if (!hit[v]) tab.push_back(v);
    }
    const auto k = static_cast<std::uint32_t>(tab.size());
    FinMap f(n, tab);
    std::vector<std::uint32_t> inc(ku);
    std::iota(inc.begin(), inc.end(), 1u);
    auto pk = word_act(pu, FinMap(k, inc));
    auto uk = u.widen(k);
    for (const auto& v : synth_.terms(pk, limit)) {
      if (v == uk) continue;
      auto step = normalize_step(pos, uk, v, f);
      auto target = a.replace_at(i, act(v, f));
      if (!cb(step, target)) return false;
    }
    return true;
  }

  // Derivations are returned as a short description of the rule that closed
  // the case.
  std::optional<std::string> derive(Term src, std::vector<CoherenceStep> ps,
                                    std::vector<CoherenceStep> qs, std::size_t depth) {
    ps = free_reduce(src, ps);
    qs = free_reduce(src, qs);
    if (ps == qs) return "identical after cancelling inverse pairs";
    if (in_s(src)) return "endpoints project into the Laplaza set";
    // common prefix and suffix
    std::size_t pre = 0;
    while (pre < ps.size() && pre < qs.size() && ps[pre] == qs[pre]) ++pre;
    std::size_t suf = 0;
    while (suf < ps.size() - pre && suf < qs.size() - pre &&
           ps[ps.size() - 1 - suf] == qs[qs.size() - 1 - suf])
      ++suf;
    if (pre || suf) {
      for (std::size_t k = 0; k < pre; ++k) src = apply_step(src, ps[k]);
      std::vector<CoherenceStep> p2(ps.begin() + pre, ps.end() - suf), q2(qs.begin() + pre, qs.end() - suf);
      if (auto w = derive(src, p2, q2, depth)) return "common steps removed; " + *w;
      return std::nullopt;
    }
    if (lift(src, ps, qs)) return "a common generalization of both paths has endpoints in the Laplaza set";
    if (depth >= caps_.depth) return std::nullopt;
    // restrict to a common subterm
    if (!ps.empty() || !qs.empty()) {
      Position common = !ps.empty() ? ps[0].position : qs[0].position;
      auto shrink = [&](const std::vector<CoherenceStep>& xs) {
        for (const auto& s : xs) {
          std::size_t k = 0;
          while (k < common.size() && k < s.position.size() && common[k] == s.position[k]) ++k;
          common.resize(k);
        }
      };
      shrink(ps);
      shrink(qs);
      if (!common.empty()) {
        auto sub = src.subterm(common);
        auto strip = [&](std::vector<CoherenceStep> xs) {
          for (auto& s : xs) s.position.erase(s.position.begin(), s.position.begin() + static_cast<std::ptrdiff_t>(common.size()));
          return xs;
        };
        if (auto w = derive(sub, strip(ps), strip(qs), depth + 1)) return "inside a common context; " + *w;
        return std::nullopt;
      }
    }
    // split at an object both paths visit
    std::vector<Term> op{src}, oq{src};
    for (const auto& s : ps) op.push_back(apply_step(op.back(), s));
    for (const auto& s : qs) oq.push_back(apply_step(oq.back(), s));
    for (std::size_t i = 0; i < op.size(); ++i)
      for (std::size_t j = 0; j < oq.size(); ++j) {
        if ((i == 0 && j == 0) || (i + 1 == op.size() && j + 1 == oq.size())) continue;
        if (op[i] != oq[j]) continue;
        std::vector<CoherenceStep> p1(ps.begin(), ps.begin() + i), q1(qs.begin(), qs.begin() + j);
        std::vector<CoherenceStep> p2(ps.begin() + i, ps.end()), q2(qs.begin() + j, qs.end());
        auto w1 = derive(src, p1, q1, depth + 1);
        if (!w1) continue;
        auto w2 = derive(op[i], p2, q2, depth + 1);
        if (w2) return "split at a shared object; (" + *w1 + ") and (" + *w2 + ")";
      }
    return std::nullopt;
  }

  // Drops identity steps and cancels a step followed by its inverse.
  std::vector<CoherenceStep> free_reduce(const Term&, const std::vector<CoherenceStep>& xs) const {
    std::vector<CoherenceStep> out;
    for (const auto& s : xs) {
      if (s.before == s.after) continue;
      if (!out.empty() && out.back() == reverse_step(s)) {
        out.pop_back();
        continue;
      }
      out.push_back(s);
    }
    return out;
  }

  // Gives every variable occurrence its own label, identifies labels only as
  // the steps and the common target require, and asks whether the resulting
  // most general source projects into S. Both paths are then images of
  // parallel paths out of that source, which are equal.
  bool lift(const Term& src, const std::vector<CoherenceStep>& ps, const std::vector<CoherenceStep>& qs) {
    std::vector<int> uf;
    auto make = [&] {
      uf.push_back(static_cast<int>(uf.size()));
      return static_cast<int>(uf.size() - 1);
    };
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    auto unite = [&](int x, int y) { uf[find(x)] = find(y); };

    std::vector<int> start(src.size(), -1);
    for (std::size_t j = 0; j < src.size(); ++j)
      if (src.node(j).is_var()) start[j] = make();
    auto run = [&](const std::vector<CoherenceStep>& xs) {
      Term obj = src;
      auto lab = start;
      for (const auto& s : xs) {
        auto i0 = obj.index_of(s.position);
        auto e0 = obj.end_of(i0);
        std::vector<int> rep(s.relabel.dom_size() + 1, -1);
        for (std::size_t j = 0; j < s.before.size(); ++j)
          if (s.before.node(j).is_var()) {
            auto y = s.before.node(j).var();
            if (rep[y] < 0)
              rep[y] = lab[i0 + j];
            else
              unite(rep[y], lab[i0 + j]);
          }
        std::vector<int> out(lab.begin(), lab.begin() + static_cast<std::ptrdiff_t>(i0));
        for (std::size_t j = 0; j < s.after.size(); ++j) {
          if (!s.after.node(j).is_var()) {
            out.push_back(-1);
            continue;
          }
          auto y = s.after.node(j).var();
          if (rep[y] < 0) rep[y] = make();
          out.push_back(rep[y]);
        }
        out.insert(out.end(), lab.begin() + static_cast<std::ptrdiff_t>(e0), lab.end());
        lab = std::move(out);
        obj = apply_step(obj, s);
      }
      return lab;
    };
    auto lp = run(ps), lq = run(qs);
    for (std::size_t j = 0; j < lp.size(); ++j)
      if (lp[j] >= 0) unite(lp[j], lq[j]);
    std::map<int, std::uint32_t> cls;
    std::vector<Node> nodes(src.nodes().begin(), src.nodes().end());
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (start[j] >= 0) {
        auto c = find(start[j]);
        auto it = cls.emplace(c, static_cast<std::uint32_t>(cls.size() + 1)).first;
        nodes[j].head = -static_cast<std::int32_t>(it->second);
      }
    Term lifted(static_cast<std::uint32_t>(cls.size()), std::move(nodes));
    return word_member(spec_, project(th_, lifted));
  }

  Theory th_;
  LaplazaSpec spec_;
  Caps caps_;
  ProjectionSynth synth_;
};

// ---------------------------------------------------------------------------

/// The symmetry on a + a compared with the identity, under the full and the
/// operadic Laplaza sets of commutative monoids.
struct GouldReport {
  CoherencePath swap;       // tau on x1 + x2, relabelled by [1,1]
  CoherencePath identity;   // the empty path at x1 + x1
  Decision full;            // decision under the full Laplaza set
  Permutation model_value;  // strand model value of the swap
  bool model_is_transposition = false;
  Decision operadic;        // decision under the operadic set
  bool operadic_in_scope = false;  // whether x1 + x1 is in the operadic S
  bool discrepancy = false;        // forced under Full while the model differs
};

inline GouldReport gould_certificate() {
  const auto th = Theory::cmon();
  GouldReport r;
  auto x1x2 = parse_term(th.sig, "(plus x1 x2)");
  auto x2x1 = parse_term(th.sig, "(plus x2 x1)");
  auto aa = parse_term(th.sig, "(plus x1 x1)");
  CoherenceEngine full(th, LaplazaSpec::Full), op(th, LaplazaSpec::Operadic);
  r.swap = full.make_path(aa, {CoherenceStep{{}, x1x2, x2x1, FinMap(1, {1, 1})}});
  r.identity = CoherencePath{aa, aa, {}};
  r.full = full.decide_equal(r.swap, r.identity);
  r.model_value = perm_model(th, r.swap);
  r.model_is_transposition = r.model_value == FinMap(2, {2, 1});
  r.operadic = op.decide_equal(op.make_path(aa, r.swap.steps), r.identity);
  r.operadic_in_scope = op.in_s(aa);
  r.discrepancy = r.full.verdict == Verdict::ForcedEqual &&
                  r.model_value != FinMap::identity(static_cast<std::uint32_t>(r.model_value.dom_size()));
  return r;
}

}  // namespace cohere
