#pragma once

// The 2-operad of commutative monoids with cancellation: terms built from
// +, cancellation and 0 over slots typed by pairs of monoid words, their
// normal form, and a rewriting oracle over the defining axioms.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cohere/algebra_nf.hpp"
#include "cohere/error.hpp"
#include "cohere/finmap.hpp"

namespace cohere {

/// An (inbound, outbound) pair of monoid words over a shared arity.
struct IndexWord {
  MonoidNF in;
  MonoidNF out;

  static IndexWord of(MonoidNF in, MonoidNF out) {
    if (in.arity != out.arity) throw ArityError("index word components differ in arity");
    return IndexWord{std::move(in), std::move(out)};
  }
  static IndexWord zero(std::uint32_t arity) { return IndexWord{MonoidNF{arity, {}}, MonoidNF{arity, {}}}; }
  std::uint32_t arity() const { return in.arity; }

  bool operator==(const IndexWord&) const = default;
  auto operator<=>(const IndexWord&) const = default;
};

inline IndexWord operator+(const IndexWord& a, const IndexWord& b) {
  return IndexWord{monoid_add(a.in, b.in), monoid_add(a.out, b.out)};
}

inline std::string to_string(const IndexWord& w) { return to_string(w.in) + " | " + to_string(w.out); }

enum class TwoKind { Plus, Check, Zero, Slot };

struct TwoTerm {
  TwoKind kind = TwoKind::Zero;
  std::uint32_t arity = 0;
  std::uint32_t slot = 0;  // Slot
  IndexWord type;          // Slot
  MonoidNF cancel;         // Check
  std::vector<TwoTerm> kids;

  static TwoTerm zero(std::uint32_t arity) {
    TwoTerm t;
    t.arity = arity;
    t.type = IndexWord::zero(arity);
    t.cancel = MonoidNF{arity, {}};
    return t;
  }
  static TwoTerm slot_of(std::uint32_t i, IndexWord w) {
    TwoTerm t = zero(w.arity());
    t.kind = TwoKind::Slot;
    t.slot = i;
    t.type = std::move(w);
    return t;
  }
  static TwoTerm plus(TwoTerm a, TwoTerm b) {
    if (a.arity != b.arity) throw ArityError("plus across arities");
    TwoTerm t = zero(a.arity);
    t.kind = TwoKind::Plus;
    t.kids = {std::move(a), std::move(b)};
    return t;
  }
  static TwoTerm check(TwoTerm s, MonoidNF c) {
    if (s.arity != c.arity) throw ArityError("cancellation word of the wrong arity");
    TwoTerm t = zero(s.arity);
    t.kind = TwoKind::Check;
    t.cancel = std::move(c);
    t.kids = {std::move(s)};
    return t;
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& k : kids) n += k.size();
    return n;
  }

  bool operator==(const TwoTerm&) const = default;
  auto operator<=>(const TwoTerm& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = arity <=> o.arity; c != 0) return c;
    if (auto c = slot <=> o.slot; c != 0) return c;
    if (auto c = type <=> o.type; c != 0) return c;
    if (auto c = cancel <=> o.cancel; c != 0) return c;
    return std::lexicographical_compare_three_way(kids.begin(), kids.end(), o.kids.begin(), o.kids.end());
  }
};

inline std::string to_string(const TwoTerm& t) {
  switch (t.kind) {
    case TwoKind::Zero:
      return "zero";
    case TwoKind::Slot:
      return "(slot " + std::to_string(t.slot) + " [" + to_string(t.type) + "])";
    case TwoKind::Check:
      return "(check " + to_string(t.kids[0]) + " [" + to_string(t.cancel) + "])";
    case TwoKind::Plus:
      return "(plus " + to_string(t.kids[0]) + " " + to_string(t.kids[1]) + ")";
  }
  return {};
}

namespace detail {

class TwoReader {
 public:
  explicit TwoReader(std::string_view s) : s_(s) {}

  TwoTerm term() {
    skip();
    if (eat("zero")) return TwoTerm::zero(0);
    expect('(');
    TwoTerm t;
    if (eat("plus")) {
      auto a = term();
      auto b = term();
      t = TwoTerm::plus(std::move(a), std::move(b));
    } else if (eat("check")) {
      auto a = term();
      expect('[');
      auto c = word(']');
      expect(']');
      t = TwoTerm::zero(0);
      t.kind = TwoKind::Check;
      t.cancel = c;
      t.kids = {std::move(a)};
    } else if (eat("slot")) {
      skip();
      auto i = number();
      if (i == 0) throw error("slot indices start at 1");
      expect('[');
      auto a = word('|');
      expect('|');
      auto b = word(']');
      expect(']');
      t = TwoTerm::zero(0);
      t.kind = TwoKind::Slot;
      t.slot = i;
      t.type = IndexWord{a, b};
    } else {
      throw error("expected plus, check, slot or zero");
    }
    expect(')');
    return t;
  }

  void finish() {
    skip();
    if (i_ != s_.size()) throw error("trailing input");
  }

  std::uint32_t max_var() const { return max_var_; }

 private:
  ParseError error(const std::string& what) const {
    return ParseError("2-term: " + what + " at offset " + std::to_string(i_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(std::string_view w) {
    skip();
    if (s_.substr(i_, w.size()) != w) return false;
    auto j = i_ + w.size();
    if (j < s_.size() && std::isalnum(static_cast<unsigned char>(s_[j]))) return false;
    i_ = j;
    return true;
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) throw error(std::string("expected '") + c + "'");
    ++i_;
  }
  std::uint32_t number() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (b == i_) throw error("expected a number");
    return static_cast<std::uint32_t>(std::stoul(std::string(s_.substr(b, i_ - b))));
  }
  // "0" or "x1 + x2 + ..."; arity fixed later
  MonoidNF word(char end) {
    std::vector<std::uint32_t> vars;
    skip();
    if (i_ < s_.size() && s_[i_] == '0') {
      ++i_;
      return MonoidNF{0, {}};
    }
    for (;;) {
      skip();
      if (i_ >= s_.size() || s_[i_] != 'x') throw error("expected a variable");
      ++i_;
      auto v = number();
      if (v == 0) throw error("variables start at x1");
      max_var_ = std::max(max_var_, v);
      vars.push_back(v);
      skip();
      if (i_ < s_.size() && s_[i_] == '+') {
        ++i_;
        continue;
      }
      if (i_ < s_.size() && s_[i_] == end) break;
      throw error("expected '+'");
    }
    std::sort(vars.begin(), vars.end());
    return MonoidNF{0, std::move(vars)};
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::uint32_t max_var_ = 0;
};

inline void set_arity(TwoTerm& t, std::uint32_t m) {
  t.arity = m;
  t.type.in.arity = t.type.out.arity = m;
  t.cancel.arity = m;
  for (auto& k : t.kids) set_arity(k, m);
}

}  // namespace detail

/// Parses the text form. The ambient arity defaults to the largest
/// variable index mentioned.
inline TwoTerm parse_two_term(std::string_view text, std::optional<std::uint32_t> arity = std::nullopt) {
  detail::TwoReader r(text);
  auto t = r.term();
  r.finish();
  auto m = arity.value_or(r.max_var());
  if (m < r.max_var()) throw ArityError("2-term mentions x" + std::to_string(r.max_var()) + " beyond arity " + std::to_string(m));
  detail::set_arity(t, m);
  return t;
}

struct TwoTyping {
  std::map<std::uint32_t, IndexWord> sources;  // by slot index
  IndexWord target;

  bool operator==(const TwoTyping&) const = default;
};

namespace detail {

inline IndexWord type_rec(const TwoTerm& t, const std::string& path, std::map<std::uint32_t, IndexWord>& sources) {
  auto fail = [&](const std::string& what) { return TypingError(what + " at node " + (path.empty() ? "root" : path)); };
  for (const auto& k : t.kids)
    if (k.arity != t.arity) throw fail("arity mismatch");
  switch (t.kind) {
    case TwoKind::Zero:
      if (!t.kids.empty()) throw fail("zero has no children");
      return IndexWord::zero(t.arity);
    case TwoKind::Slot: {
      if (!t.kids.empty()) throw fail("slot has no children");
      if (t.slot == 0) throw fail("slot index 0");
      if (t.type.in.arity != t.arity || t.type.out.arity != t.arity) throw fail("slot type of the wrong arity");
      if (!sources.emplace(t.slot, t.type).second) throw fail("slot " + std::to_string(t.slot) + " used twice");
      return t.type;
    }
    case TwoKind::Check: {
      if (t.kids.size() != 1) throw fail("check takes one child");
      auto s = type_rec(t.kids[0], path + (path.empty() ? "0" : ".0"), sources);
      if (t.cancel.arity != t.arity) throw fail("cancellation word of the wrong arity");
      if (!monoid_contains(s.in, t.cancel) || !monoid_contains(s.out, t.cancel))
        throw fail("cannot cancel " + to_string(t.cancel) + " from " + to_string(s));
      return IndexWord{monoid_sub(s.in, t.cancel), monoid_sub(s.out, t.cancel)};
    }
    case TwoKind::Plus: {
      if (t.kids.size() != 2) throw fail("plus takes two children");
      auto a = type_rec(t.kids[0], path + (path.empty() ? "0" : ".0"), sources);
      auto b = type_rec(t.kids[1], path + (path.empty() ? "1" : ".1"), sources);
      return a + b;
    }
  }
  throw fail("unknown constructor");
}

}  // namespace detail

/// Source slot types and the target index word; throws TypingError with
/// the path of the offending node.
inline TwoTyping typecheck(const TwoTerm& t) {
  TwoTyping r;
  r.target = detail::type_rec(t, "", r.sources);
  return r;
}

inline IndexWord target_of(const TwoTerm& t) { return typecheck(t).target; }

/// Slots in increasing order and the total cancellation word.
struct TwoNF {
  std::uint32_t arity = 0;
  std::vector<std::uint32_t> slots;
  MonoidNF cancel;

  bool operator==(const TwoNF&) const = default;
  auto operator<=>(const TwoNF&) const = default;
};

inline std::string to_string(const TwoNF& nf) {
  std::string s = "{slots:";
  for (auto i : nf.slots) s += " " + std::to_string(i);
  return s + "; cancel: " + to_string(nf.cancel) + "}";
}

inline TwoNF normalize(const TwoTerm& t) {
  typecheck(t);
  TwoNF nf{t.arity, {}, MonoidNF{t.arity, {}}};
  auto rec = [&](auto&& self, const TwoTerm& u) -> void {
    if (u.kind == TwoKind::Slot) nf.slots.push_back(u.slot);
    if (u.kind == TwoKind::Check) nf.cancel = monoid_add(nf.cancel, u.cancel);
    for (const auto& k : u.kids) self(self, k);
  };
  rec(rec, t);
  std::sort(nf.slots.begin(), nf.slots.end());
  return nf;
}

/// The normal form read back as a term: one cancellation (omitted when
/// trivial) of the right-nested sum of the slots in order.
inline TwoTerm replay(const TwoNF& nf, const std::map<std::uint32_t, IndexWord>& sources) {
  if (nf.slots.empty()) {
    auto z = TwoTerm::zero(nf.arity);
    return nf.cancel.vars.empty() ? z : TwoTerm::check(z, nf.cancel);
  }
  auto it = nf.slots.rbegin();
  TwoTerm acc = TwoTerm::slot_of(*it, sources.at(*it));
  for (++it; it != nf.slots.rend(); ++it) acc = TwoTerm::plus(TwoTerm::slot_of(*it, sources.at(*it)), acc);
  return nf.cancel.vars.empty() ? acc : TwoTerm::check(acc, nf.cancel);
}

/// Equality of 2-operations. Terms with different source slots are not
/// comparable; terms with different targets are never equal.
inline bool two_equal(const TwoTerm& s, const TwoTerm& t) {
  auto ts = typecheck(s), tt = typecheck(t);
  if (ts.sources != tt.sources) throw TypingError("two_equal: source slots or their types differ");
  if (ts.target != tt.target) return false;
  return normalize(s) == normalize(t);
}

// Axiom rewriting

namespace detail {

inline std::vector<MonoidNF> sub_multisets(const MonoidNF& w) {
  std::map<std::uint32_t, std::uint32_t> mult;
  for (auto v : w.vars) ++mult[v];
  std::vector<MonoidNF> out{MonoidNF{w.arity, {}}};
  for (auto [v, k] : mult) {
    std::vector<MonoidNF> next;
    for (const auto& p : out)
      for (std::uint32_t j = 0; j <= k; ++j) {
        auto q = p;
        q.vars.insert(q.vars.end(), j, v);
        next.push_back(q);
      }
    out = std::move(next);
  }
  for (auto& p : out) std::sort(p.vars.begin(), p.vars.end());
  return out;
}

/// Rewrites of `u` at its root; each axiom in both directions.
inline void root_rewrites(const TwoTerm& u, std::size_t budget, std::vector<TwoTerm>& out) {
  const auto m = u.arity;
  const auto grow = u.size() + 2 <= budget;  // room for one or two more nodes
  if (u.kind == TwoKind::Plus) {
    const auto &s = u.kids[0], &t = u.kids[1];
    out.push_back(TwoTerm::plus(t, s));  // (1)
    if (s.kind == TwoKind::Plus) out.push_back(TwoTerm::plus(s.kids[0], TwoTerm::plus(s.kids[1], t)));  // (2)
    if (t.kind == TwoKind::Plus) out.push_back(TwoTerm::plus(TwoTerm::plus(s, t.kids[0]), t.kids[1]));
    if (t.kind == TwoKind::Zero) out.push_back(s);  // (3)
    if (s.kind == TwoKind::Zero) out.push_back(t);
    if (s.kind == TwoKind::Check) out.push_back(TwoTerm::check(TwoTerm::plus(s.kids[0], t), s.cancel));  // (5)
    if (t.kind == TwoKind::Check) out.push_back(TwoTerm::check(TwoTerm::plus(s, t.kids[0]), t.cancel));
  }
  if (u.kind == TwoKind::Check) {
    const auto& s = u.kids[0];
    const auto& c = u.cancel;
    if (c.vars.empty()) out.push_back(s);  // (6)
    if (s.kind == TwoKind::Check) out.push_back(TwoTerm::check(s.kids[0], monoid_add(c, s.cancel)));  // (4)
    if (u.size() + 1 <= budget)
      for (const auto& d : sub_multisets(c))  // (4) backwards: cancel d first, then the rest
        out.push_back(TwoTerm::check(TwoTerm::check(s, d), monoid_sub(c, d)));
    if (s.kind == TwoKind::Plus) {  // (5) backwards
      auto p = target_of(s.kids[0]);
      if (monoid_contains(p.in, c) && monoid_contains(p.out, c))
        out.push_back(TwoTerm::plus(TwoTerm::check(s.kids[0], c), s.kids[1]));
      auto q = target_of(s.kids[1]);
      if (monoid_contains(q.in, c) && monoid_contains(q.out, c))
        out.push_back(TwoTerm::plus(s.kids[0], TwoTerm::check(s.kids[1], c)));
    }
  }
  if (grow) {  // (3) backwards, on either side
    out.push_back(TwoTerm::plus(u, TwoTerm::zero(m)));
    out.push_back(TwoTerm::plus(TwoTerm::zero(m), u));
  }
  if (u.size() + 1 <= budget) out.push_back(TwoTerm::check(u, MonoidNF{m, {}}));  // (6) backwards
}

inline void all_rewrites(const TwoTerm& u, std::size_t budget, std::vector<TwoTerm>& out) {
  root_rewrites(u, budget, out);
  for (std::size_t i = 0; i < u.kids.size(); ++i) {
    std::vector<TwoTerm> inner;
    all_rewrites(u.kids[i], budget - (u.size() - u.kids[i].size()), inner);
    for (auto& k : inner) {
      auto v = u;
      v.kids[i] = std::move(k);
      out.push_back(std::move(v));
    }
  }
}

}  // namespace detail

/// Every term one axiom application away (either direction, at any
/// position) with at most `max_nodes` nodes.
inline std::vector<TwoTerm> axiom_neighbors(const TwoTerm& t, std::size_t max_nodes) {
  std::vector<TwoTerm> out;
  detail::all_rewrites(t, max_nodes, out);
  std::erase_if(out, [&](const TwoTerm& u) { return u.size() > max_nodes || u == t; });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Terms reachable from `t` in at most `depth` rewrites.
inline std::set<TwoTerm> rewrite_ball(const TwoTerm& t, std::size_t depth, std::size_t max_nodes) {
  std::set<TwoTerm> seen{t};
  std::vector<TwoTerm> frontier{t};
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<TwoTerm> next;
    for (const auto& u : frontier)
      for (auto& v : axiom_neighbors(u, max_nodes))
        if (seen.insert(v).second) next.push_back(std::move(v));
    frontier = std::move(next);
  }
  return seen;
}

/// Whether s and t meet within `depth` rewrites from each side.
/// Intermediate terms may exceed the larger endpoint by two nodes.
inline bool axiom_rewrite_oracle(const TwoTerm& s, const TwoTerm& t, std::size_t depth) {
  if (s == t) return true;
  const auto cap = std::max(s.size(), t.size()) + 2;
  auto ball = rewrite_ball(s, depth, cap);
  if (ball.contains(t)) return true;
  std::set<TwoTerm> seen{t};
  std::vector<TwoTerm> frontier{t};
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<TwoTerm> next;
    for (const auto& u : frontier)
      for (auto& v : axiom_neighbors(u, cap)) {
        if (ball.contains(v)) return true;
        if (seen.insert(v).second) next.push_back(std::move(v));
      }
    frontier = std::move(next);
  }
  return false;
}

// The 2-operad operations on terms

namespace detail {

template <class F>
TwoTerm map_words(const TwoTerm& t, std::uint32_t arity, const F& f) {
  TwoTerm u = t;
  u.arity = arity;
  u.type = IndexWord{f(t.type.in), f(t.type.out)};
  u.cancel = f(t.cancel);
  for (auto& k : u.kids) k = map_words(k, arity, f);
  return u;
}

}  // namespace detail

/// Substitutes the monoid word us[i] for x_{i+1} in every index word.
inline TwoTerm t_subst(const TwoTerm& t, const std::vector<MonoidNF>& us) {
  if (us.size() != t.arity)
    throw ArityError("t_subst: " + std::to_string(us.size()) + " words for arity " + std::to_string(t.arity));
  std::uint32_t m = 0;
  for (const auto& u : us) m += u.arity;
  auto r = detail::map_words(t, m, [&](const MonoidNF& w) { return monoid_gamma(w, us); });
  typecheck(r);
  return r;
}

/// Renames the variables of every index word along f.
inline TwoTerm t_funct(const TwoTerm& t, const FinMap& f) {
  if (f.dom_size() != t.arity) throw ArityError("t_funct: map on the wrong arity");
  auto r = detail::map_words(t, f.cod_size(), [&](const MonoidNF& w) { return monoid_act(w, f); });
  typecheck(r);
  return r;
}

/// Number of slots; terms fed to two_gamma use exactly 1..q.
inline std::uint32_t slot_count(const TwoTerm& t) {
  return static_cast<std::uint32_t>(typecheck(t).sources.size());
}

/// Composition: slot i of t is replaced by args[i-1], whose slots are
/// renumbered after those of args[0..i-2].
inline TwoTerm two_gamma(const TwoTerm& t, const std::vector<TwoTerm>& args) {
  auto ty = typecheck(t);
  if (ty.sources.size() != args.size()) throw ArityError("two_gamma: argument count differs from slot count");
  std::uint32_t i = 1;
  for (const auto& [k, w] : ty.sources)
    if (k != i++) throw ArityError("two_gamma: slots must be numbered 1..q");
  std::vector<std::uint32_t> offset(args.size() + 1, 0);
  for (std::size_t j = 0; j < args.size(); ++j) {
    auto aj = typecheck(args[j]);
    if (aj.target != ty.sources.at(static_cast<std::uint32_t>(j + 1)))
      throw TypingError("two_gamma: argument " + std::to_string(j + 1) + " has target " + to_string(aj.target) +
                        ", slot expects " + to_string(ty.sources.at(static_cast<std::uint32_t>(j + 1))));
    std::uint32_t k = 1;
    for (const auto& [s, w] : aj.sources)
      if (s != k++) throw ArityError("two_gamma: argument slots must be numbered 1..p");
    offset[j + 1] = offset[j] + static_cast<std::uint32_t>(aj.sources.size());
  }
  auto shift = [](auto&& self, TwoTerm u, std::uint32_t by) -> TwoTerm {
    if (u.kind == TwoKind::Slot) u.slot += by;
    for (auto& k : u.kids) k = self(self, k, by);
    return u;
  };
  auto rec = [&](auto&& self, const TwoTerm& u) -> TwoTerm {
    if (u.kind == TwoKind::Slot) return shift(shift, args[u.slot - 1], offset[u.slot - 1]);
    auto v = u;
    for (auto& k : v.kids) k = self(self, k);
    return v;
  };
  return rec(rec, t);
}

/// Renames slot i to iota(i); iota must be injective.
inline TwoTerm two_reindex(const TwoTerm& t, const FinMap& iota) {
  auto ty = typecheck(t);
  if (!ty.sources.empty() && ty.sources.rbegin()->first > iota.dom_size())
    throw ArityError("two_reindex: map too short for the slots");
  std::set<std::uint32_t> image;
  for (std::uint32_t i = 1; i <= iota.dom_size(); ++i)
    if (!image.insert(iota(i)).second) throw ArityError("two_reindex: map is not injective");
  auto rec = [&](auto&& self, TwoTerm u) -> TwoTerm {
    if (u.kind == TwoKind::Slot) u.slot = iota(u.slot);
    for (auto& k : u.kids) k = self(self, k);
    return u;
  };
  return rec(rec, t);
}

/// The identity operation on w.
inline TwoTerm two_unit(const IndexWord& w) { return TwoTerm::slot_of(1, w); }

}  // namespace cohere
