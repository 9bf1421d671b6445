#pragma once

// Words of the free theory on a signature. A term is stored as its prefix
// (Polish) node sequence together with an explicit ambient arity, so that
// structural equality is plain vector equality and relabeling is a table
// lookup.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cohere/error.hpp"
#include "cohere/finmap.hpp"
#include "cohere/signature.hpp"

namespace cohere {

/// head >= 0 is a generator id, head < 0 is the variable x_{-head}.
struct Node {
  std::int32_t head = 0;
  std::uint32_t arity = 0;

  bool is_var() const { return head < 0; }
  std::uint32_t var() const { return static_cast<std::uint32_t>(-head); }
  std::uint32_t gen() const { return static_cast<std::uint32_t>(head); }

  bool operator==(const Node&) const = default;
  auto operator<=>(const Node&) const = default;
};

/// Child indices from the root, 0-based.
using Position = std::vector<std::uint32_t>;

class Term {
 public:
  Term() : nodes_{Node{-1, 0}}, arity_(1) {}

  Term(std::uint32_t ambient_arity, std::vector<Node> nodes)
      : nodes_(std::move(nodes)), arity_(ambient_arity) {
    validate();
  }

  static Term var(std::uint32_t i, std::uint32_t ambient_arity) {
    return Term(ambient_arity, {Node{-static_cast<std::int32_t>(i), 0}});
  }

  /// Generator `gen` applied to children that share one ambient arity.
  static Term apply(std::uint32_t gen, std::span<const Term> children,
                    std::uint32_t ambient_arity) {
    std::vector<Node> nodes{Node{static_cast<std::int32_t>(gen),
                                 static_cast<std::uint32_t>(children.size())}};
    for (const auto& c : children) {
      if (c.ambient_arity() != ambient_arity)
        throw ArityError("child ambient arity " + std::to_string(c.ambient_arity()) +
                         " differs from " + std::to_string(ambient_arity));
      nodes.insert(nodes.end(), c.nodes_.begin(), c.nodes_.end());
    }
    return Term(ambient_arity, std::move(nodes));
  }

  static Term apply(const Signature& sig, std::string_view symbol,
                    std::initializer_list<Term> children, std::uint32_t ambient_arity) {
    auto id = sig.id(symbol);
    if (sig.at(id).arity != children.size())
      throw ArityError("generator " + std::string(symbol) + " expects " +
                       std::to_string(sig.at(id).arity) + " arguments");
    std::vector<Term> cs(children);
    return apply(id, cs, ambient_arity);
  }

  std::uint32_t ambient_arity() const { return arity_; }
  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  bool is_var() const { return nodes_.size() == 1 && nodes_[0].is_var(); }

  /// One past the last node of the subtree rooted at node i.
  std::size_t end_of(std::size_t i) const {
    std::size_t need = 1;
    while (need > 0) {
      need += nodes_[i].arity;
      --need;
      ++i;
    }
    return i;
  }

  std::vector<std::size_t> children(std::size_t i) const {
    std::vector<std::size_t> out;
    std::size_t c = i + 1;
    for (std::uint32_t k = 0; k < nodes_[i].arity; ++k) {
      out.push_back(c);
      c = end_of(c);
    }
    return out;
  }

  Term subterm_at(std::size_t i) const {
    return Term(arity_, std::vector<Node>(nodes_.begin() + static_cast<std::ptrdiff_t>(i),
                                          nodes_.begin() + static_cast<std::ptrdiff_t>(end_of(i))),
                Unchecked{});
  }

  std::size_t index_of(const Position& pos) const {
    std::size_t i = 0;
    for (auto c : pos) {
      if (nodes_[i].arity <= c) throw ArityError("position leaves the term");
      i = children(i)[c];
    }
    return i;
  }

  Position position_of(std::size_t index) const {
    Position pos;
    std::size_t i = 0;
    while (i != index) {
      auto cs = children(i);
      std::uint32_t k = 0;
      while (k + 1 < cs.size() && cs[k + 1] <= index) ++k;
      pos.push_back(k);
      i = cs[k];
    }
    return pos;
  }

  Term subterm(const Position& pos) const { return subterm_at(index_of(pos)); }

  /// Replaces the subtree at node i; `by` must share the ambient arity.
  Term replace_at(std::size_t i, const Term& by) const {
    if (by.arity_ != arity_) throw ArityError("replacement has different ambient arity");
    std::vector<Node> out;
    out.reserve(nodes_.size() + by.nodes_.size());
    out.insert(out.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(i));
    out.insert(out.end(), by.nodes_.begin(), by.nodes_.end());
    out.insert(out.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(end_of(i)), nodes_.end());
    return Term(arity_, std::move(out), Unchecked{});
  }

  Term replace(const Position& pos, const Term& by) const { return replace_at(index_of(pos), by); }

  /// Same node sequence over a larger (or equal) ambient arity.
  Term widen(std::uint32_t ambient_arity) const {
    if (ambient_arity < max_var()) throw ArityError("cannot narrow below used variables");
    return Term(ambient_arity, nodes_, Unchecked{});
  }

  std::uint32_t max_var() const {
    std::uint32_t m = 0;
    for (const auto& n : nodes_)
      if (n.is_var()) m = std::max(m, n.var());
    return m;
  }

  /// Variable indices of the leaves, left to right.
  std::vector<std::uint32_t> leaves() const {
    std::vector<std::uint32_t> out;
    for (const auto& n : nodes_)
      if (n.is_var()) out.push_back(n.var());
    return out;
  }

  bool operator==(const Term&) const = default;
  std::strong_ordering operator<=>(const Term& o) const {
    if (auto c = arity_ <=> o.arity_; c != 0) return c;
    if (auto c = nodes_.size() <=> o.nodes_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(nodes_.begin(), nodes_.end(), o.nodes_.begin(),
                                                  o.nodes_.end());
  }

  std::size_t hash() const {
    std::size_t h = arity_ * 0x9E3779B97F4A7C15ull;
    for (const auto& n : nodes_)
      h = (h ^ (static_cast<std::size_t>(static_cast<std::uint32_t>(n.head)) * 31 + n.arity)) *
          0x100000001B3ull;
    return h;
  }

 private:
  struct Unchecked {};
  Term(std::uint32_t ambient_arity, std::vector<Node> nodes, Unchecked)
      : nodes_(std::move(nodes)), arity_(ambient_arity) {}

  void validate() const {
    if (nodes_.empty()) throw ArityError("empty term");
    std::size_t need = 1;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (need == 0) throw ArityError("trailing nodes after a complete term");
      const auto& n = nodes_[i];
      if (n.is_var()) {
        if (n.arity != 0) throw ArityError("variable node with children");
        if (n.var() > arity_)
          throw ArityError("variable x" + std::to_string(n.var()) + " exceeds ambient arity " +
                           std::to_string(arity_));
      }
      need = need - 1 + n.arity;
    }
    if (need != 0) throw ArityError("incomplete term");
  }

  std::vector<Node> nodes_;
  std::uint32_t arity_ = 0;

  friend Term gamma(const Term&, std::span<const Term>);
  friend Term act(const Term&, const FinMap&);
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Checks that every generator node has the arity the signature declares.
inline void check_signature(const Signature& sig, const Term& t) {
  for (const auto& n : t.nodes())
    if (!n.is_var()) {
      if (n.gen() >= sig.size()) throw ArityError("generator id outside signature " + sig.name());
      if (sig.at(n.gen()).arity != n.arity)
        throw ArityError("generator " + sig.at(n.gen()).symbol + " used with " +
                         std::to_string(n.arity) + " children");
    }
}

/// Theory composition: substitutes args[i-1] for x_i, shifting the
/// variables of args[i-1] past those of args[0..i-2].
inline Term gamma(const Term& w, std::span<const Term> args) {
  if (args.size() != w.ambient_arity())
    throw ArityError("gamma: " + std::to_string(args.size()) + " arguments for arity " +
                     std::to_string(w.ambient_arity()));
  std::vector<std::uint32_t> offset(args.size() + 1, 0);
  for (std::size_t i = 0; i < args.size(); ++i)
    offset[i + 1] = offset[i] + args[i].ambient_arity();
  std::vector<Node> out;
  for (const auto& n : w.nodes_) {
    if (!n.is_var()) {
      out.push_back(n);
      continue;
    }
    const auto& a = args[n.var() - 1];
    const auto shift = static_cast<std::int32_t>(offset[n.var() - 1]);
    for (auto m : a.nodes_) {
      if (m.is_var()) m.head -= shift;
      out.push_back(m);
    }
  }
  return Term(offset.back(), std::move(out), Term::Unchecked{});
}

inline Term gamma(const Term& w, std::initializer_list<Term> args) {
  std::vector<Term> v(args);
  return gamma(w, v);
}

/// Functoriality: x_i becomes x_{f(i)}.
inline Term act(const Term& w, const FinMap& f) {
  if (f.dom_size() != w.ambient_arity())
    throw ArityError("act: map " + f.to_string() + " on a term of arity " +
                     std::to_string(w.ambient_arity()));
  std::vector<Node> out(w.nodes_);
  for (auto& n : out)
    if (n.is_var()) n.head = -static_cast<std::int32_t>(f(n.var()));
  return Term(f.cod_size(), std::move(out), Term::Unchecked{});
}

/// Every variable 1..n occurs exactly once.
inline bool is_linear(const Term& w) {
  std::vector<int> count(w.ambient_arity() + 1, 0);
  for (auto v : w.leaves())
    if (++count[v] > 1) return false;
  for (std::uint32_t i = 1; i <= w.ambient_arity(); ++i)
    if (count[i] != 1) return false;
  return true;
}

/// The prefix encoding is already a canonical representative of the tree, so
/// canonicalization only revalidates; two terms are equal iff their canonical
/// forms are.
inline Term canonicalize(const Term& w) {
  return Term(w.ambient_arity(), std::vector<Node>(w.nodes().begin(), w.nodes().end()));
}

/// Order-preserving renumbering of the variables that occur, together with
/// the inclusion back into the ambient set: w == act(result.first, result.second).
inline std::pair<Term, FinMap> restrict_to_used(const Term& w) {
  std::vector<std::uint32_t> used;
  for (auto v : w.leaves()) used.push_back(v);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<std::uint32_t> back(w.ambient_arity() + 1, 1);
  for (std::size_t k = 0; k < used.size(); ++k) back[used[k]] = static_cast<std::uint32_t>(k + 1);
  std::vector<Node> nodes(w.nodes().begin(), w.nodes().end());
  for (auto& n : nodes)
    if (n.is_var()) n.head = -static_cast<std::int32_t>(back[n.var()]);
  return {Term(static_cast<std::uint32_t>(used.size()), std::move(nodes)),
          FinMap(w.ambient_arity(), used)};
}

// ---------------------------------------------------------------------------
// Text form: term := var | "(" symbol term* ")" | symbol ; var := "x" digits

namespace detail {

class TermReader {
 public:
  TermReader(const Signature& sig, std::string_view text) : sig_(sig), text_(text) {}

  std::vector<Node> read_all() {
    std::vector<Node> out;
    read(out);
    skip();
    if (i_ != text_.size()) throw error("trailing input");
    return out;
  }

 private:
  ParseError error(const std::string& what) const {
    return ParseError("term parse error at offset " + std::to_string(i_) + ": " + what + " in '" +
                      std::string(text_) + "'");
  }
  void skip() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
  }
  std::string token() {
    skip();
    std::size_t b = i_;
    while (i_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i_])) &&
           text_[i_] != '(' && text_[i_] != ')')
      ++i_;
    if (b == i_) throw error("expected a symbol or variable");
    return std::string(text_.substr(b, i_ - b));
  }
  void read(std::vector<Node>& out) {
    skip();
    if (i_ >= text_.size()) throw error("unexpected end");
    if (text_[i_] == '(') {
      ++i_;
      auto sym = token();
      auto id = sig_.find(sym);
      if (!id) throw error("unknown generator '" + sym + "'");
      auto at = out.size();
      out.push_back(Node{static_cast<std::int32_t>(*id), sig_.at(*id).arity});
      std::uint32_t count = 0;
      for (;;) {
        skip();
        if (i_ < text_.size() && text_[i_] == ')') {
          ++i_;
          break;
        }
        read(out);
        ++count;
      }
      if (count != sig_.at(*id).arity)
        throw error("generator '" + sym + "' expects " + std::to_string(sig_.at(*id).arity) +
                    " arguments, got " + std::to_string(count));
      out[at].arity = count;
      return;
    }
    auto tok = token();
    if (tok.size() >= 2 && tok[0] == 'x' &&
        std::all_of(tok.begin() + 1, tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      auto v = std::stoul(tok.substr(1));
      if (v == 0) throw error("variables are numbered from x1");
      out.push_back(Node{-static_cast<std::int32_t>(v), 0});
      return;
    }
    auto id = sig_.find(tok);
    if (!id) throw error("unknown token '" + tok + "'");
    if (sig_.at(*id).arity != 0) throw error("generator '" + tok + "' needs arguments");
    out.push_back(Node{static_cast<std::int32_t>(*id), 0});
  }

  const Signature& sig_;
  std::string_view text_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Ambient arity defaults to the largest variable index that occurs.
inline Term parse_term(const Signature& sig, std::string_view text,
                       std::optional<std::uint32_t> ambient_arity = std::nullopt) {
  auto nodes = detail::TermReader(sig, text).read_all();
  std::uint32_t m = 0;
  for (const auto& n : nodes)
    if (n.is_var()) m = std::max(m, n.var());
  return Term(ambient_arity.value_or(m), std::move(nodes));
}

inline std::string to_string(const Signature& sig, const Term& t) {
  std::string out;
  std::function<std::size_t(std::size_t)> go = [&](std::size_t i) -> std::size_t {
    const auto& n = t.node(i);
    if (n.is_var()) {
      out += "x" + std::to_string(n.var());
      return i + 1;
    }
    out += "(" + sig.at(n.gen()).symbol;
    std::size_t c = i + 1;
    for (std::uint32_t k = 0; k < n.arity; ++k) {
      out += ' ';
      c = go(c);
    }
    out += ')';
    return c;
  };
  go(0);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation in a finite algebra (a morphism from the free theory to End(X)).

/// Carrier {0..carrier-1}; one operation table per generator, indexed in
/// mixed radix with the first argument most significant.
struct FiniteAlgebra {
  std::uint32_t carrier = 0;
  std::vector<std::vector<std::uint32_t>> tables;

  std::uint32_t apply(std::uint32_t gen, std::span<const std::uint32_t> args) const {
    std::size_t idx = 0;
    for (auto a : args) idx = idx * carrier + a;
    return tables.at(gen).at(idx);
  }

  void check(const Signature& sig) const {
    if (tables.size() != sig.size()) throw ArityError("algebra has wrong number of tables");
    for (std::uint32_t g = 0; g < sig.size(); ++g) {
      std::size_t expect = 1;
      for (std::uint32_t k = 0; k < sig.at(g).arity; ++k) expect *= carrier;
      if (tables[g].size() != expect)
        throw ArityError("table for " + sig.at(g).symbol + " has wrong size");
      for (auto v : tables[g])
        if (v >= carrier) throw ArityError("table value outside carrier");
    }
  }
};

inline std::uint32_t eval(const Term& w, const FiniteAlgebra& alg,
                          std::span<const std::uint32_t> inputs) {
  if (inputs.size() != w.ambient_arity()) throw ArityError("eval: wrong number of inputs");
  for (auto x : inputs)
    if (x >= alg.carrier) throw ArityError("eval: input outside carrier");
  std::vector<std::uint32_t> stack;
  for (std::size_t i = w.size(); i-- > 0;) {
    const auto& n = w.node(i);
    if (n.is_var()) {
      stack.push_back(inputs[n.var() - 1]);
      continue;
    }
    std::vector<std::uint32_t> args(n.arity);
    for (std::uint32_t k = 0; k < n.arity; ++k) {
      args[k] = stack.back();
      stack.pop_back();
    }
    stack.push_back(alg.apply(n.gen(), args));
  }
  return stack.back();
}

// ---------------------------------------------------------------------------
// Elements of the free theory on an operad, as pairs (relabel, linear word)
// modulo bijections of the linear word's variables.

struct OperadElem {
  FinMap relabel;
  Term linear;

  OperadElem(FinMap f, Term u) : relabel(std::move(f)), linear(std::move(u)) {
    if (!is_linear(linear)) throw ArityError("operad element body must be linear");
    if (relabel.dom_size() != linear.ambient_arity())
      throw ArityError("operad element relabel domain mismatch");
  }

  /// Leaves of the linear word numbered 1..m left to right, with the
  /// renumbering folded into the relabel map.
  OperadElem canonical() const {
    auto order = linear.leaves();  // order[k] = old variable at leaf k
    std::vector<std::uint32_t> to_new(order.size() + 1);
    std::vector<std::uint32_t> f(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      to_new[order[k]] = static_cast<std::uint32_t>(k + 1);
      f[k] = relabel(order[k]);
    }
    std::vector<std::uint32_t> sigma(to_new.begin() + 1, to_new.end());
    return OperadElem(FinMap(relabel.cod_size(), std::move(f)),
                      act(linear, FinMap(linear.ambient_arity(), std::move(sigma))));
  }

  Term to_term() const { return act(linear, relabel); }

  bool operator==(const OperadElem&) const = default;
};

}  // namespace cohere
