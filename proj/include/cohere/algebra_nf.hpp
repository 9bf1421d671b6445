#pragma once

// Normal forms for the two built-in quotient theories and the Laplaza-set
// membership predicates on them.
//
//   cmon: a word is a multiset of variables (the empty multiset is zero).
//   csr:  a word is a multiset of monomials, a monomial a multiset of
//         variables; the empty sum is zero and the empty monomial is one.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cohere/error.hpp"
#include "cohere/finmap.hpp"
#include "cohere/signature.hpp"
#include "cohere/term.hpp"

namespace cohere {

enum class TheoryKind { Free, CommutativeMonoid, CommutativeSemiring };

/// A signature together with the equations it is read modulo.
struct Theory {
  Signature sig;
  TheoryKind kind = TheoryKind::Free;
  std::uint32_t plus = 0, zero = 0, times = 0, one = 0;

  static Theory cmon() {
    Theory t{Signature::cmon(), TheoryKind::CommutativeMonoid};
    t.plus = t.sig.id("plus");
    t.zero = t.sig.id("zero");
    return t;
  }
  static Theory csr() {
    Theory t{Signature::csr(), TheoryKind::CommutativeSemiring};
    t.plus = t.sig.id("plus");
    t.times = t.sig.id("times");
    t.zero = t.sig.id("zero");
    t.one = t.sig.id("one");
    return t;
  }
  /// The free theory on a signature: no equations, words are terms.
  static Theory free(Signature sig) { return Theory{std::move(sig), TheoryKind::Free}; }

  const std::string& name() const { return sig.name(); }
};

struct MonoidNF {
  std::uint32_t arity = 0;
  std::vector<std::uint32_t> vars;  // sorted, 1-based

  bool operator==(const MonoidNF&) const = default;
  auto operator<=>(const MonoidNF&) const = default;

  static MonoidNF of(std::uint32_t arity, std::vector<std::uint32_t> vars) {
    for (auto v : vars)
      if (v < 1 || v > arity) throw ArityError("monoid word variable outside ambient arity");
    std::sort(vars.begin(), vars.end());
    return MonoidNF{arity, std::move(vars)};
  }

  std::size_t count(std::uint32_t v) const {
    return static_cast<std::size_t>(std::count(vars.begin(), vars.end(), v));
  }
};

using Monomial = std::vector<std::uint32_t>;  // sorted

struct PolyNF {
  std::uint32_t arity = 0;
  std::vector<Monomial> monomials;  // each sorted, list sorted

  bool operator==(const PolyNF&) const = default;
  auto operator<=>(const PolyNF&) const = default;

  static PolyNF of(std::uint32_t arity, std::vector<Monomial> monos) {
    for (auto& m : monos) {
      for (auto v : m)
        if (v < 1 || v > arity) throw ArityError("monomial variable outside ambient arity");
      std::sort(m.begin(), m.end());
    }
    std::sort(monos.begin(), monos.end());
    return PolyNF{arity, std::move(monos)};
  }
};

/// The image of a term in T(n).
using Word = std::variant<Term, MonoidNF, PolyNF>;

// ---------------------------------------------------------------------------
// Monoid words

inline MonoidNF monoid_add(const MonoidNF& a, const MonoidNF& b) {
  if (a.arity != b.arity) throw ArityError("monoid sum across arities");
  std::vector<std::uint32_t> out;
  std::merge(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(out));
  return MonoidNF{a.arity, std::move(out)};
}

inline bool monoid_contains(const MonoidNF& whole, const MonoidNF& part) {
  return whole.arity == part.arity &&
         std::includes(whole.vars.begin(), whole.vars.end(), part.vars.begin(), part.vars.end());
}

/// whole - part; requires part to be a sub-multiset.
inline MonoidNF monoid_sub(const MonoidNF& whole, const MonoidNF& part) {
  if (!monoid_contains(whole, part)) throw ArityError("monoid difference of non-submultiset");
  std::vector<std::uint32_t> out;
  std::set_difference(whole.vars.begin(), whole.vars.end(), part.vars.begin(), part.vars.end(),
                      std::back_inserter(out));
  return MonoidNF{whole.arity, std::move(out)};
}

inline MonoidNF monoid_act(const MonoidNF& w, const FinMap& f) {
  if (f.dom_size() != w.arity) throw ArityError("monoid act: arity mismatch");
  std::vector<std::uint32_t> out;
  for (auto v : w.vars) out.push_back(f(v));
  std::sort(out.begin(), out.end());
  return MonoidNF{f.cod_size(), std::move(out)};
}

inline MonoidNF monoid_gamma(const MonoidNF& w, std::span<const MonoidNF> args) {
  if (args.size() != w.arity) throw ArityError("monoid gamma: argument count mismatch");
  std::vector<std::uint32_t> offset(args.size() + 1, 0);
  for (std::size_t i = 0; i < args.size(); ++i) offset[i + 1] = offset[i] + args[i].arity;
  std::vector<std::uint32_t> out;
  for (auto v : w.vars)
    for (auto u : args[v - 1].vars) out.push_back(u + offset[v - 1]);
  std::sort(out.begin(), out.end());
  return MonoidNF{offset.back(), std::move(out)};
}

inline MonoidNF project_monoid(const Theory& th, const Term& w) {
  if (th.kind != TheoryKind::CommutativeMonoid)
    throw ArityError("project_monoid needs the cmon theory, got " + th.name());
  check_signature(th.sig, w);
  return MonoidNF::of(w.ambient_arity(), w.leaves());
}

// ---------------------------------------------------------------------------
// Polynomials

inline PolyNF poly_mul(const PolyNF& a, const PolyNF& b) {
  std::vector<Monomial> out;
  out.reserve(a.monomials.size() * b.monomials.size());
  for (const auto& m : a.monomials)
    for (const auto& n : b.monomials) {
      Monomial r;
      std::merge(m.begin(), m.end(), n.begin(), n.end(), std::back_inserter(r));
      out.push_back(std::move(r));
    }
  std::sort(out.begin(), out.end());
  return PolyNF{a.arity, std::move(out)};
}

inline PolyNF poly_add(const PolyNF& a, const PolyNF& b) {
  std::vector<Monomial> out;
  std::merge(a.monomials.begin(), a.monomials.end(), b.monomials.begin(), b.monomials.end(),
             std::back_inserter(out));
  return PolyNF{a.arity, std::move(out)};
}

inline PolyNF poly_act(const PolyNF& p, const FinMap& f) {
  if (f.dom_size() != p.arity) throw ArityError("poly act: arity mismatch");
  std::vector<Monomial> out;
  for (const auto& m : p.monomials) {
    Monomial r;
    for (auto v : m) r.push_back(f(v));
    out.push_back(std::move(r));
  }
  return PolyNF::of(f.cod_size(), std::move(out));
}

inline PolyNF poly_gamma(const PolyNF& p, std::span<const PolyNF> args) {
  if (args.size() != p.arity) throw ArityError("poly gamma: argument count mismatch");
  std::vector<std::uint32_t> offset(args.size() + 1, 0);
  for (std::size_t i = 0; i < args.size(); ++i) offset[i + 1] = offset[i] + args[i].arity;
  const std::uint32_t n = offset.back();
  std::vector<PolyNF> shifted;
  for (std::size_t i = 0; i < args.size(); ++i)
    shifted.push_back(poly_act(args[i], FinMap::shift(args[i].arity, offset[i], n)));
  PolyNF sum{n, {}};
  for (const auto& m : p.monomials) {
    PolyNF prod{n, {Monomial{}}};
    for (auto v : m) prod = poly_mul(prod, shifted[v - 1]);
    sum = poly_add(sum, prod);
  }
  return sum;
}

/// Full distribution bottom-up; zero annihilates, one is dropped from
/// monomials, like terms are kept with multiplicity.
inline PolyNF project_semiring(const Theory& th, const Term& w) {
  if (th.kind != TheoryKind::CommutativeSemiring)
    throw ArityError("project_semiring needs the csr theory, got " + th.name());
  check_signature(th.sig, w);
  const auto n = w.ambient_arity();
  std::vector<PolyNF> stack;
  for (std::size_t i = w.size(); i-- > 0;) {
    const auto& node = w.node(i);
    if (node.is_var()) {
      stack.push_back(PolyNF{n, {Monomial{node.var()}}});
    } else if (node.gen() == th.zero) {
      stack.push_back(PolyNF{n, {}});
    } else if (node.gen() == th.one) {
      stack.push_back(PolyNF{n, {Monomial{}}});
    } else {
      auto a = std::move(stack.back());
      stack.pop_back();
      auto b = std::move(stack.back());
      stack.pop_back();
      stack.push_back(node.gen() == th.plus ? poly_add(a, b) : poly_mul(a, b));
    }
  }
  return stack.back();
}

inline Word project(const Theory& th, const Term& w) {
  switch (th.kind) {
    case TheoryKind::CommutativeMonoid:
      return project_monoid(th, w);
    case TheoryKind::CommutativeSemiring:
      return project_semiring(th, w);
    case TheoryKind::Free:
      break;
  }
  check_signature(th.sig, w);
  return w;
}

inline std::uint32_t word_arity(const Word& w) {
  return std::visit(
      [](const auto& x) -> std::uint32_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Term>)
          return x.ambient_arity();
        else
          return x.arity;
      },
      w);
}

inline Word word_act(const Word& w, const FinMap& f) {
  return std::visit(
      [&](const auto& x) -> Word {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Term>)
          return act(x, f);
        else if constexpr (std::is_same_v<X, MonoidNF>)
          return monoid_act(x, f);
        else
          return poly_act(x, f);
      },
      w);
}

// ---------------------------------------------------------------------------
// Reading a normal form back as a term

inline Term left_nested(std::uint32_t op, std::uint32_t unit, std::vector<Term> parts,
                        std::uint32_t arity) {
  if (parts.empty()) return Term(arity, {Node{static_cast<std::int32_t>(unit), 0}});
  Term acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    std::vector<Term> two{acc, parts[i]};
    acc = Term::apply(op, two, arity);
  }
  return acc;
}

inline Term to_term(const Theory& th, const MonoidNF& w) {
  std::vector<Term> parts;
  for (auto v : w.vars) parts.push_back(Term::var(v, w.arity));
  return left_nested(th.plus, th.zero, std::move(parts), w.arity);
}

inline Term to_term(const Theory& th, const PolyNF& p) {
  std::vector<Term> sums;
  for (const auto& m : p.monomials) {
    std::vector<Term> parts;
    for (auto v : m) parts.push_back(Term::var(v, p.arity));
    sums.push_back(left_nested(th.times, th.one, std::move(parts), p.arity));
  }
  return left_nested(th.plus, th.zero, std::move(sums), p.arity);
}

inline Term to_term(const Theory& th, const Word& w) {
  return std::visit(
      [&](const auto& x) -> Term {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Term>)
          return x;
        else
          return to_term(th, x);
      },
      w);
}

inline std::string to_string(const MonoidNF& w) {
  if (w.vars.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < w.vars.size(); ++i)
    out += (i ? " + x" : "x") + std::to_string(w.vars[i]);
  return out;
}

inline std::string to_string(const Monomial& m) {
  if (m.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) out += (i ? "*x" : "x") + std::to_string(m[i]);
  return out;
}

inline std::string to_string(const PolyNF& p) {
  if (p.monomials.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.monomials.size(); ++i)
    out += (i ? " + " : "") + to_string(p.monomials[i]);
  return out;
}

inline std::string to_string(const Theory& th, const Word& w) {
  return std::visit(
      [&](const auto& x) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Term>)
          return to_string(th.sig, x);
        else
          return to_string(x);
      },
      w);
}

// ---------------------------------------------------------------------------
// Laplaza sets

enum class LaplazaSpec { Full, Operadic, LaplazaSemiring };

inline std::string_view to_string(LaplazaSpec s) {
  switch (s) {
    case LaplazaSpec::Full:
      return "full";
    case LaplazaSpec::Operadic:
      return "operadic";
    case LaplazaSpec::LaplazaSemiring:
      return "laplaza-semiring";
  }
  return "?";
}

inline LaplazaSpec parse_laplaza_spec(std::string_view s) {
  if (s == "full") return LaplazaSpec::Full;
  if (s == "operadic") return LaplazaSpec::Operadic;
  if (s == "laplaza-semiring") return LaplazaSpec::LaplazaSemiring;
  throw ParseError("unknown Laplaza set '" + std::string(s) + "'");
}

/// Operadic needs a theory free on an operad (cmon or a free signature);
/// the semiring set only makes sense for csr.
inline void check_compatible(LaplazaSpec spec, const Theory& th) {
  if (spec == LaplazaSpec::Operadic && th.kind == TheoryKind::CommutativeSemiring)
    throw ArityError("the operadic Laplaza set needs a theory free on an operad; " + th.name() +
                     " is not");
  if (spec == LaplazaSpec::LaplazaSemiring && th.kind != TheoryKind::CommutativeSemiring)
    throw ArityError("the semiring Laplaza set applies only to csr, not " + th.name());
}

inline bool is_square_free(const Monomial& m) {
  return std::adjacent_find(m.begin(), m.end()) == m.end();
}

/// Membership of a projected word in S(n).
inline bool word_member(LaplazaSpec spec, const Word& w) {
  switch (spec) {
    case LaplazaSpec::Full:
      return true;
    case LaplazaSpec::Operadic:
      if (const auto* t = std::get_if<Term>(&w)) return is_linear(*t);
      if (const auto* m = std::get_if<MonoidNF>(&w)) {
        if (m->vars.size() != m->arity) return false;
        for (std::uint32_t i = 0; i < m->arity; ++i)
          if (m->vars[i] != i + 1) return false;
        return true;
      }
      throw ArityError("operadic membership is undefined for semiring words");
    case LaplazaSpec::LaplazaSemiring: {
      const auto* p = std::get_if<PolyNF>(&w);
      if (!p) throw ArityError("semiring membership needs a semiring word");
      // the list is sorted, so duplicates are adjacent
      if (std::adjacent_find(p->monomials.begin(), p->monomials.end()) != p->monomials.end())
        return false;
      return std::all_of(p->monomials.begin(), p->monomials.end(), is_square_free);
    }
  }
  return false;
}

inline bool laplaza_member(LaplazaSpec spec, const Theory& th, const Term& w) {
  check_compatible(spec, th);
  return word_member(spec, project(th, w));
}

}  // namespace cohere
