#pragma once

// Exhaustive enumeration of terms by node count, and a catalog indexing them
// by their projection in a theory.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cohere/algebra_nf.hpp"
#include "cohere/term.hpp"

namespace cohere {

/// All terms over `sig` in `arity` variables with exactly `size` nodes, for
/// every size in 1..max_size. result[s] holds the terms of size s, in
/// increasing term order.
inline std::vector<std::vector<Term>> enumerate_terms(const Signature& sig, std::uint32_t arity,
                                                      std::size_t max_size) {
  // Work on node sequences; Term construction happens once at the end.
  using Code = std::vector<Node>;
  std::vector<std::vector<Code>> by_size(max_size + 1);
  for (std::size_t s = 1; s <= max_size; ++s) {
    auto& out = by_size[s];
    if (s == 1) {
      for (std::uint32_t v = 1; v <= arity; ++v) out.push_back({Node{-static_cast<std::int32_t>(v), 0}});
      for (std::uint32_t g = 0; g < sig.size(); ++g)
        if (sig.at(g).arity == 0) out.push_back({Node{static_cast<std::int32_t>(g), 0}});
      continue;
    }
    for (std::uint32_t g = 0; g < sig.size(); ++g) {
      const auto a = sig.at(g).arity;
      if (a == 0 || a + 1 > s) continue;
      // distribute s-1 nodes over a children, each >= 1
      std::vector<std::size_t> sizes(a);
      Code acc{Node{static_cast<std::int32_t>(g), a}};
      std::function<void(std::size_t)> fill = [&](std::size_t k) {
        if (k == a) {
          out.push_back(acc);
          return;
        }
        for (const auto& child : by_size[sizes[k]]) {
          auto mark = acc.size();
          acc.insert(acc.end(), child.begin(), child.end());
          fill(k + 1);
          acc.resize(mark);
        }
      };
      std::function<void(std::size_t, std::size_t)> split = [&](std::size_t k, std::size_t left) {
        if (k + 1 == a) {
          sizes[k] = left;
          fill(0);
          return;
        }
        for (std::size_t c = 1; c + (a - k - 1) <= left; ++c) {
          sizes[k] = c;
          split(k + 1, left - c);
        }
      };
      split(0, s - 1);
    }
  }
  std::vector<std::vector<Term>> result(max_size + 1);
  for (std::size_t s = 1; s <= max_size; ++s) {
    result[s].reserve(by_size[s].size());
    for (auto& c : by_size[s]) result[s].emplace_back(arity, std::move(c));
    std::sort(result[s].begin(), result[s].end());
  }
  return result;
}

struct WordLess {
  bool operator()(const Word& a, const Word& b) const { return a < b; }
};

/// All terms of a theory in a fixed number of variables up to a size bound,
/// grouped by projection. Lookups are read-only after construction.
class TermCatalog {
 public:
  TermCatalog(const Theory& th, std::uint32_t arity, std::size_t max_size)
      : arity_(arity), max_size_(max_size) {
    auto all = enumerate_terms(th.sig, arity, max_size);
    for (std::size_t s = 1; s <= max_size; ++s)
      for (auto& t : all[s]) {
        auto w = project(th, t);
        groups_[std::move(w)].push_back(std::move(t));
        ++count_;
      }
    // within a group: by size, then term order (enumeration already sorted per size)
  }

  /// Terms projecting to `w`, ordered by size then term order.
  const std::vector<Term>& with_projection(const Word& w) const {
    static const std::vector<Term> none;
    auto it = groups_.find(w);
    return it == groups_.end() ? none : it->second;
  }

  std::uint32_t arity() const { return arity_; }
  std::size_t max_size() const { return max_size_; }
  std::size_t size() const { return count_; }
  const std::map<Word, std::vector<Term>, WordLess>& groups() const { return groups_; }

 private:
  std::uint32_t arity_;
  std::size_t max_size_;
  std::size_t count_ = 0;
  std::map<Word, std::vector<Term>, WordLess> groups_;
};

/// Shared catalogs keyed by (theory name, arity, size). Construction is
/// serialized; catalogs are immutable once built.
class CatalogCache {
 public:
  const TermCatalog& get(const Theory& th, std::uint32_t arity, std::size_t max_size) {
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(th.name(), arity, max_size);
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, std::make_unique<TermCatalog>(th, arity, max_size)).first;
    return *it->second;
  }

  static CatalogCache& global() {
    static CatalogCache c;
    return c;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<std::string, std::uint32_t, std::size_t>, std::unique_ptr<TermCatalog>> cache_;
};

/// All terms of a theory whose projection is a given word, up to a size
/// bound. Built top-down from the shape of the word (splits of sums,
/// factorizations of products) and memoized, so only the relevant part of
/// the term space is ever materialized. Not thread-safe; use one per thread.
class ProjectionSynth {
 public:
  explicit ProjectionSynth(Theory th) : th_(std::move(th)) {}

  const Theory& theory() const { return th_; }

  /// Terms with projection `w` and at most `max_size` nodes, ordered by size
  /// then term order.
  const std::vector<Term>& terms(const Word& w, std::size_t max_size) {
    auto key = std::make_pair(w, max_size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto out = build(w, max_size);
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  struct KeyLess {
    bool operator()(const std::pair<Word, std::size_t>& a, const std::pair<Word, std::size_t>& b) const {
      if (a.second != b.second) return a.second < b.second;
      return a.first < b.first;
    }
  };

  Term leaf(std::uint32_t gen, std::uint32_t n) const {
    return Term(n, {Node{static_cast<std::int32_t>(gen), 0}});
  }
  Term bin(std::uint32_t gen, const Term& a, const Term& b) const {
    std::vector<Node> nodes{Node{static_cast<std::int32_t>(gen), 2}};
    nodes.insert(nodes.end(), a.nodes().begin(), a.nodes().end());
    nodes.insert(nodes.end(), b.nodes().begin(), b.nodes().end());
    return Term(a.ambient_arity(), std::move(nodes));
  }

  // every (A, B) with A from `as`, B from `bs`, |A| + |B| + 1 <= m
  template <class Pred>
  void pairs(std::vector<Term>& out, std::uint32_t gen, const std::vector<Term>& as,
             const std::vector<Term>& bs, std::size_t m, Pred keep) const {
    for (const auto& a : as) {
      if (a.size() + 2 > m) break;
      for (const auto& b : bs) {
        if (a.size() + b.size() + 1 > m) break;
        if (keep(a, b)) out.push_back(bin(gen, a, b));
      }
    }
  }

  // distinct sub-multisets of a sorted list, as (part, rest)
  template <class T>
  static std::vector<std::pair<std::vector<T>, std::vector<T>>> splits(const std::vector<T>& xs) {
    std::vector<std::pair<T, std::size_t>> groups;
    for (const auto& x : xs) {
      if (!groups.empty() && groups.back().first == x)
        ++groups.back().second;
      else
        groups.push_back({x, 1});
    }
    std::vector<std::pair<std::vector<T>, std::vector<T>>> out;
    std::vector<std::size_t> take(groups.size(), 0);
    for (;;) {
      std::vector<T> part, rest;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        part.insert(part.end(), take[g], groups[g].first);
        rest.insert(rest.end(), groups[g].second - take[g], groups[g].first);
      }
      out.emplace_back(std::move(part), std::move(rest));
      std::size_t g = 0;
      while (g < groups.size() && take[g] == groups[g].second) take[g++] = 0;
      if (g == groups.size()) break;
      ++take[g];
    }
    return out;
  }

  std::vector<Term> build(const Word& w, std::size_t m) {
    std::vector<Term> out;
    if (m == 0) return out;
    if (const auto* t = std::get_if<Term>(&w)) {
      if (t->size() <= m) out.push_back(*t);
      return out;
    }
    if (const auto* mw = std::get_if<MonoidNF>(&w)) return build_monoid(*mw, m);
    return build_poly(std::get<PolyNF>(w), m);
  }

  std::vector<Term> build_monoid(const MonoidNF& w, std::size_t m) {
    std::vector<Term> out;
    const auto n = w.arity;
    if (w.vars.size() == 1) out.push_back(Term::var(w.vars[0], n));
    if (w.vars.empty()) out.push_back(leaf(th_.zero, n));
    if (m < 3) return out;
    for (auto& [pa, pb] : splits(w.vars)) {
      const auto& as = terms(MonoidNF{n, pa}, m - 2);
      const auto& bs = terms(MonoidNF{n, pb}, m - 2);
      pairs(out, th_.plus, as, bs, m, [](const Term&, const Term&) { return true; });
    }
    return out;
  }

  const std::vector<std::pair<Term, bool>>& all_terms(std::uint32_t n, std::size_t m) {
    auto key = std::make_pair(n, m);
    if (auto it = all_.find(key); it != all_.end()) return it->second;
    std::vector<std::pair<Term, bool>> out;
    auto by_size = enumerate_terms(th_.sig, n, m);
    for (std::size_t s = 1; s <= m; ++s)
      for (auto& t : by_size[s]) {
        bool zero = project_semiring(th_, t).monomials.empty();
        out.emplace_back(std::move(t), zero);
      }
    return all_.emplace(key, std::move(out)).first->second;
  }

  std::vector<Term> build_poly(const PolyNF& p, std::size_t m) {
    std::vector<Term> out;
    const auto n = p.arity;
    if (p.monomials.size() == 1 && p.monomials[0].size() == 1) out.push_back(Term::var(p.monomials[0][0], n));
    if (p.monomials.empty()) out.push_back(leaf(th_.zero, n));
    if (p.monomials.size() == 1 && p.monomials[0].empty()) out.push_back(leaf(th_.one, n));
    if (m < 3) return out;
    for (auto& [pa, pb] : splits(p.monomials)) {
      const auto& as = terms(PolyNF{n, pa}, m - 2);
      const auto& bs = terms(PolyNF{n, pb}, m - 2);
      pairs(out, th_.plus, as, bs, m, [](const Term&, const Term&) { return true; });
    }
    if (p.monomials.empty()) {
      // a product is zero iff a factor is
      const auto& any = all_terms(n, m - 2);
      std::vector<Term> all, zeros;
      for (const auto& [t, z] : any) {
        all.push_back(t);
        if (z) zeros.push_back(t);
      }
      pairs(out, th_.times, zeros, all, m, [](const Term&, const Term&) { return true; });
      std::vector<Term> nonzero;
      for (const auto& [t, z] : any)
        if (!z) nonzero.push_back(t);
      pairs(out, th_.times, nonzero, zeros, m, [](const Term&, const Term&) { return true; });
    } else {
      for (const auto& [fa, fb] : factorizations(p)) {
        const auto& as = terms(fa, m - 2);
        const auto& bs = terms(fb, m - 2);
        pairs(out, th_.times, as, bs, m, [](const Term&, const Term&) { return true; });
      }
    }
    return out;
  }

  // Exact division in Z[x] under a graded order; nullopt unless the quotient
  // exists and has natural coefficients.
  static std::optional<PolyNF> divide(const PolyNF& p, const PolyNF& d) {
    using Coeffs = std::map<Monomial, long, bool (*)(const Monomial&, const Monomial&)>;
    auto graded = +[](const Monomial& a, const Monomial& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a > b;  // sorted lists: smaller vectors carry smaller variables, hence larger in lex
    };
    auto to_coeffs = [&](const std::vector<Monomial>& ms) {
      Coeffs c(graded);
      for (const auto& m : ms) ++c[m];
      return c;
    };
    auto mul = [](const Monomial& a, const Monomial& b) {
      Monomial r;
      std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
      return r;
    };
    auto divides = [](const Monomial& a, const Monomial& b) {
      return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    Coeffs r = to_coeffs(p.monomials), dc = to_coeffs(d.monomials);
    if (dc.empty()) return std::nullopt;
    const auto lead_d = *dc.rbegin();
    std::vector<Monomial> q;
    while (!r.empty()) {
      auto [lm, lc] = *r.rbegin();
      if (!divides(lead_d.first, lm) || lc % lead_d.second != 0 || lc < 0) return std::nullopt;
      Monomial t;
      std::set_difference(lm.begin(), lm.end(), lead_d.first.begin(), lead_d.first.end(),
                          std::back_inserter(t));
      long c = lc / lead_d.second;
      q.insert(q.end(), static_cast<std::size_t>(c), t);
      for (const auto& [dm, dcoef] : dc) {
        auto prod = mul(t, dm);
        auto& slot = r[prod];
        slot -= c * dcoef;
        if (slot == 0) r.erase(prod);
      }
    }
    return PolyNF::of(p.arity, std::move(q));
  }

  const std::vector<std::pair<PolyNF, PolyNF>>& factorizations(const PolyNF& p) {
    if (auto it = factors_.find(p); it != factors_.end()) return it->second;
    std::set<Monomial> divisors;
    for (const auto& m : p.monomials)
      for (auto& [part, rest] : splits(m)) divisors.insert(part);
    std::vector<Monomial> ds(divisors.begin(), divisors.end());
    std::set<std::pair<PolyNF, PolyNF>> found;
    const std::size_t total = p.monomials.size();
    for (std::size_t d = 1; d * d <= total; ++d) {
      if (total % d != 0) continue;
      // multisets of size d over ds
      std::vector<std::size_t> pick(d, 0);
      for (;;) {
        std::vector<Monomial> fa;
        for (auto k : pick) fa.push_back(ds[k]);
        auto a = PolyNF::of(p.arity, fa);
        if (auto b = divide(p, a)) {
          found.insert({a, *b});
          found.insert({*b, a});
        }
        std::size_t k = d;
        while (k > 0 && pick[k - 1] == ds.size() - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t j = k; j < d; ++j) pick[j] = pick[k - 1];
      }
    }
    std::vector<std::pair<PolyNF, PolyNF>> out(found.begin(), found.end());
    return factors_.emplace(p, std::move(out)).first->second;
  }

  Theory th_;
  std::map<std::pair<Word, std::size_t>, std::vector<Term>, KeyLess> memo_;
  std::map<std::pair<std::uint32_t, std::size_t>, std::vector<std::pair<Term, bool>>> all_;
  std::map<PolyNF, std::vector<std::pair<PolyNF, PolyNF>>> factors_;
};

}  // namespace cohere
