#pragma once

// Test-only generators and brute-force oracles.

#include <cstdint>
#include <random>
#include <vector>

#include "cohere/algebra_nf.hpp"
#include "cohere/finmap.hpp"
#include "cohere/term.hpp"

namespace cohere::testing {

using Rng = std::mt19937_64;

inline std::uint32_t uniform(Rng& rng, std::uint32_t lo, std::uint32_t hi) {
  return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
}

/// Random term over `sig` in `arity` variables with at most `max_nodes` nodes.
inline Term random_term(Rng& rng, const Signature& sig, std::uint32_t arity,
                        std::size_t max_nodes) {
  std::vector<Node> nodes;
  std::size_t open = 1;
  std::vector<std::uint32_t> leaves, inner;
  for (std::uint32_t g = 0; g < sig.size(); ++g)
    (sig.at(g).arity == 0 ? leaves : inner).push_back(g);
  while (open > 0) {
    bool can_grow = !inner.empty() && nodes.size() + open + 2 <= max_nodes;
    bool make_leaf = !can_grow || uniform(rng, 0, 2) == 0;
    if (make_leaf) {
      if (arity > 0 && (leaves.empty() || uniform(rng, 0, 4) != 0)) {
        nodes.push_back(Node{-static_cast<std::int32_t>(uniform(rng, 1, arity)), 0});
      } else if (!leaves.empty()) {
        nodes.push_back(Node{static_cast<std::int32_t>(leaves[uniform(rng, 0, leaves.size() - 1)]), 0});
      } else {
        nodes.push_back(Node{-1, 0});  // caller guarantees arity>0 or constants
      }
      --open;
    } else {
      auto g = inner[uniform(rng, 0, static_cast<std::uint32_t>(inner.size() - 1))];
      nodes.push_back(Node{static_cast<std::int32_t>(g), sig.at(g).arity});
      open += sig.at(g).arity - 1;
    }
  }
  return Term(arity, std::move(nodes));
}

inline FinMap random_map(Rng& rng, std::uint32_t dom, std::uint32_t cod) {
  std::vector<std::uint32_t> t(dom);
  for (auto& v : t) v = uniform(rng, 1, cod);
  return FinMap(cod, std::move(t));
}

inline FinMap random_bijection(Rng& rng, std::uint32_t n) {
  std::vector<std::uint32_t> t(n);
  for (std::uint32_t i = 0; i < n; ++i) t[i] = i + 1;
  std::shuffle(t.begin(), t.end(), rng);
  return FinMap(n, std::move(t));
}

/// An element of End(X)(n) for X = {0..carrier-1}, as a full table.
struct EndFn {
  std::uint32_t carrier = 0;
  std::uint32_t arity = 0;
  std::vector<std::uint32_t> table;

  std::uint32_t operator()(const std::vector<std::uint32_t>& xs) const {
    std::size_t idx = 0;
    for (auto x : xs) idx = idx * carrier + x;
    return table[idx];
  }
  bool operator==(const EndFn&) const = default;
};

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

inline std::vector<std::uint32_t> decode(std::size_t idx, std::uint32_t carrier, std::uint32_t n) {
  std::vector<std::uint32_t> xs(n);
  for (std::uint32_t i = n; i-- > 0;) {
    xs[i] = static_cast<std::uint32_t>(idx % carrier);
    idx /= carrier;
  }
  return xs;
}

inline EndFn random_endfn(Rng& rng, std::uint32_t carrier, std::uint32_t arity) {
  EndFn f{carrier, arity, std::vector<std::uint32_t>(ipow(carrier, arity))};
  for (auto& v : f.table) v = uniform(rng, 0, carrier - 1);
  return f;
}

/// gamma in End(X): (x_1..x_N) |-> w(w_1(block 1), ..., w_k(block k)).
inline EndFn end_gamma(const EndFn& w, const std::vector<EndFn>& args) {
  std::uint32_t total = 0;
  for (const auto& a : args) total += a.arity;
  EndFn out{w.carrier, total, std::vector<std::uint32_t>(ipow(w.carrier, total))};
  for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
    auto xs = decode(idx, w.carrier, total);
    std::vector<std::uint32_t> inner;
    std::size_t off = 0;
    for (const auto& a : args) {
      std::vector<std::uint32_t> block(xs.begin() + static_cast<std::ptrdiff_t>(off),
                                       xs.begin() + static_cast<std::ptrdiff_t>(off + a.arity));
      inner.push_back(a(block));
      off += a.arity;
    }
    out.table[idx] = w(inner);
  }
  return out;
}

/// w_f(x_1..x_l) = w(x_f(1), ..., x_f(k)).
inline EndFn end_act(const EndFn& w, const FinMap& f) {
  EndFn out{w.carrier, f.cod_size(), std::vector<std::uint32_t>(ipow(w.carrier, f.cod_size()))};
  for (std::size_t idx = 0; idx < out.table.size(); ++idx) {
    auto xs = decode(idx, w.carrier, f.cod_size());
    std::vector<std::uint32_t> ys;
    for (auto v : f.table()) ys.push_back(xs[v - 1]);
    out.table[idx] = w(ys);
  }
  return out;
}

}  // namespace cohere::testing
