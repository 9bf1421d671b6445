#pragma once

// Small symmetric monoidal categories used as strictification inputs.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cohere/strictify.hpp"

namespace cohere::fixtures {

/// Lines graded by a finite commutative monoid (`op`, unit 0) with
/// automorphism group of order 1 or 2 (signs) and symmetry sign
/// `odd(g, h)`. All other structure maps are identities.
inline FinSymMonCat graded_lines(std::uint32_t grades, const std::vector<std::uint32_t>& op, std::uint32_t signs,
                                 const std::function<bool(std::uint32_t, std::uint32_t)>& odd) {
  FinSymMonCat c;
  auto& k = c.cat;
  for (std::uint32_t g = 0; g < grades; ++g) k.add_object("L" + std::to_string(g));
  auto m = [&](std::uint32_t g, std::uint32_t e) { return g * signs + e; };
  for (std::uint32_t g = 0; g < grades; ++g)
    for (std::uint32_t e = 0; e < signs; ++e) k.add_morphism((e ? "neg" : "id") + std::string("_L") + std::to_string(g), g, g);
  for (std::uint32_t g = 0; g < grades; ++g) {
    k.set_identity(g, m(g, 0));
    for (std::uint32_t e1 = 0; e1 < signs; ++e1)
      for (std::uint32_t e2 = 0; e2 < signs; ++e2) k.set_compose(m(g, e1), m(g, e2), m(g, e1 ^ e2));
  }
  const auto n = grades, nm = grades * signs;
  c.unit = 0;
  c.tensor_obj = op;
  c.tensor_mor.resize(std::size_t{nm} * nm);
  for (std::uint32_t g = 0; g < n; ++g)
    for (std::uint32_t e = 0; e < signs; ++e)
      for (std::uint32_t h = 0; h < n; ++h)
        for (std::uint32_t e2 = 0; e2 < signs; ++e2) c.tensor_mor[m(g, e) * nm + m(h, e2)] = m(op[g * n + h], e ^ e2);
  for (std::uint32_t a = 0; a < n; ++a) {
    c.lambda.push_back(m(a, 0));
    c.rho.push_back(m(a, 0));
    for (std::uint32_t b = 0; b < n; ++b) {
      c.tau.push_back(m(op[a * n + b], signs > 1 && odd(a, b) ? 1 : 0));
      for (std::uint32_t d = 0; d < n; ++d) c.alpha.push_back(m(op[op[a * n + b] * n + d], 0));
    }
  }
  return c;
}

/// Addition table of Z/2 x ... x Z/2 (`bits` factors) on bitmasks.
inline std::vector<std::uint32_t> xor_table(std::uint32_t bits) {
  std::uint32_t n = 1u << bits;
  std::vector<std::uint32_t> op;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) op.push_back(a ^ b);
  return op;
}

/// One object, one morphism.
inline FinSymMonCat trivial() {
  return graded_lines(1, {0}, 1, [](auto, auto) { return false; });
}

/// The discrete category on {0..cap} with truncated addition.
inline FinSymMonCat capped_monoid(std::uint32_t cap) {
  std::vector<std::uint32_t> op;
  for (std::uint32_t a = 0; a <= cap; ++a)
    for (std::uint32_t b = 0; b <= cap; ++b) op.push_back(std::min(a + b, cap));
  return graded_lines(cap + 1, op, 1, [](auto, auto) { return false; });
}

/// Z/2-graded lines with sign automorphisms and trivial symmetry.
inline FinSymMonCat sign_lines() {
  return graded_lines(2, xor_table(1), 2, [](auto, auto) { return false; });
}

/// Z/2-graded lines with the Koszul sign: the switch of two odd lines is -1.
inline FinSymMonCat super_lines() {
  return graded_lines(2, xor_table(1), 2, [](auto a, auto b) { return (a & b) != 0; });
}

/// (Z/2)^2-graded lines whose symmetry sign is the alternating form
/// g1 h2 + g2 h1, nontrivial on distinct odd lines but trivial on equal ones.
inline FinSymMonCat klein_lines() {
  return graded_lines(4, xor_table(2), 2, [](std::uint32_t a, std::uint32_t b) {
    return (((a & 1) * ((b >> 1) & 1)) ^ (((a >> 1) & 1) * (b & 1))) != 0;
  });
}

/// Objects 0..n-1 with exactly one morphism between any two, tensor = max.
inline FinSymMonCat indiscrete(std::uint32_t n) {
  FinSymMonCat c;
  auto& k = c.cat;
  for (std::uint32_t a = 0; a < n; ++a) k.add_object("O" + std::to_string(a));
  auto m = [&](std::uint32_t a, std::uint32_t b) { return a * n + b; };
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) k.add_morphism("O" + std::to_string(a) + "->O" + std::to_string(b), a, b);
  for (std::uint32_t a = 0; a < n; ++a) {
    k.set_identity(a, m(a, a));
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t d = 0; d < n; ++d) k.set_compose(m(b, d), m(a, b), m(a, d));
  }
  c.unit = 0;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) c.tensor_obj.push_back(std::max(a, b));
  for (std::uint32_t f = 0; f < n * n; ++f)
    for (std::uint32_t g = 0; g < n * n; ++g)
      c.tensor_mor.push_back(m(std::max(f / n, g / n), std::max(f % n, g % n)));
  for (std::uint32_t a = 0; a < n; ++a) {
    c.lambda.push_back(m(a, a));
    c.rho.push_back(m(a, a));
    for (std::uint32_t b = 0; b < n; ++b) {
      c.tau.push_back(m(std::max(a, b), std::max(a, b)));
      for (std::uint32_t d = 0; d < n; ++d) c.alpha.push_back(m(std::max({a, b, d}), std::max({a, b, d})));
    }
  }
  return c;
}

/// An equivalent, non-skeletal copy: every object appears `copies` times,
/// all copies isomorphic; tensors land in copy 0.
inline FinSymMonCat inflate(const FinSymMonCat& base, std::uint32_t copies) {
  FinSymMonCat c;
  const auto& b = base.cat;
  auto& k = c.cat;
  const auto n = base.n(), m = base.m();
  auto ob = [&](std::uint32_t a, std::uint32_t i) { return a * copies + i; };
  auto mo = [&](std::uint32_t f, std::uint32_t i, std::uint32_t j) { return (f * copies + i) * copies + j; };
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t i = 0; i < copies; ++i) k.add_object(b.objects[a] + (i ? "'" + std::to_string(i) : ""));
  for (std::uint32_t f = 0; f < m; ++f)
    for (std::uint32_t i = 0; i < copies; ++i)
      for (std::uint32_t j = 0; j < copies; ++j)
        k.add_morphism(b.mor(f).name + "[" + std::to_string(i) + std::to_string(j) + "]", ob(b.mor(f).src, i),
                       ob(b.mor(f).tgt, j));
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t i = 0; i < copies; ++i) k.set_identity(ob(a, i), mo(b.id(a), i, i));
  for (const auto& [gf, h] : b.composition_table())
    for (std::uint32_t i = 0; i < copies; ++i)
      for (std::uint32_t j = 0; j < copies; ++j)
        for (std::uint32_t l = 0; l < copies; ++l) k.set_compose(mo(gf.first, j, l), mo(gf.second, i, j), mo(h, i, l));
  c.unit = ob(base.unit, 0);
  const auto cn = n * copies, cm = m * copies * copies;
  for (std::uint32_t x = 0; x < cn; ++x)
    for (std::uint32_t y = 0; y < cn; ++y) c.tensor_obj.push_back(ob(base.obj(x / copies, y / copies), 0));
  for (std::uint32_t f = 0; f < cm; ++f)
    for (std::uint32_t g = 0; g < cm; ++g) c.tensor_mor.push_back(mo(base.mor(f / (copies * copies), g / (copies * copies)), 0, 0));
  for (std::uint32_t x = 0; x < cn; ++x) {
    c.lambda.push_back(mo(base.lambda[x / copies], 0, x % copies));
    c.rho.push_back(mo(base.rho[x / copies], 0, x % copies));
    for (std::uint32_t y = 0; y < cn; ++y) {
      c.tau.push_back(mo(base.swap(x / copies, y / copies), 0, 0));
      for (std::uint32_t z = 0; z < cn; ++z) c.alpha.push_back(mo(base.assoc(x / copies, y / copies, z / copies), 0, 0));
    }
  }
  return c;
}

struct Named {
  std::string name;
  FinSymMonCat category;
  bool strictifiable;
};

/// The fixture set: every entry is a coherent symmetric monoidal category;
/// the last one needs a nontrivial switch on equal summands.
inline std::vector<Named> all() {
  return {
      {"trivial", trivial(), true},
      {"capped-monoid", capped_monoid(3), true},
      {"unit-duplicate", indiscrete(2), true},
      {"indiscrete", indiscrete(3), true},
      {"sign-lines", sign_lines(), true},
      {"klein-lines", klein_lines(), true},
      {"non-skeletal", inflate(sign_lines(), 2), true},
      {"super-lines", super_lines(), false},
  };
}

}  // namespace cohere::fixtures
