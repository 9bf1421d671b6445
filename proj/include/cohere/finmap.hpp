#pragma once

// Finite sets {1..n} and the (not necessarily order-preserving) maps between
// them, plus the two block constructions used by the theory axioms.

#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cohere/error.hpp"

namespace cohere {

class FinMap {
 public:
  /// The empty map 0 -> 0.
  FinMap() = default;

  /// Entries are 1-based and must lie in 1..cod.
  FinMap(std::uint32_t cod, std::vector<std::uint32_t> table)
      : cod_(cod), table_(std::move(table)) {
    for (auto v : table_)
      if (v < 1 || v > cod_)
        throw ArityError("finmap entry " + std::to_string(v) + " outside 1.." +
                         std::to_string(cod_));
  }

  static FinMap identity(std::uint32_t n) {
    std::vector<std::uint32_t> t(n);
    std::iota(t.begin(), t.end(), 1u);
    return FinMap(n, std::move(t));
  }

  /// The order-preserving inclusion of {1..n} into {1..n+k} at an offset.
  static FinMap shift(std::uint32_t n, std::uint32_t offset, std::uint32_t cod) {
    std::vector<std::uint32_t> t(n);
    for (std::uint32_t i = 0; i < n; ++i) t[i] = offset + i + 1;
    return FinMap(cod, std::move(t));
  }

  std::uint32_t dom_size() const { return static_cast<std::uint32_t>(table_.size()); }
  std::uint32_t cod_size() const { return cod_; }
  std::span<const std::uint32_t> table() const { return table_; }

  /// 1-based application.
  std::uint32_t operator()(std::uint32_t i) const {
    if (i < 1 || i > table_.size()) throw ArityError("finmap argument out of range");
    return table_[i - 1];
  }

  bool operator==(const FinMap&) const = default;
  auto operator<=>(const FinMap&) const = default;

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < table_.size(); ++i) os << (i ? "," : "") << table_[i];
    os << "]:" << table_.size() << "->" << cod_;
    return os.str();
  }

  /// Parses `[a,b,c]:m->n`. The `:m->n` suffix may be omitted, in which case
  /// the codomain is the largest entry.
  static FinMap parse(std::string_view text);

 private:
  std::uint32_t cod_ = 0;
  std::vector<std::uint32_t> table_;
};

/// g after f: result(i) = g(f(i)).
inline FinMap compose(const FinMap& f, const FinMap& g) {
  if (f.cod_size() != g.dom_size())
    throw ArityError("cannot compose " + f.to_string() + " with " + g.to_string());
  std::vector<std::uint32_t> t(f.dom_size());
  for (std::uint32_t i = 0; i < f.dom_size(); ++i) t[i] = g(f.table()[i]);
  return FinMap(g.cod_size(), std::move(t));
}

/// Places maps side by side, offsetting domains and codomains left to right.
inline FinMap juxtapose(std::span<const FinMap> gs) {
  std::vector<std::uint32_t> t;
  std::uint32_t cod = 0;
  for (const auto& g : gs) {
    for (auto v : g.table()) t.push_back(v + cod);
    cod += g.cod_size();
  }
  return FinMap(cod, std::move(t));
}

/// For f: k -> l and block sizes n_1..n_l, the map
/// {1..n_f(1)+..+n_f(k)} -> {1..n_1+..+n_l} sending the i-th source block
/// onto target block f(i), preserving order inside the block.
inline FinMap block_map(const FinMap& f, std::span<const std::uint32_t> arities) {
  if (f.cod_size() != arities.size())
    throw ArityError("block_map: " + std::to_string(arities.size()) +
                     " block sizes for codomain " + std::to_string(f.cod_size()));
  std::vector<std::uint32_t> offset(arities.size() + 1, 0);
  for (std::size_t j = 0; j < arities.size(); ++j) offset[j + 1] = offset[j] + arities[j];
  std::vector<std::uint32_t> t;
  for (auto target : f.table())
    for (std::uint32_t p = 1; p <= arities[target - 1]; ++p) t.push_back(offset[target - 1] + p);
  return FinMap(offset.back(), std::move(t));
}

inline bool is_bijection(const FinMap& f) {
  if (f.dom_size() != f.cod_size()) return false;
  std::vector<bool> seen(f.cod_size() + 1, false);
  for (auto v : f.table()) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline FinMap inverse(const FinMap& f) {
  if (!is_bijection(f)) throw ArityError("inverse of non-bijection " + f.to_string());
  std::vector<std::uint32_t> t(f.dom_size());
  for (std::uint32_t i = 0; i < f.dom_size(); ++i) t[f.table()[i] - 1] = i + 1;
  return FinMap(f.dom_size(), std::move(t));
}

inline FinMap FinMap::parse(std::string_view text) {
  auto fail = [&] { return ParseError("bad finmap '" + std::string(text) + "'"); };
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  auto number = [&]() -> std::uint32_t {
    skip();
    if (i >= text.size() || text[i] < '0' || text[i] > '9') throw fail();
    std::uint64_t v = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(text[i++] - '0');
      if (v > 0xFFFFFFFFull) throw fail();
    }
    return static_cast<std::uint32_t>(v);
  };
  skip();
  if (i >= text.size() || text[i] != '[') throw fail();
  ++i;
  std::vector<std::uint32_t> table;
  skip();
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    for (;;) {
      table.push_back(number());
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ']') {
        ++i;
        break;
      }
      throw fail();
    }
  }
  skip();
  std::uint32_t cod = 0;
  for (auto v : table) cod = std::max(cod, v);
  if (i < text.size()) {
    if (text[i] != ':') throw fail();
    ++i;
    auto dom = number();
    skip();
    if (text.substr(i, 2) != "->") throw fail();
    i += 2;
    cod = number();
    skip();
    if (i != text.size() || dom != table.size()) throw fail();
  }
  return FinMap(cod, std::move(table));
}

}  // namespace cohere
