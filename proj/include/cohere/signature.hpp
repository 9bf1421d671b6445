#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cohere/error.hpp"

namespace cohere {

struct Generator {
  std::string symbol;
  std::uint32_t arity = 0;
  bool operator==(const Generator&) const = default;
};

/// A named list of operation symbols with arities. Generator ids are indices
/// into the list.
class Signature {
 public:
  Signature() = default;
  Signature(std::string name, std::vector<Generator> generators)
      : name_(std::move(name)), generators_(std::move(generators)) {
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      const auto& s = generators_[i].symbol;
      if (s.empty() || s[0] == 'x' || s.find_first_of(" ()[]\t\n") != std::string::npos)
        throw ParseError("invalid generator symbol '" + s + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (generators_[j].symbol == s) throw ParseError("duplicate generator '" + s + "'");
    }
  }

  static Signature cmon() { return Signature("cmon", {{"plus", 2}, {"zero", 0}}); }
  static Signature csr() {
    return Signature("csr", {{"plus", 2}, {"times", 2}, {"zero", 0}, {"one", 0}});
  }

  /// Config format: one `symbol arity` pair per line; `#` starts a comment.
  static Signature parse_config(std::string name, std::string_view text) {
    std::vector<Generator> gens;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      std::string sym;
      if (!(ls >> sym)) continue;
      long long ar = -1;
      std::string rest;
      if (!(ls >> ar) || ar < 0 || (ls >> rest))
        throw ParseError("signature line " + std::to_string(lineno) + ": expected 'symbol arity'");
      gens.push_back({sym, static_cast<std::uint32_t>(ar)});
    }
    return Signature(std::move(name), std::move(gens));
  }

  const std::string& name() const { return name_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const Generator& at(std::uint32_t id) const { return generators_.at(id); }
  std::uint32_t size() const { return static_cast<std::uint32_t>(generators_.size()); }

  std::optional<std::uint32_t> find(std::string_view symbol) const {
    for (std::size_t i = 0; i < generators_.size(); ++i)
      if (generators_[i].symbol == symbol) return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  std::uint32_t id(std::string_view symbol) const {
    if (auto i = find(symbol)) return *i;
    throw ParseError("unknown generator '" + std::string(symbol) + "' in signature " + name_);
  }

  bool operator==(const Signature&) const = default;

 private:
  std::string name_;
  std::vector<Generator> generators_;
};

}  // namespace cohere
