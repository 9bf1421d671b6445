#pragma once

// JSON encodings used by the command-line tool.

#include <json.hpp>

#include <string>
#include <vector>

#include "cohere/cobordism.hpp"
#include "cohere/coherence.hpp"
#include "cohere/strictify.hpp"
#include "cohere/two_theory.hpp"

namespace cohere::cli {

using Json = nlohmann::ordered_json;

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + what + "' has the wrong type");
  }
}

// Paths

inline Json to_json(const Signature& sig, const CoherenceStep& s) {
  return Json{{"position", s.position},
              {"before", to_string(sig, s.before)},
              {"after", to_string(sig, s.after)},
              {"relabel", s.relabel.to_string()}};
}

inline Json to_json(const Signature& sig, const CoherencePath& p) {
  Json steps = Json::array();
  for (const auto& s : p.steps) steps.push_back(to_json(sig, s));
  return Json{{"source", to_string(sig, p.source)}, {"target", to_string(sig, p.target)}, {"steps", steps}};
}

inline std::vector<CoherenceStep> steps_from_json(const Signature& sig, const Json& j) {
  if (!j.is_array()) throw ParseError("a path script is a JSON list of steps");
  std::vector<CoherenceStep> out;
  for (const auto& s : j) {
    auto relabel = FinMap::parse(as<std::string>(field(s, "relabel"), "relabel"));
    const auto k = relabel.dom_size();
    out.push_back(CoherenceStep{as<Position>(field(s, "position"), "position"),
                                parse_term(sig, as<std::string>(field(s, "before"), "before"), k),
                                parse_term(sig, as<std::string>(field(s, "after"), "after"), k), relabel});
  }
  return out;
}

inline Json to_json(const StrandMap& m) { return Json{{"monomials", m.mono}, {"factors", m.factor}}; }

// Symmetric monoidal tables

inline Json to_json(const Category& c) {
  Json mors = Json::array();
  for (const auto& f : c.morphisms) mors.push_back(Json{{"name", f.name}, {"src", f.src}, {"tgt", f.tgt}});
  Json comp = Json::array();
  for (const auto& [gf, h] : c.composition_table()) comp.push_back(Json::array({gf.first, gf.second, h}));
  return Json{{"objects", c.objects}, {"morphisms", mors}, {"identity", c.identity}, {"compose", comp}};
}

inline Category category_from_json(const Json& j) {
  Category c;
  for (const auto& o : field(j, "objects")) c.add_object(as<std::string>(o, "objects"));
  const auto n = static_cast<std::uint32_t>(c.num_objects());
  for (const auto& f : field(j, "morphisms")) {
    auto src = as<std::uint32_t>(field(f, "src"), "src"), tgt = as<std::uint32_t>(field(f, "tgt"), "tgt");
    if (src >= n || tgt >= n) throw ParseError("morphism endpoint out of range");
    c.add_morphism(as<std::string>(field(f, "name"), "name"), src, tgt);
  }
  const auto m = static_cast<std::uint32_t>(c.num_morphisms());
  auto ids = as<std::vector<std::uint32_t>>(field(j, "identity"), "identity");
  if (ids.size() != n) throw ParseError("one identity per object expected");
  for (std::uint32_t x = 0; x < n; ++x) {
    if (ids[x] >= m) throw ParseError("identity out of range");
    c.set_identity(x, ids[x]);
  }
  for (const auto& row : field(j, "compose")) {
    auto t = as<std::vector<std::uint32_t>>(row, "compose");
    if (t.size() != 3 || t[0] >= m || t[1] >= m || t[2] >= m) throw ParseError("compose rows are [g, f, g after f]");
    c.set_compose(t[0], t[1], t[2]);
  }
  return c;
}

namespace detail {

inline Json square(const std::vector<std::uint32_t>& flat, std::uint32_t n) {
  Json rows = Json::array();
  for (std::uint32_t a = 0; a < n; ++a)
    rows.push_back(std::vector<std::uint32_t>(flat.begin() + a * n, flat.begin() + (a + 1) * n));
  return rows;
}

inline std::vector<std::uint32_t> flatten(const Json& j, std::uint32_t n, std::uint32_t depth, std::uint32_t bound,
                                          const char* what) {
  std::vector<std::uint32_t> out;
  auto rec = [&](auto&& self, const Json& x, std::uint32_t d) -> void {
    if (d == 0) {
      auto v = as<std::uint32_t>(x, what);
      if (v >= bound) throw ParseError(std::string(what) + " entry out of range");
      out.push_back(v);
      return;
    }
    if (!x.is_array() || x.size() != n)
      throw ParseError(std::string(what) + " must be nested lists of length " + std::to_string(n));
    for (const auto& y : x) self(self, y, d - 1);
  };
  rec(rec, j, depth);
  return out;
}

}  // namespace detail

inline Json to_json(const FinSymMonCat& c) {
  auto j = to_json(c.cat);
  const auto n = c.n();
  Json alpha = Json::array();
  for (std::uint32_t a = 0; a < n; ++a) {
    Json plane = Json::array();
    for (std::uint32_t b = 0; b < n; ++b) {
      std::vector<std::uint32_t> row;
      for (std::uint32_t d = 0; d < n; ++d) row.push_back(c.assoc(a, b, d));
      plane.push_back(row);
    }
    alpha.push_back(plane);
  }
  j["unit"] = c.unit;
  j["tensor_objects"] = detail::square(c.tensor_obj, n);
  j["tensor_morphisms"] = detail::square(c.tensor_mor, c.m());
  j["associator"] = alpha;
  j["left_unitor"] = c.lambda;
  j["right_unitor"] = c.rho;
  j["symmetry"] = detail::square(c.tau, n);
  return j;
}

inline FinSymMonCat sym_mon_from_json(const Json& j) {
  FinSymMonCat c;
  c.cat = category_from_json(j);
  const auto n = c.n(), m = c.m();
  c.unit = as<std::uint32_t>(field(j, "unit"), "unit");
  if (c.unit >= n) throw ParseError("unit out of range");
  c.tensor_obj = detail::flatten(field(j, "tensor_objects"), n, 2, n, "tensor_objects");
  c.tensor_mor = detail::flatten(field(j, "tensor_morphisms"), m, 2, m, "tensor_morphisms");
  c.alpha = detail::flatten(field(j, "associator"), n, 3, m, "associator");
  c.lambda = detail::flatten(field(j, "left_unitor"), n, 1, m, "left_unitor");
  c.rho = detail::flatten(field(j, "right_unitor"), n, 1, m, "right_unitor");
  c.tau = detail::flatten(field(j, "symmetry"), n, 2, m, "symmetry");
  return c;
}

inline Json to_json(const Strictification& s) {
  const auto& a = s.algebra;
  Json sums = Json::array();
  for (const auto& x : a.sums) sums.push_back(sum_name(x));
  Json plus_obj = Json::array(), plus_mor = Json::array();
  for (const auto& [xy, z] : a.plus_obj) plus_obj.push_back(Json::array({xy.first, xy.second, z}));
  for (const auto& [fg, h] : a.plus_mor) plus_mor.push_back(Json::array({fg.first, fg.second, h}));
  auto cat = to_json(a.cat);
  cat["sums"] = sums;
  cat["length_cap"] = a.length_cap;
  cat["plus_objects"] = plus_obj;
  cat["plus_morphisms"] = plus_mor;
  return Json{{"classes", s.order.representative},
              {"strict", cat},
              {"functor", Json{{"on_objects", s.functor.on_objects}, {"on_morphisms", s.functor.on_morphisms}}}};
}

// Cobordisms

inline Json to_json(const Cobordism& x) {
  Json comps = Json::array();
  for (const auto& c : x.components()) comps.push_back(Json{{"in", c.in}, {"out", c.out}, {"genus", c.genus}});
  return Json{{"inbound", x.inbound()}, {"outbound", x.outbound()}, {"components", comps}};
}

inline Cobordism cobordism_from_json(const Json& j) {
  std::vector<Component> comps;
  for (const auto& c : field(j, "components"))
    comps.push_back(Component{as<std::vector<std::string>>(field(c, "in"), "in"),
                              as<std::vector<std::string>>(field(c, "out"), "out"),
                              c.contains("genus") ? as<std::uint32_t>(c.at("genus"), "genus") : 0});
  return Cobordism::make(as<std::vector<std::string>>(field(j, "inbound"), "inbound"),
                         as<std::vector<std::string>>(field(j, "outbound"), "outbound"), std::move(comps));
}

// 2-terms

inline Json to_json(const IndexWord& w) { return Json{{"in", to_string(w.in)}, {"out", to_string(w.out)}}; }

inline Json to_json(const TwoTyping& t) {
  Json sources = Json::object();
  for (const auto& [i, w] : t.sources) sources[std::to_string(i)] = to_json(w);
  return Json{{"sources", sources}, {"target", to_json(t.target)}};
}

inline Json to_json(const TwoNF& nf) { return Json{{"slots", nf.slots}, {"cancel", to_string(nf.cancel)}}; }

}  // namespace cohere::cli
