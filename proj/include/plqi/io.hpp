#pragma once

// Map-definition documents (JSON with exact rational strings):
//
//   {
//     "name": "g",
//     "value_at_zero": "0",
//     "head": [{"break": "0", "slope": "1/2"}],
//     "tail": {
//       "ratio": "2", "anchor": "1",
//       "pieces": [{"pos": {"geo": "1", "const": "0"},
//                   "slope": {"c0": "1", "c1": "-1/4", "q": "1/2"}}]
//     }
//   }
//
// c1 and q may be omitted (constant slope). Only maps with a block rule
// can be written.

#include "plqi/plmap.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace plqi {

namespace detail {

inline Rat field_rat(const nlohmann::json &obj, const char *key, std::optional<Rat> fallback = std::nullopt)
{
  if (!obj.is_object())
    throw ParseError(std::string("expected an object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback)
      return *fallback;
    throw ParseError(std::string("missing field '") + key + "'");
  }
  if (it->is_string())
    return parse_rat(it->get<std::string>());
  if (it->is_number_integer())
    return Rat(it->get<long>());
  throw ParseError(std::string("field '") + key + "' must be a rational string");
}

inline const nlohmann::json &field(const nlohmann::json &obj, const char *key)
{
  if (!obj.is_object() || !obj.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

} // namespace detail

inline nlohmann::json to_json(const PLQMap &map)
{
  if (!map.has_exact_tail())
    throw NoClosedForm();
  nlohmann::json j;
  j["name"] = map.name();
  j["value_at_zero"] = to_string(map.head().value_at_zero);
  j["head"] = nlohmann::json::array();
  for (auto &p : map.head().pieces)
    j["head"].push_back({{"break", to_string(p.start)}, {"slope", to_string(p.slope)}});
  const auto &t = map.tail();
  nlohmann::json tail;
  tail["ratio"] = to_string(t.ratio);
  tail["anchor"] = to_string(t.anchor);
  tail["pieces"] = nlohmann::json::array();
  for (auto &p : t.pieces) {
    nlohmann::json slope{{"c0", to_string(p.slope.c0)}};
    if (!p.slope.constant()) {
      slope["c1"] = to_string(p.slope.c1);
      slope["q"] = to_string(p.slope.q);
    }
    tail["pieces"].push_back({{"pos", {{"geo", to_string(p.pos.geo)}, {"const", to_string(p.pos.cst)}}}, {"slope", slope}});
  }
  j["tail"] = tail;
  return j;
}

inline std::string emit_map(const PLQMap &map) { return to_json(map).dump(2) + "\n"; }

/// Structural errors surface as ParseError; mathematical ones (a
/// discontinuous or non-monotone rule) as the MapError subclasses.
inline PLQMap parse_map(const std::string &text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  if (!j.is_object())
    throw ParseError("map document must be an object");
  std::string name = j.value("name", std::string());
  FinitePL head{{}, detail::field_rat(j, "value_at_zero", Rat(0))};
  const auto &h = detail::field(j, "head");
  if (!h.is_array() || h.empty())
    throw ParseError("'head' must be a nonempty list");
  for (auto &p : h)
    head.pieces.push_back({detail::field_rat(p, "break"), detail::field_rat(p, "slope")});
  const auto &t = detail::field(j, "tail");
  TailBlockRule tail{detail::field_rat(t, "ratio"), detail::field_rat(t, "anchor"), {}};
  const auto &ps = detail::field(t, "pieces");
  if (!ps.is_array() || ps.empty())
    throw ParseError("'tail.pieces' must be a nonempty list");
  for (auto &p : ps) {
    const auto &pos = detail::field(p, "pos");
    const auto &sl = detail::field(p, "slope");
    tail.pieces.push_back({{detail::field_rat(pos, "geo"), detail::field_rat(pos, "const")},
                           SlopeExpr::canonical({detail::field_rat(sl, "c0"), detail::field_rat(sl, "c1", Rat(0)),
                                                 detail::field_rat(sl, "q", Rat(0))})});
  }
  return PLQMap::from_parts(std::move(head), std::move(tail), std::move(name));
}

inline PLQMap load_map(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

} // namespace plqi
