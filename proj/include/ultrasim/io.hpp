#pragma once

/** \file
 * \brief JSON and CSV input, JSON output, and parsers for everything the
 * CLI prints.
 *
 * Mapping document:
 *   {"points": [...], "values": [...]?, "table": [[...]...],
 *    "poset": {"elements": [...], "leq_pairs": [[a, b], ...]}?}
 * Table entries, values and poset elements may be strings or numbers;
 * numeric ones are canonicalized ("1.50" and "3/2" both become "3/2").
 */

#include <json.hpp>

#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ultrasim/certificate.hpp"
#include "ultrasim/decision.hpp"
#include "ultrasim/error.hpp"
#include "ultrasim/mapping.hpp"
#include "ultrasim/orders.hpp"
#include "ultrasim/rational.hpp"
#include "ultrasim/similarity.hpp"

namespace ultrasim {

using Json = nlohmann::ordered_json;

struct MappingDocument {
  FiniteMapping mapping;
  std::optional<FinitePoset> poset;
};

namespace detail {

inline std::string label_from_json(const Json& j, const char* where) {
  if (j.is_string()) return canonical_label(j.get<std::string>());
  if (j.is_number_integer() || j.is_number_unsigned() || j.is_number_float())
    return canonical_label(j.dump());
  throw InputError(std::string(where) + ": expected a string or number, got " + j.dump());
}

inline std::vector<std::string> string_array(const Json& j, const char* where, bool canonical) {
  if (!j.is_array()) throw InputError(std::string(where) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (canonical) {
      out.push_back(label_from_json(e, where));
    } else {
      if (!e.is_string()) throw InputError(std::string(where) + " entries must be strings");
      out.push_back(e.get<std::string>());
    }
  }
  return out;
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline Json parse_json(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

inline FinitePoset poset_from_json(const Json& j) {
  auto elements = detail::string_array(detail::field(j, "elements"), "poset elements", true);
  std::vector<std::pair<std::string, std::string>> pairs;
  if (j.contains("leq_pairs")) {
    const Json& lp = j.at("leq_pairs");
    if (!lp.is_array()) throw InputError("leq_pairs must be an array");
    for (const auto& p : lp) {
      if (!p.is_array() || p.size() != 2) throw InputError("each leq pair must have two entries");
      pairs.emplace_back(detail::label_from_json(p[0], "leq pair"), detail::label_from_json(p[1], "leq pair"));
    }
  }
  return FinitePoset::from_pairs(std::move(elements), pairs);
}

/// Non-reflexive pairs of the order, in index order.
inline Json poset_to_json(const FinitePoset& p) {
  Json pairs = Json::array();
  for (const auto& [a, b] : p.strict_pairs()) pairs.push_back({p.label(a), p.label(b)});
  return Json{{"elements", p.elements()}, {"leq_pairs", std::move(pairs)}};
}

inline MappingDocument mapping_document_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("mapping document must be a JSON object");
  auto points = detail::string_array(detail::field(j, "points"), "points", false);
  const Json& tj = detail::field(j, "table");
  if (!tj.is_array()) throw InputError("table must be an array of rows");
  std::vector<std::vector<std::string>> table;
  for (const auto& row : tj) table.push_back(detail::string_array(row, "table row", true));
  std::optional<std::vector<std::string>> values;
  if (j.contains("values")) values = detail::string_array(j.at("values"), "values", true);
  MappingDocument doc{FiniteMapping::from_labels(std::move(points), table, std::move(values)), std::nullopt};
  if (j.contains("poset")) doc.poset = poset_from_json(j.at("poset"));
  return doc;
}

inline Json mapping_to_json(const FiniteMapping& m, const std::optional<FinitePoset>& poset = std::nullopt) {
  Json table = Json::array();
  for (std::size_t x = 0; x < m.size(); ++x) {
    Json row = Json::array();
    for (std::size_t y = 0; y < m.size(); ++y) row.push_back(m.label_at(x, y));
    table.push_back(std::move(row));
  }
  Json j{{"points", m.points()}, {"values", m.values()}, {"table", std::move(table)}};
  if (poset) j["poset"] = poset_to_json(*poset);
  return j;
}

/// CSV with a header row of point names (first cell ignored) and one row
/// per point starting with its name. Names must match the header order.
inline MappingDocument mapping_document_from_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      std::string_view v = detail::trim(cell);
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
      cells.emplace_back(v);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    rows.push_back(split(line));
  }
  if (rows.empty()) throw InputError("CSV input is empty");
  std::vector<std::string> points(rows[0].begin() + (rows[0].empty() ? 0 : 1), rows[0].end());
  if (rows.size() != points.size() + 1)
    throw InputError("CSV has " + std::to_string(rows.size() - 1) + " data rows for " +
                     std::to_string(points.size()) + " points");
  std::vector<std::vector<std::string>> table;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].empty() || rows[i][0] != points[i - 1])
      throw InputError("CSV row " + std::to_string(i) + " does not start with point '" + points[i - 1] + "'");
    std::vector<std::string> entries;
    for (std::size_t c = 1; c < rows[i].size(); ++c) entries.push_back(canonical_label(rows[i][c]));
    table.push_back(std::move(entries));
  }
  return {FiniteMapping::from_labels(std::move(points), table), std::nullopt};
}

inline MappingDocument read_mapping_document(std::istream& in, bool csv) {
  if (csv) return mapping_document_from_csv(in);
  return mapping_document_from_json(detail::parse_json(in));
}

// ---------------------------------------------------------------------------
// Realizations

inline Json realization_to_json(const Realization& r) {
  Json assignment = Json::object();
  for (std::size_t v = 0; v < r.value_labels.size(); ++v) assignment[r.value_labels[v]] = to_string(r.assignment[v]);
  Json matrix = Json::array();
  for (const auto& row : r.matrix) {
    Json jr = Json::array();
    for (const auto& q : row) jr.push_back(to_string(q));
    matrix.push_back(std::move(jr));
  }
  return Json{{"kind", kind_name(r.kind)},
              {"points", r.points},
              {"assignment", std::move(assignment)},
              {"matrix", std::move(matrix)}};
}

inline Realization realization_from_json(const Json& j) {
  auto rational = [](const Json& e) {
    if (!e.is_string()) throw InputError("realization entries must be rational strings");
    auto q = parse_rational(e.get<std::string>());
    if (!q) throw InputError("not a rational: " + e.get<std::string>());
    return *q;
  };
  Realization r;
  const std::string kind = detail::field(j, "kind").get<std::string>();
  if (kind == "ultrametric")
    r.kind = RealizedKind::Ultrametric;
  else if (kind == "pseudoultrametric")
    r.kind = RealizedKind::Pseudoultrametric;
  else
    throw InputError("unknown realization kind '" + kind + "'");
  r.points = detail::string_array(detail::field(j, "points"), "points", false);
  for (const auto& [label, q] : detail::field(j, "assignment").items()) {
    r.value_labels.push_back(label);
    r.assignment.push_back(rational(q));
  }
  for (const auto& row : detail::field(j, "matrix")) {
    std::vector<Rational> out;
    for (const auto& e : row) out.push_back(rational(e));
    r.matrix.push_back(std::move(out));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Certificates, rendered with point names and value labels

inline Json certificate_to_json(const Certificate& c, const FiniteMapping& m) {
  auto P = [&](std::size_t x) { return m.points()[x]; };
  auto V = [&](std::size_t v) { return m.values()[v]; };
  struct Visitor {
    decltype(P) pt;
    decltype(V) val;
    Json operator()(const Asymmetry& a) const { return {{"tag", "Asymmetry"}, {"points", {pt(a.x), pt(a.y)}}}; }
    Json operator()(const NonConstantDiagonal& a) const {
      return {{"tag", "NonConstantDiagonal"}, {"points", {pt(a.x), pt(a.y)}}};
    }
    Json operator()(const DiagonalOutsideFiber& a) const {
      return {{"tag", "DiagonalOutsideFiber"}, {"points", {pt(a.x)}}, {"fiber_value", val(a.fiber_value)}};
    }
    Json operator()(const NonCoherentQuadruple& a) const {
      return {{"tag", "NonCoherentQuadruple"},
              {"points", {pt(a.x1), pt(a.x2), pt(a.x3), pt(a.x4)}},
              {"fiber_value", val(a.fiber_value)},
              {"values", {val(a.left_value), val(a.right_value)}}};
    }
    Json operator()(const FiberNotDiagonal& a) const {
      return {{"tag", "FiberNotDiagonal"}, {"points", {pt(a.x), pt(a.y)}}};
    }
    Json operator()(const ScaleneTriple& a) const {
      return {{"tag", "ScaleneTriple"}, {"points", {pt(a.x1), pt(a.x2), pt(a.x3)}}};
    }
    Json operator()(const UCycle& a) const {
      Json values = Json::array(), witnesses = Json::array();
      for (std::size_t v : a.values) values.push_back(val(v));
      for (const auto& t : a.witnesses) witnesses.push_back({pt(t[0]), pt(t[1]), pt(t[2])});
      return {{"tag", "UCycle"}, {"values", std::move(values)}, {"witnesses", std::move(witnesses)}};
    }
  };
  return std::visit(Visitor{P, V}, c);
}

inline Certificate certificate_from_json(const Json& j, const FiniteMapping& m) {
  auto point = [&](const Json& e) {
    const std::string name = e.get<std::string>();
    auto it = std::find(m.points().begin(), m.points().end(), name);
    if (it == m.points().end()) throw InputError("certificate names unknown point '" + name + "'");
    return static_cast<std::size_t>(it - m.points().begin());
  };
  auto value = [&](const Json& e) {
    auto v = m.value_index(detail::label_from_json(e, "certificate value"));
    if (!v) throw InputError("certificate names unknown value " + e.dump());
    return *v;
  };
  auto pts = [&](std::size_t count) {
    const Json& p = detail::field(j, "points");
    if (!p.is_array() || p.size() != count) throw InputError("certificate has wrong number of points");
    std::vector<std::size_t> out;
    for (const auto& e : p) out.push_back(point(e));
    return out;
  };
  const std::string tag = detail::field(j, "tag").get<std::string>();
  if (tag == "Asymmetry") {
    auto p = pts(2);
    return Asymmetry{p[0], p[1]};
  }
  if (tag == "NonConstantDiagonal") {
    auto p = pts(2);
    return NonConstantDiagonal{p[0], p[1]};
  }
  if (tag == "DiagonalOutsideFiber") return DiagonalOutsideFiber{pts(1)[0], value(detail::field(j, "fiber_value"))};
  if (tag == "NonCoherentQuadruple") {
    auto p = pts(4);
    const Json& vs = detail::field(j, "values");
    if (!vs.is_array() || vs.size() != 2) throw InputError("NonCoherentQuadruple needs two values");
    return NonCoherentQuadruple{p[0], p[1], p[2], p[3], value(detail::field(j, "fiber_value")), value(vs[0]),
                                value(vs[1])};
  }
  if (tag == "FiberNotDiagonal") {
    auto p = pts(2);
    return FiberNotDiagonal{p[0], p[1]};
  }
  if (tag == "ScaleneTriple") {
    auto p = pts(3);
    return ScaleneTriple{p[0], p[1], p[2]};
  }
  if (tag == "UCycle") {
    UCycle c;
    for (const auto& v : detail::field(j, "values")) c.values.push_back(value(v));
    for (const auto& w : detail::field(j, "witnesses")) {
      if (!w.is_array() || w.size() != 3) throw InputError("UCycle witness must be a triple");
      c.witnesses.push_back(Triple{point(w[0]), point(w[1]), point(w[2])});
    }
    return c;
  }
  throw InputError("unknown certificate tag '" + tag + "'");
}

// ---------------------------------------------------------------------------
// Similarity witnesses

inline Json witness_to_json(const SimilarityWitness& w, const FiniteMapping& a, const FiniteMapping& b) {
  Json g = Json::object(), f = Json::object();
  for (std::size_t y = 0; y < w.g.size(); ++y) g[b.points()[y]] = a.points()[w.g[y]];
  for (std::size_t v = 0; v < w.f.size(); ++v) f[a.values()[v]] = b.values()[w.f[v]];
  return Json{{"g", std::move(g)}, {"f", std::move(f)}, {"kind", kind_name(w.kind)}};
}

inline SimilarityWitness witness_from_json(const Json& j, const FiniteMapping& a, const FiniteMapping& b) {
  auto index_in = [](const std::vector<std::string>& names, const std::string& s, const char* what) {
    auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end()) throw InputError(std::string("witness names unknown ") + what + " '" + s + "'");
    return static_cast<std::size_t>(it - names.begin());
  };
  SimilarityWitness w;
  w.g.assign(b.size(), 0);
  w.f.assign(a.value_count(), 0);
  const Json& g = detail::field(j, "g");
  const Json& f = detail::field(j, "f");
  if (g.size() != b.size() || f.size() != a.value_count()) throw InputError("witness is not total");
  for (const auto& [y, x] : g.items())
    w.g[index_in(b.points(), y, "point")] = index_in(a.points(), x.get<std::string>(), "point");
  for (const auto& [u, v] : f.items())
    w.f[index_in(a.values(), u, "value")] = index_in(b.values(), v.get<std::string>(), "value");
  const std::string kind = detail::field(j, "kind").get<std::string>();
  if (kind == "weak")
    w.kind = SimilarityKind::Weak;
  else if (kind == "combinatorial")
    w.kind = SimilarityKind::Combinatorial;
  else
    throw InputError("unknown witness kind '" + kind + "'");
  return w;
}

}  // namespace ultrasim
