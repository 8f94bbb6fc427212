#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gridrisk/catalog.hpp"
#include "gridrisk/errors.hpp"

namespace gridrisk {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return buffer.str();
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write '" + path + "'");
}

/// JSON parse with the byte offset converted to line/column.
inline Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    offset = std::min(offset, text.size());
    int line = 1;
    int column = 1;
    for (size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed " + what + ": " + e.what(), line, column);
  }
}

inline void expect_object(const Json& j, const std::string& context) {
  if (!j.is_object()) {
    throw ValidationError(context + ": expected an object");
  }
}

inline void reject_unknown_keys(const Json& obj,
                                std::initializer_list<std::string_view> allowed,
                                const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(context + ": unknown key '" + item.key() + "'");
    }
  }
}

inline const Json* find_key(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline const Json& require_key(const Json& obj, std::string_view key,
                               const std::string& context) {
  const Json* value = find_key(obj, key);
  if (value == nullptr) {
    throw ValidationError(context + ": missing required key '" +
                          std::string(key) + "'");
  }
  return *value;
}

inline std::string get_string(const Json& obj, std::string_view key,
                              const std::string& context) {
  const Json& v = require_key(obj, key, context);
  if (!v.is_string()) {
    throw ValidationError(context + ": '" + std::string(key) +
                          "' must be a string");
  }
  return v.get<std::string>();
}

inline std::string get_string_or(const Json& obj, std::string_view key,
                                 const std::string& context,
                                 std::string fallback) {
  const Json* v = find_key(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_string()) {
    throw ValidationError(context + ": '" + std::string(key) +
                          "' must be a string");
  }
  return v->get<std::string>();
}

inline bool get_bool_or(const Json& obj, std::string_view key,
                        const std::string& context, bool fallback) {
  const Json* v = find_key(obj, key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) {
    throw ValidationError(context + ": '" + std::string(key) +
                          "' must be a boolean");
  }
  return v->get<bool>();
}

inline std::int64_t get_integer(const Json& obj, std::string_view key,
                                const std::string& context) {
  const Json& v = require_key(obj, key, context);
  if (!v.is_number_integer()) {
    throw ValidationError(context + ": '" + std::string(key) +
                          "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline Score get_score(const Json& obj, std::string_view key,
                       const std::string& context) {
  std::int64_t raw = get_integer(obj, key, context);
  try {
    return Score(static_cast<int>(raw));
  } catch (const RangeError& e) {
    throw ValidationError(context + ": '" + std::string(key) + "' " +
                          e.what());
  }
}

/// Rationals arrive as integers, decimal numbers (interpreted exactly to
/// 9 places), or strings like "5/7" / "0.35".
inline Rational json_to_rational(const Json& v, const std::string& context) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (!std::isfinite(d) || std::fabs(d) > 1e9) {
      throw ValidationError(context + ": number out of range");
    }
    return Rational(std::llround(d * 1e9), 1000000000);
  }
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const ParseError& e) {
      throw ValidationError(context + ": " + e.what());
    }
  }
  throw ValidationError(context + ": expected a number or fraction string");
}

inline Rational get_rational(const Json& obj, std::string_view key,
                             const std::string& context) {
  return json_to_rational(require_key(obj, key, context),
                          context + ": '" + std::string(key) + "'");
}

template <typename E>
E get_enum(const Json& obj, std::string_view key, const std::string& context) {
  return parse_enum<E>(get_string(obj, key, context), context);
}

template <typename E>
std::vector<E> get_enum_set(const Json& obj, std::string_view key,
                            const std::string& context, bool required) {
  const Json* v = find_key(obj, key);
  if (v == nullptr) {
    if (required) {
      throw ValidationError(context + ": missing required key '" +
                            std::string(key) + "'");
    }
    return {};
  }
  if (!v->is_array()) {
    throw ValidationError(context + ": '" + std::string(key) +
                          "' must be an array");
  }
  std::vector<E> out;
  for (const auto& item : *v) {
    if (!item.is_string()) {
      throw ValidationError(context + ": '" + std::string(key) +
                            "' entries must be strings");
    }
    E value = parse_enum<E>(item.get<std::string>(), context);
    if (std::find(out.begin(), out.end(), value) != out.end()) {
      throw ValidationError(context + ": duplicate '" +
                            item.get<std::string>() + "' in '" +
                            std::string(key) + "'");
    }
    out.push_back(value);
  }
  return out;
}

inline const Json& get_array(const Json& obj, std::string_view key,
                             const std::string& context) {
  const Json& v = require_key(obj, key, context);
  if (!v.is_array()) {
    throw ValidationError(context + ": '" + std::string(key) +
                          "' must be an array");
  }
  return v;
}

inline std::string entity_context(const Json& obj, std::string_view what) {
  const Json* id = find_key(obj, "id");
  if (id != nullptr && id->is_string()) {
    return std::string(what) + " '" + id->get<std::string>() + "'";
  }
  return std::string(what);
}

inline Threat parse_threat(const Json& j) {
  expect_object(j, "threat");
  std::string ctx = entity_context(j, "threat");
  reject_unknown_keys(
      j, {"id", "name", "category", "domain", "likelihood", "evidence"}, ctx);
  Threat t;
  t.id = get_string(j, "id", ctx);
  t.name = get_string(j, "name", ctx);
  t.category = get_enum<ThreatCategory>(j, "category", ctx);
  t.domain = get_enum<ResilienceDomain>(j, "domain", ctx);
  t.likelihood = get_score(j, "likelihood", ctx);
  t.evidence = get_string_or(j, "evidence", ctx, "");
  return t;
}

inline Vulnerability parse_vulnerability(const Json& j) {
  expect_object(j, "vulnerability");
  std::string ctx = entity_context(j, "vulnerability");
  reject_unknown_keys(j, {"id", "name", "class", "description"}, ctx);
  Vulnerability v;
  v.id = get_string(j, "id", ctx);
  v.name = get_string(j, "name", ctx);
  v.cls = get_enum<VulnerabilityClass>(j, "class", ctx);
  v.description = get_string_or(j, "description", ctx, "");
  return v;
}

inline PairAssessment parse_pair(const Json& j) {
  expect_object(j, "pair");
  std::string ctx = "pair";
  if (const Json* t = find_key(j, "threat_id"); t != nullptr && t->is_string()) {
    ctx = "pair '" + t->get<std::string>() + "'";
  }
  reject_unknown_keys(
      j, {"threat_id", "vulnerability_id", "p_vulnerability", "impact",
          "rationale"},
      ctx);
  PairAssessment p;
  p.threat_id = get_string(j, "threat_id", ctx);
  p.vulnerability_id = get_string(j, "vulnerability_id", ctx);
  ctx = "pair '" + p.threat_id + "/" + p.vulnerability_id + "'";
  p.p_vulnerability = get_score(j, "p_vulnerability", ctx);
  p.impact = get_score(j, "impact", ctx);
  p.rationale = get_string_or(j, "rationale", ctx, "");
  return p;
}

inline DreadScore parse_dread(const Json& j, const std::string& parent_ctx) {
  expect_object(j, parent_ctx + ": dread");
  std::string ctx = parent_ctx + ": dread";
  reject_unknown_keys(j,
                      {"damage", "reproducibility", "exploitability",
                       "affected_users", "discoverability"},
                      ctx);
  DreadScore d;
  d.damage = get_score(j, "damage", ctx);
  d.reproducibility = get_score(j, "reproducibility", ctx);
  d.exploitability = get_score(j, "exploitability", ctx);
  d.affected_users = get_score(j, "affected_users", ctx);
  d.discoverability = get_score(j, "discoverability", ctx);
  return d;
}

inline CyberThreatEntry parse_cyber_entry(const Json& j) {
  expect_object(j, "cyber entry");
  std::string ctx = entity_context(j, "cyber entry");
  reject_unknown_keys(j,
                      {"id", "name", "attack_surface", "stride_tags",
                       "cia_class", "vulnerability_id", "dread",
                       "known_vulnerability"},
                      ctx);
  CyberThreatEntry c;
  c.id = get_string(j, "id", ctx);
  c.name = get_string(j, "name", ctx);
  c.attack_surface = get_enum<AttackSurface>(j, "attack_surface", ctx);
  c.stride_tags = get_enum_set<StrideCategory>(j, "stride_tags", ctx, false);
  c.cia_class = get_enum<CiaClass>(j, "cia_class", ctx);
  c.vulnerability_id = get_string(j, "vulnerability_id", ctx);
  c.dread = parse_dread(require_key(j, "dread", ctx), ctx);
  c.known_vulnerability = get_bool_or(j, "known_vulnerability", ctx, false);
  return c;
}

inline MitigationTarget parse_target(const Json& j, const std::string& ctx) {
  expect_object(j, ctx + ": target");
  if (j.size() != 1) {
    throw ValidationError(ctx +
                          ": each target must have exactly one of "
                          "'threat_id', 'vulnerability_class', "
                          "'attack_surface'");
  }
  if (const Json* t = find_key(j, "threat_id")) {
    if (!t->is_string()) {
      throw ValidationError(ctx + ": target 'threat_id' must be a string");
    }
    return ThreatTarget{t->get<std::string>()};
  }
  if (const Json* c = find_key(j, "vulnerability_class")) {
    if (!c->is_string()) {
      throw ValidationError(ctx +
                            ": target 'vulnerability_class' must be a string");
    }
    return parse_enum<VulnerabilityClass>(c->get<std::string>(), ctx);
  }
  if (const Json* s = find_key(j, "attack_surface")) {
    if (!s->is_string()) {
      throw ValidationError(ctx + ": target 'attack_surface' must be a string");
    }
    return parse_enum<AttackSurface>(s->get<std::string>(), ctx);
  }
  throw ValidationError(ctx + ": unknown target key '" +
                        j.items().begin().key() + "'");
}

inline Mitigation parse_mitigation(const Json& j) {
  expect_object(j, "mitigation");
  std::string ctx = entity_context(j, "mitigation");
  reject_unknown_keys(j,
                      {"id", "name", "attributes", "phase", "kind", "targets",
                       "vuln_reduction", "impact_reduction", "difficulty",
                       "cost"},
                      ctx);
  Mitigation m;
  m.id = get_string(j, "id", ctx);
  m.name = get_string(j, "name", ctx);
  m.attributes = get_enum_set<ResilienceAttribute>(j, "attributes", ctx, true);
  m.phase = get_enum<MitigationPhase>(j, "phase", ctx);
  m.kind = get_enum<MitigationKind>(j, "kind", ctx);
  const Json& targets = get_array(j, "targets", ctx);
  for (const auto& t : targets) {
    MitigationTarget target = parse_target(t, ctx);
    if (std::find(m.targets.begin(), m.targets.end(), target) !=
        m.targets.end()) {
      throw ValidationError(ctx + ": duplicate target");
    }
    m.targets.push_back(target);
  }
  m.vuln_reduction = get_rational(j, "vuln_reduction", ctx);
  m.impact_reduction = get_rational(j, "impact_reduction", ctx);
  m.difficulty = get_score(j, "difficulty", ctx);
  m.cost = get_score(j, "cost", ctx);
  return m;
}

inline GraphNode parse_node(const Json& j) {
  expect_object(j, "node");
  std::string ctx = entity_context(j, "node");
  reject_unknown_keys(j, {"id", "kind", "logic", "commodity"}, ctx);
  GraphNode n;
  n.id = get_string(j, "id", ctx);
  n.kind = get_enum<NodeKind>(j, "kind", ctx);
  n.commodity = get_enum<Commodity>(j, "commodity", ctx);
  if (find_key(j, "logic") != nullptr) {
    n.logic = get_enum<NodeLogic>(j, "logic", ctx);
  } else {
    // Converters demand every input; loads are happy with any one supplier.
    n.logic = n.kind == NodeKind::Converter ? NodeLogic::AllInputs
                                            : NodeLogic::AnyInput;
  }
  return n;
}

inline GraphEdge parse_edge(const Json& j) {
  expect_object(j, "edge");
  std::string ctx = "edge";
  reject_unknown_keys(j, {"from", "to", "commodity"}, ctx);
  GraphEdge e;
  e.from = get_string(j, "from", ctx);
  e.to = get_string(j, "to", ctx);
  ctx = "edge '" + e.from + "->" + e.to + "'";
  e.commodity = get_enum<Commodity>(j, "commodity", ctx);
  return e;
}

inline DependencyGraph parse_graph(const Json& j) {
  expect_object(j, "dependency_graph");
  std::string ctx = "dependency_graph";
  reject_unknown_keys(j, {"nodes", "edges"}, ctx);
  DependencyGraph g;
  for (const auto& n : get_array(j, "nodes", ctx)) {
    g.nodes.push_back(parse_node(n));
  }
  for (const auto& e : get_array(j, "edges", ctx)) {
    g.edges.push_back(parse_edge(e));
  }
  return g;
}

}  // namespace detail

/// Structural parse of a catalog document: JSON shape, enum spellings, score
/// ranges, unknown keys. Semantic invariants (references, duplicates, graph
/// shape) are validate_catalog's job.
inline Catalog parse_catalog_json(const Json& doc) {
  detail::expect_object(doc, "catalog");
  detail::reject_unknown_keys(doc,
                              {"schema_version", "threats", "vulnerabilities",
                               "pairs", "cyber_entries", "mitigations",
                               "dependency_graph"},
                              "catalog");
  Catalog c;
  c.schema_version = static_cast<int>(
      detail::get_integer(doc, "schema_version", "catalog"));
  if (c.schema_version != kCatalogSchemaVersion) {
    throw ValidationError("catalog: schema_version mismatch: expected " +
                          std::to_string(kCatalogSchemaVersion) + ", got " +
                          std::to_string(c.schema_version));
  }
  auto list_of = [&doc](std::string_view key) -> const Json* {
    const Json* v = detail::find_key(doc, key);
    if (v != nullptr && !v->is_array()) {
      throw ValidationError("catalog: '" + std::string(key) +
                            "' must be an array");
    }
    return v;
  };
  if (const Json* v = list_of("threats")) {
    for (const auto& t : *v) c.threats.push_back(detail::parse_threat(t));
  }
  if (const Json* v = list_of("vulnerabilities")) {
    for (const auto& t : *v) {
      c.vulnerabilities.push_back(detail::parse_vulnerability(t));
    }
  }
  if (const Json* v = list_of("pairs")) {
    for (const auto& t : *v) c.pairs.push_back(detail::parse_pair(t));
  }
  if (const Json* v = list_of("cyber_entries")) {
    for (const auto& t : *v) {
      c.cyber_entries.push_back(detail::parse_cyber_entry(t));
    }
  }
  if (const Json* v = list_of("mitigations")) {
    for (const auto& t : *v) {
      c.mitigations.push_back(detail::parse_mitigation(t));
    }
  }
  if (const Json* v = detail::find_key(doc, "dependency_graph")) {
    if (!v->is_null()) c.dependency_graph = detail::parse_graph(*v);
  }
  return c;
}

/// Structural parse of raw bytes. Callers that also want semantic findings
/// run validate_catalog afterwards (that is what load_catalog does).
inline Catalog parse_catalog(std::string_view bytes) {
  Json doc = detail::parse_json(bytes, "catalog");
  return parse_catalog_json(doc);
}

/// Loads, validates, and normalizes a catalog file. Any error-severity
/// finding raises ValidationError naming the first offending entity.
inline Catalog load_catalog(const std::string& path) {
  Catalog c = parse_catalog(detail::read_file(path));
  auto findings = validate_catalog(c);
  for (const auto& f : findings) {
    if (f.severity == Severity::Error) {
      throw ValidationError(f.entity + ": " + f.message);
    }
  }
  return c;
}

namespace detail {

inline Json target_to_json(const MitigationTarget& target) {
  Json j = Json::object();
  if (const auto* t = std::get_if<ThreatTarget>(&target)) {
    j["threat_id"] = t->id;
  } else if (const auto* c = std::get_if<VulnerabilityClass>(&target)) {
    j["vulnerability_class"] = std::string(to_string(*c));
  } else {
    j["attack_surface"] =
        std::string(to_string(std::get<AttackSurface>(target)));
  }
  return j;
}

inline Json rational_to_json(const Rational& r) {
  if (r.is_integer()) return Json(r.numerator());
  return Json(r.str());
}

}  // namespace detail

inline Json catalog_to_json(const Catalog& c) {
  Json doc = Json::object();
  doc["schema_version"] = c.schema_version;
  doc["threats"] = Json::array();
  for (const auto& t : c.threats) {
    Json j = Json::object();
    j["id"] = t.id;
    j["name"] = t.name;
    j["category"] = std::string(to_string(t.category));
    j["domain"] = std::string(to_string(t.domain));
    j["likelihood"] = t.likelihood.value();
    j["evidence"] = t.evidence;
    doc["threats"].push_back(std::move(j));
  }
  doc["vulnerabilities"] = Json::array();
  for (const auto& v : c.vulnerabilities) {
    Json j = Json::object();
    j["id"] = v.id;
    j["name"] = v.name;
    j["class"] = std::string(to_string(v.cls));
    j["description"] = v.description;
    doc["vulnerabilities"].push_back(std::move(j));
  }
  doc["pairs"] = Json::array();
  for (const auto& p : c.pairs) {
    Json j = Json::object();
    j["threat_id"] = p.threat_id;
    j["vulnerability_id"] = p.vulnerability_id;
    j["p_vulnerability"] = p.p_vulnerability.value();
    j["impact"] = p.impact.value();
    j["rationale"] = p.rationale;
    doc["pairs"].push_back(std::move(j));
  }
  doc["cyber_entries"] = Json::array();
  for (const auto& e : c.cyber_entries) {
    Json j = Json::object();
    j["id"] = e.id;
    j["name"] = e.name;
    j["attack_surface"] = std::string(to_string(e.attack_surface));
    Json tags = Json::array();
    for (auto tag : e.stride_tags) tags.push_back(std::string(to_string(tag)));
    j["stride_tags"] = std::move(tags);
    j["cia_class"] = std::string(to_string(e.cia_class));
    j["vulnerability_id"] = e.vulnerability_id;
    Json d = Json::object();
    d["damage"] = e.dread.damage.value();
    d["reproducibility"] = e.dread.reproducibility.value();
    d["exploitability"] = e.dread.exploitability.value();
    d["affected_users"] = e.dread.affected_users.value();
    d["discoverability"] = e.dread.discoverability.value();
    j["dread"] = std::move(d);
    j["known_vulnerability"] = e.known_vulnerability;
    doc["cyber_entries"].push_back(std::move(j));
  }
  doc["mitigations"] = Json::array();
  for (const auto& m : c.mitigations) {
    Json j = Json::object();
    j["id"] = m.id;
    j["name"] = m.name;
    Json attrs = Json::array();
    for (auto a : m.attributes) attrs.push_back(std::string(to_string(a)));
    j["attributes"] = std::move(attrs);
    j["phase"] = std::string(to_string(m.phase));
    j["kind"] = std::string(to_string(m.kind));
    Json targets = Json::array();
    for (const auto& t : m.targets) targets.push_back(detail::target_to_json(t));
    j["targets"] = std::move(targets);
    j["vuln_reduction"] = detail::rational_to_json(m.vuln_reduction);
    j["impact_reduction"] = detail::rational_to_json(m.impact_reduction);
    j["difficulty"] = m.difficulty.value();
    j["cost"] = m.cost.value();
    doc["mitigations"].push_back(std::move(j));
  }
  if (c.dependency_graph.has_value()) {
    Json g = Json::object();
    g["nodes"] = Json::array();
    for (const auto& n : c.dependency_graph->nodes) {
      Json j = Json::object();
      j["id"] = n.id;
      j["kind"] = std::string(to_string(n.kind));
      j["logic"] = std::string(to_string(n.logic));
      j["commodity"] = std::string(to_string(n.commodity));
      g["nodes"].push_back(std::move(j));
    }
    g["edges"] = Json::array();
    for (const auto& e : c.dependency_graph->edges) {
      Json j = Json::object();
      j["from"] = e.from;
      j["to"] = e.to;
      j["commodity"] = std::string(to_string(e.commodity));
      g["edges"].push_back(std::move(j));
    }
    doc["dependency_graph"] = std::move(g);
  }
  return doc;
}

inline std::string serialize_catalog(const Catalog& c) {
  return catalog_to_json(c).dump(2) + "\n";
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ULL;
  }
  return hash;
}

/// Content hash over a canonical form (entity lists sorted by id), so
/// reordering entries in the file does not change the fingerprint.
inline std::string catalog_fingerprint(const Catalog& c) {
  Catalog canon = c;
  std::sort(canon.threats.begin(), canon.threats.end(),
            [](const Threat& a, const Threat& b) { return a.id < b.id; });
  std::sort(canon.vulnerabilities.begin(), canon.vulnerabilities.end(),
            [](const Vulnerability& a, const Vulnerability& b) {
              return a.id < b.id;
            });
  std::sort(canon.pairs.begin(), canon.pairs.end(),
            [](const PairAssessment& a, const PairAssessment& b) {
              return std::tie(a.threat_id, a.vulnerability_id) <
                     std::tie(b.threat_id, b.vulnerability_id);
            });
  std::sort(canon.cyber_entries.begin(), canon.cyber_entries.end(),
            [](const CyberThreatEntry& a, const CyberThreatEntry& b) {
              return a.id < b.id;
            });
  std::sort(canon.mitigations.begin(), canon.mitigations.end(),
            [](const Mitigation& a, const Mitigation& b) {
              return a.id < b.id;
            });
  if (canon.dependency_graph.has_value()) {
    auto& g = *canon.dependency_graph;
    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const GraphNode& a, const GraphNode& b) {
                return a.id < b.id;
              });
    std::sort(g.edges.begin(), g.edges.end(),
              [](const GraphEdge& a, const GraphEdge& b) {
                return std::tie(a.from, a.to, a.commodity) <
                       std::tie(b.from, b.to, b.commodity);
              });
  }
  std::uint64_t h = fnv1a64(catalog_to_json(canon).dump());
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buffer);
}

}  // namespace gridrisk
