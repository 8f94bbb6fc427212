#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gridrisk/errors.hpp"
#include "gridrisk/rational.hpp"

namespace gridrisk {

inline constexpr int kScoreMin = 0;
inline constexpr int kScoreMax = 10;

/// Elicited ordinal score on the unified 0..10 scale.
class Score {
 public:
  constexpr Score() = default;
  explicit Score(int value) : value_(value) {
    if (value < kScoreMin || value > kScoreMax) {
      throw RangeError("score " + std::to_string(value) + " out of range [" +
                       std::to_string(kScoreMin) + ", " +
                       std::to_string(kScoreMax) + "]");
    }
  }

  int value() const { return value_; }
  Rational rational() const { return Rational(value_); }

  friend auto operator<=>(const Score&, const Score&) = default;

 private:
  int value_ = 0;
};

enum class ThreatCategory { Natural, Technological, Adversarial };
enum class ResilienceDomain { Physical, Cyber, Communications, Interdependency };
enum class VulnerabilityClass { Physical, Natural, Cyber, Communication, Human };
enum class AttackSurface {
  WiredLinks,
  WirelessLinks,
  UnencryptedCommunications,
  UnauthenticatedCommunications,
  ExposedEndpoints,
  Human,
};
enum class StrideCategory {
  Spoofing,
  Tampering,
  Repudiation,
  InformationDisclosure,
  DenialOfService,
  ElevationOfPrivilege,
};
enum class CiaClass { Availability, Integrity, Confidentiality };
enum class ResilienceAttribute {
  Robustness,
  Redundancy,
  Resourcefulness,
  Response,
  Recovery,
};
enum class MitigationPhase { PreDisaster, DuringDisaster, PostDisaster };
enum class MitigationKind { SystemHardening, Operational };
enum class NodeKind { Source, Converter, Load };
enum class NodeLogic { AllInputs, AnyInput };
enum class Commodity { Electricity, NaturalGas, Water, Heat };

namespace detail {

template <typename E, size_t N>
using EnumNames = std::array<std::pair<E, std::string_view>, N>;

template <typename E>
struct EnumTable;

template <>
struct EnumTable<ThreatCategory> {
  static constexpr std::string_view kind = "threat category";
  static constexpr EnumNames<ThreatCategory, 3> names{{
      {ThreatCategory::Natural, "Natural"},
      {ThreatCategory::Technological, "Technological"},
      {ThreatCategory::Adversarial, "Adversarial"},
  }};
};

template <>
struct EnumTable<ResilienceDomain> {
  static constexpr std::string_view kind = "resilience domain";
  static constexpr EnumNames<ResilienceDomain, 4> names{{
      {ResilienceDomain::Physical, "Physical"},
      {ResilienceDomain::Cyber, "Cyber"},
      {ResilienceDomain::Communications, "Communications"},
      {ResilienceDomain::Interdependency, "Interdependency"},
  }};
};

template <>
struct EnumTable<VulnerabilityClass> {
  static constexpr std::string_view kind = "vulnerability class";
  static constexpr EnumNames<VulnerabilityClass, 5> names{{
      {VulnerabilityClass::Physical, "Physical"},
      {VulnerabilityClass::Natural, "Natural"},
      {VulnerabilityClass::Cyber, "Cyber"},
      {VulnerabilityClass::Communication, "Communication"},
      {VulnerabilityClass::Human, "Human"},
  }};
};

template <>
struct EnumTable<AttackSurface> {
  static constexpr std::string_view kind = "attack surface";
  static constexpr EnumNames<AttackSurface, 6> names{{
      {AttackSurface::WiredLinks, "WiredLinks"},
      {AttackSurface::WirelessLinks, "WirelessLinks"},
      {AttackSurface::UnencryptedCommunications, "UnencryptedCommunications"},
      {AttackSurface::UnauthenticatedCommunications,
       "UnauthenticatedCommunications"},
      {AttackSurface::ExposedEndpoints, "ExposedEndpoints"},
      {AttackSurface::Human, "Human"},
  }};
};

template <>
struct EnumTable<StrideCategory> {
  static constexpr std::string_view kind = "STRIDE category";
  static constexpr EnumNames<StrideCategory, 6> names{{
      {StrideCategory::Spoofing, "Spoofing"},
      {StrideCategory::Tampering, "Tampering"},
      {StrideCategory::Repudiation, "Repudiation"},
      {StrideCategory::InformationDisclosure, "InformationDisclosure"},
      {StrideCategory::DenialOfService, "DenialOfService"},
      {StrideCategory::ElevationOfPrivilege, "ElevationOfPrivilege"},
  }};
};

template <>
struct EnumTable<CiaClass> {
  static constexpr std::string_view kind = "CIA class";
  static constexpr EnumNames<CiaClass, 3> names{{
      {CiaClass::Availability, "Availability"},
      {CiaClass::Integrity, "Integrity"},
      {CiaClass::Confidentiality, "Confidentiality"},
  }};
};

template <>
struct EnumTable<ResilienceAttribute> {
  static constexpr std::string_view kind = "resilience attribute";
  static constexpr EnumNames<ResilienceAttribute, 5> names{{
      {ResilienceAttribute::Robustness, "Robustness"},
      {ResilienceAttribute::Redundancy, "Redundancy"},
      {ResilienceAttribute::Resourcefulness, "Resourcefulness"},
      {ResilienceAttribute::Response, "Response"},
      {ResilienceAttribute::Recovery, "Recovery"},
  }};
};

template <>
struct EnumTable<MitigationPhase> {
  static constexpr std::string_view kind = "mitigation phase";
  static constexpr EnumNames<MitigationPhase, 3> names{{
      {MitigationPhase::PreDisaster, "PreDisaster"},
      {MitigationPhase::DuringDisaster, "DuringDisaster"},
      {MitigationPhase::PostDisaster, "PostDisaster"},
  }};
};

template <>
struct EnumTable<MitigationKind> {
  static constexpr std::string_view kind = "mitigation kind";
  static constexpr EnumNames<MitigationKind, 2> names{{
      {MitigationKind::SystemHardening, "SystemHardening"},
      {MitigationKind::Operational, "Operational"},
  }};
};

template <>
struct EnumTable<NodeKind> {
  static constexpr std::string_view kind = "node kind";
  static constexpr EnumNames<NodeKind, 3> names{{
      {NodeKind::Source, "Source"},
      {NodeKind::Converter, "Converter"},
      {NodeKind::Load, "Load"},
  }};
};

template <>
struct EnumTable<NodeLogic> {
  static constexpr std::string_view kind = "node logic";
  static constexpr EnumNames<NodeLogic, 2> names{{
      {NodeLogic::AllInputs, "AllInputs"},
      {NodeLogic::AnyInput, "AnyInput"},
  }};
};

template <>
struct EnumTable<Commodity> {
  static constexpr std::string_view kind = "commodity";
  static constexpr EnumNames<Commodity, 4> names{{
      {Commodity::Electricity, "Electricity"},
      {Commodity::NaturalGas, "NaturalGas"},
      {Commodity::Water, "Water"},
      {Commodity::Heat, "Heat"},
  }};
};

}  // namespace detail

template <typename E>
std::string_view to_string(E value) {
  for (const auto& [v, name] : detail::EnumTable<E>::names) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E>
E parse_enum(std::string_view text, const std::string& context) {
  for (const auto& [v, name] : detail::EnumTable<E>::names) {
    if (name == text) return v;
  }
  std::string known;
  for (const auto& [v, name] : detail::EnumTable<E>::names) {
    if (!known.empty()) known += ", ";
    known += name;
  }
  throw ValidationError(context + ": unknown " +
                        std::string(detail::EnumTable<E>::kind) + " '" +
                        std::string(text) + "' (expected one of: " + known +
                        ")");
}

/// A hazard outside the site's control.
struct Threat {
  std::string id;
  std::string name;
  ThreatCategory category = ThreatCategory::Natural;
  ResilienceDomain domain = ResilienceDomain::Physical;
  Score likelihood;
  std::string evidence;

  friend bool operator==(const Threat&, const Threat&) = default;
};

/// A site weakness, within the site's control.
struct Vulnerability {
  std::string id;
  std::string name;
  VulnerabilityClass cls = VulnerabilityClass::Physical;
  std::string description;

  friend bool operator==(const Vulnerability&, const Vulnerability&) = default;
};

/// Elicited scores for one threat-vulnerability combination.
struct PairAssessment {
  std::string threat_id;
  std::string vulnerability_id;
  Score p_vulnerability;
  Score impact;
  std::string rationale;

  friend bool operator==(const PairAssessment&, const PairAssessment&) = default;
};

struct DreadScore {
  Score damage;
  Score reproducibility;
  Score exploitability;
  Score affected_users;
  Score discoverability;

  friend bool operator==(const DreadScore&, const DreadScore&) = default;
};

struct CyberThreatEntry {
  std::string id;
  std::string name;
  AttackSurface attack_surface = AttackSurface::ExposedEndpoints;
  std::vector<StrideCategory> stride_tags;
  CiaClass cia_class = CiaClass::Availability;
  std::string vulnerability_id;
  DreadScore dread;
  bool known_vulnerability = false;

  friend bool operator==(const CyberThreatEntry&, const CyberThreatEntry&) = default;
};

/// A mitigation targets threats by id, vulnerabilities by class, or (for the
/// cyber model) whole attack surfaces.
struct ThreatTarget {
  std::string id;
  friend bool operator==(const ThreatTarget&, const ThreatTarget&) = default;
};
using MitigationTarget =
    std::variant<ThreatTarget, VulnerabilityClass, AttackSurface>;

struct Mitigation {
  std::string id;
  std::string name;
  std::vector<ResilienceAttribute> attributes;
  MitigationPhase phase = MitigationPhase::PreDisaster;
  MitigationKind kind = MitigationKind::SystemHardening;
  std::vector<MitigationTarget> targets;
  Rational vuln_reduction;
  Rational impact_reduction;
  Score difficulty;
  Score cost;

  friend bool operator==(const Mitigation&, const Mitigation&) = default;
};

struct GraphNode {
  std::string id;
  NodeKind kind = NodeKind::Source;
  NodeLogic logic = NodeLogic::AnyInput;
  Commodity commodity = Commodity::Electricity;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::string from;
  std::string to;
  Commodity commodity = Commodity::Electricity;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// AND/OR dependency graph of utility supplies, converters, and loads.
struct DependencyGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  const GraphNode* find_node(std::string_view id) const {
    for (const auto& n : nodes) {
      if (n.id == id) return &n;
    }
    return nullptr;
  }

  friend bool operator==(const DependencyGraph&, const DependencyGraph&) = default;
};

inline constexpr int kCatalogSchemaVersion = 1;

struct Catalog {
  int schema_version = kCatalogSchemaVersion;
  std::vector<Threat> threats;
  std::vector<Vulnerability> vulnerabilities;
  std::vector<PairAssessment> pairs;
  std::vector<CyberThreatEntry> cyber_entries;
  std::vector<Mitigation> mitigations;
  std::optional<DependencyGraph> dependency_graph;

  const Threat* find_threat(std::string_view id) const {
    for (const auto& t : threats) {
      if (t.id == id) return &t;
    }
    return nullptr;
  }
  const Vulnerability* find_vulnerability(std::string_view id) const {
    for (const auto& v : vulnerabilities) {
      if (v.id == id) return &v;
    }
    return nullptr;
  }
  const CyberThreatEntry* find_cyber_entry(std::string_view id) const {
    for (const auto& c : cyber_entries) {
      if (c.id == id) return &c;
    }
    return nullptr;
  }
  const Mitigation* find_mitigation(std::string_view id) const {
    for (const auto& m : mitigations) {
      if (m.id == id) return &m;
    }
    return nullptr;
  }

  friend bool operator==(const Catalog&, const Catalog&) = default;
};

enum class Severity { Error, Warning };

inline std::string_view to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

struct Finding {
  Severity severity = Severity::Error;
  std::string entity;
  std::string message;

  friend auto operator<=>(const Finding&, const Finding&) = default;

  std::string str() const {
    return std::string(to_string(severity)) + " " + entity + ": " + message;
  }
};

namespace detail {

inline void check_duplicate_ids(const std::vector<std::string>& ids,
                                std::string_view what,
                                std::vector<Finding>& out) {
  std::map<std::string, int> counts;
  for (const auto& id : ids) counts[id] += 1;
  for (const auto& [id, n] : counts) {
    if (n > 1) {
      out.push_back({Severity::Error, id,
                     "duplicate " + std::string(what) + " id (appears " +
                         std::to_string(n) + " times)"});
    }
  }
}

inline void validate_graph(const DependencyGraph& g, std::vector<Finding>& out) {
  std::vector<std::string> ids;
  ids.reserve(g.nodes.size());
  for (const auto& n : g.nodes) ids.push_back(n.id);
  check_duplicate_ids(ids, "node", out);

  std::map<std::string, int> incoming;
  std::map<std::string, int> outgoing;
  std::set<std::pair<std::string, std::string>> seen_edges;
  for (const auto& e : g.edges) {
    bool ok = true;
    if (g.find_node(e.from) == nullptr) {
      out.push_back({Severity::Error, e.from,
                     "edge references unknown node '" + e.from + "'"});
      ok = false;
    }
    if (g.find_node(e.to) == nullptr) {
      out.push_back({Severity::Error, e.to,
                     "edge references unknown node '" + e.to + "'"});
      ok = false;
    }
    if (!ok) continue;
    outgoing[e.from] += 1;
    incoming[e.to] += 1;
    seen_edges.insert({e.from, e.to});
  }
  for (const auto& n : g.nodes) {
    if (n.kind == NodeKind::Source && incoming[n.id] > 0) {
      out.push_back({Severity::Error, n.id, "Source node has incoming edges"});
    }
    if (n.kind == NodeKind::Load && outgoing[n.id] > 0) {
      out.push_back({Severity::Error, n.id, "Load node has outgoing edges"});
    }
    if (n.kind != NodeKind::Source && incoming[n.id] == 0) {
      out.push_back({Severity::Warning, n.id,
                     "non-source node has no suppliers"});
    }
  }

  // Kahn's algorithm over the deduplicated edge set.
  std::map<std::string, int> degree;
  for (const auto& n : g.nodes) degree[n.id] = 0;
  for (const auto& [from, to] : seen_edges) {
    if (degree.count(from) != 0 && degree.count(to) != 0) degree[to] += 1;
  }
  std::vector<std::string> ready;
  for (const auto& [id, d] : degree) {
    if (d == 0) ready.push_back(id);
  }
  size_t visited = 0;
  while (!ready.empty()) {
    std::string id = ready.back();
    ready.pop_back();
    ++visited;
    for (const auto& [from, to] : seen_edges) {
      if (from == id && --degree[to] == 0) ready.push_back(to);
    }
  }
  if (visited < degree.size()) {
    std::string cyclic;
    for (const auto& [id, d] : degree) {
      if (d > 0) {
        if (!cyclic.empty()) cyclic += ", ";
        cyclic += id;
      }
    }
    out.push_back({Severity::Error, "dependency_graph",
                   "cycle along commodity-flow direction involving: " + cyclic});
  }
}

}  // namespace detail

/// Checks every semantic catalog invariant. Returns structured findings
/// sorted deterministically; never throws. Normalizes discoverability to 10
/// (with a warning) on cyber entries flagged known_vulnerability.
inline std::vector<Finding> validate_catalog(Catalog& catalog) {
  std::vector<Finding> out;

  if (catalog.schema_version != kCatalogSchemaVersion) {
    out.push_back({Severity::Error, "catalog",
                   "schema_version mismatch: expected " +
                       std::to_string(kCatalogSchemaVersion) + ", got " +
                       std::to_string(catalog.schema_version)});
  }

  {
    std::vector<std::string> ids;
    for (const auto& t : catalog.threats) ids.push_back(t.id);
    detail::check_duplicate_ids(ids, "threat", out);
  }
  {
    std::vector<std::string> ids;
    for (const auto& v : catalog.vulnerabilities) ids.push_back(v.id);
    detail::check_duplicate_ids(ids, "vulnerability", out);
  }
  {
    std::vector<std::string> ids;
    for (const auto& c : catalog.cyber_entries) ids.push_back(c.id);
    detail::check_duplicate_ids(ids, "cyber entry", out);
  }
  {
    std::vector<std::string> ids;
    for (const auto& m : catalog.mitigations) ids.push_back(m.id);
    detail::check_duplicate_ids(ids, "mitigation", out);
  }

  // Threats and cyber entries share the register's threat namespace.
  for (const auto& c : catalog.cyber_entries) {
    if (catalog.find_threat(c.id) != nullptr) {
      out.push_back({Severity::Error, c.id,
                     "cyber entry id collides with a threat id"});
    }
  }

  std::set<std::pair<std::string, std::string>> seen_pairs;
  for (const auto& p : catalog.pairs) {
    std::string entity = p.threat_id + "/" + p.vulnerability_id;
    if (catalog.find_threat(p.threat_id) == nullptr) {
      out.push_back({Severity::Error, entity,
                     "dangling reference: threat '" + p.threat_id +
                         "' not in catalog"});
    }
    if (catalog.find_vulnerability(p.vulnerability_id) == nullptr) {
      out.push_back({Severity::Error, entity,
                     "dangling reference: vulnerability '" +
                         p.vulnerability_id + "' not in catalog"});
    }
    if (!seen_pairs.insert({p.threat_id, p.vulnerability_id}).second) {
      out.push_back({Severity::Error, entity,
                     "duplicate pair assessment for this combination"});
    }
  }

  for (auto& c : catalog.cyber_entries) {
    if (catalog.find_vulnerability(c.vulnerability_id) == nullptr) {
      out.push_back({Severity::Error, c.id,
                     "dangling reference: vulnerability '" +
                         c.vulnerability_id + "' not in catalog"});
    }
    if (c.known_vulnerability && c.dread.discoverability.value() != 10) {
      out.push_back({Severity::Warning, c.id,
                     "known vulnerability submitted with discoverability " +
                         std::to_string(c.dread.discoverability.value()) +
                         "; normalized to 10"});
      c.dread.discoverability = Score(10);
    }
  }

  for (const auto& m : catalog.mitigations) {
    if (m.targets.empty()) {
      out.push_back({Severity::Error, m.id, "mitigation has no targets"});
    }
    if (m.attributes.empty()) {
      out.push_back({Severity::Error, m.id,
                     "mitigation needs at least one resilience attribute"});
    }
    for (const auto& target : m.targets) {
      if (const auto* t = std::get_if<ThreatTarget>(&target)) {
        if (catalog.find_threat(t->id) == nullptr &&
            catalog.find_cyber_entry(t->id) == nullptr) {
          out.push_back({Severity::Error, m.id,
                         "dangling reference: target threat '" + t->id +
                             "' not in catalog"});
        }
      }
    }
    for (auto [fraction, label] :
         {std::pair{&m.vuln_reduction, "vuln_reduction"},
          std::pair{&m.impact_reduction, "impact_reduction"}}) {
      if (*fraction < Rational(0) || *fraction > Rational(1)) {
        out.push_back({Severity::Error, m.id,
                       std::string(label) + " " + fraction->str() +
                           " outside [0, 1]"});
      }
    }
  }

  std::set<std::string> paired;
  for (const auto& p : catalog.pairs) paired.insert(p.threat_id);
  for (const auto& t : catalog.threats) {
    if (paired.count(t.id) == 0) {
      out.push_back({Severity::Warning, t.id,
                     "unpaired threat (no pair assessment; not in register)"});
    }
  }

  if (catalog.dependency_graph.has_value()) {
    detail::validate_graph(*catalog.dependency_graph, out);
  }

  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gridrisk
