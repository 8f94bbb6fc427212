#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridrisk/gridrisk.hpp"

namespace testsupport {

using namespace gridrisk;

inline std::filesystem::path repo_root() {
  if (const char* env = std::getenv("GRIDRISK_ROOT")) {
    return std::filesystem::path(env);
  }
  // Fall back to walking up from the current directory.
  auto dir = std::filesystem::current_path();
  for (int i = 0; i < 6; ++i) {
    if (std::filesystem::exists(dir / "data" / "florida-coast.json")) {
      return dir;
    }
    dir = dir.parent_path();
  }
  return std::filesystem::current_path();
}

inline std::filesystem::path data_path(const std::string& name) {
  return repo_root() / "data" / name;
}

using Rng = std::mt19937;

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Score rand_score(Rng& rng) { return Score(rand_int(rng, 0, 10)); }

/// Rational in [0, 1] with a small denominator.
inline Rational rand_fraction(Rng& rng) {
  int den = rand_int(rng, 1, 10);
  int num = rand_int(rng, 0, den);
  return Rational(num, den);
}

/// Rational in [0, 10] with denominator 1, 2, 4, or 5.
inline Rational rand_component(Rng& rng) {
  static const int dens[] = {1, 2, 4, 5};
  int den = dens[rand_int(rng, 0, 3)];
  return Rational(rand_int(rng, 0, 10 * den), den);
}

inline std::string rand_name(Rng& rng) {
  static const char* words[] = {"surge",  "relay",   "feeder", "storm",
                                "outage", "breaker", "sensor", "inverter"};
  std::string name = words[rand_int(rng, 0, 7)];
  name += ' ';
  name += words[rand_int(rng, 0, 7)];
  switch (rand_int(rng, 0, 9)) {
    case 0:
      name += ", with commas";
      break;
    case 1:
      name += " \"quoted\"";
      break;
    case 2:
      name += "\nsecond line";
      break;
    default:
      break;
  }
  return name;
}

template <typename E, size_t N>
E rand_enum(Rng& rng, const std::array<std::pair<E, std::string_view>, N>& table) {
  return table[static_cast<size_t>(rand_int(rng, 0, static_cast<int>(N) - 1))]
      .first;
}

inline const std::string& rand_of(Rng& rng, const std::vector<std::string>& v) {
  return v[static_cast<size_t>(rand_int(rng, 0, static_cast<int>(v.size()) - 1))];
}

/// Random AND/OR dependency graph: a few sources feeding a layered DAG of
/// converters whose sinks become loads.
inline DependencyGraph random_graph(Rng& rng, int max_internal = 12,
                                    int max_sources = 5) {
  DependencyGraph g;
  int n_sources = rand_int(rng, 1, max_sources);
  int n_internal = rand_int(rng, 1, max_internal);
  for (int i = 0; i < n_sources; ++i) {
    GraphNode n;
    n.id = "s" + std::to_string(i);
    n.kind = NodeKind::Source;
    n.logic = NodeLogic::AnyInput;
    n.commodity = rand_enum(rng, detail::EnumTable<Commodity>::names);
    g.nodes.push_back(n);
  }
  std::vector<std::string> feedable;
  for (const auto& n : g.nodes) feedable.push_back(n.id);
  std::set<std::string> has_outgoing;
  for (int i = 0; i < n_internal; ++i) {
    GraphNode n;
    n.id = "n" + std::to_string(i);
    n.kind = NodeKind::Converter;  // sinks reclassified below
    n.logic = rand_int(rng, 0, 1) == 0 ? NodeLogic::AllInputs
                                       : NodeLogic::AnyInput;
    n.commodity = rand_enum(rng, detail::EnumTable<Commodity>::names);
    int fan_in =
        rand_int(rng, 1, std::min(3, static_cast<int>(feedable.size())));
    std::set<std::string> chosen;
    while (static_cast<int>(chosen.size()) < fan_in) {
      chosen.insert(rand_of(rng, feedable));
    }
    for (const auto& from : chosen) {
      g.edges.push_back({from, n.id, n.commodity});
      has_outgoing.insert(from);
    }
    g.nodes.push_back(n);
    feedable.push_back(n.id);
  }
  for (auto& n : g.nodes) {
    if (n.kind == NodeKind::Converter && has_outgoing.count(n.id) == 0) {
      n.kind = NodeKind::Load;
    }
  }
  return g;
}

inline std::vector<std::string> source_ids(const DependencyGraph& g) {
  std::vector<std::string> out;
  for (const auto& n : g.nodes) {
    if (n.kind == NodeKind::Source) out.push_back(n.id);
  }
  return out;
}

/// Independent oracle: evaluate one node's AND/OR formula by plain
/// recursion over the edge list.
inline bool brute_force_up(const DependencyGraph& g, const std::string& id,
                           const std::set<std::string>& failed) {
  const GraphNode* node = g.find_node(id);
  if (node->kind == NodeKind::Source) return failed.count(id) == 0;
  bool all = true;
  bool any = false;
  bool has_input = false;
  for (const auto& e : g.edges) {
    if (e.to != id) continue;
    has_input = true;
    bool up = brute_force_up(g, e.from, failed);
    all = all && up;
    any = any || up;
  }
  if (node->logic == NodeLogic::AllInputs) return !has_input || all;
  return has_input && any;
}

/// Random valid catalog for round-trip and determinism properties.
inline Catalog random_catalog(Rng& rng, bool with_graph = false) {
  Catalog c;
  int n_threats = rand_int(rng, 1, 6);
  int n_vulns = rand_int(rng, 1, 6);
  for (int i = 0; i < n_threats; ++i) {
    Threat t;
    t.id = "t" + std::to_string(i);
    t.name = rand_name(rng);
    t.category = rand_enum(rng, detail::EnumTable<ThreatCategory>::names);
    t.domain = rand_enum(rng, detail::EnumTable<ResilienceDomain>::names);
    t.likelihood = rand_score(rng);
    t.evidence = rand_int(rng, 0, 1) ? rand_name(rng) : "";
    c.threats.push_back(t);
  }
  for (int i = 0; i < n_vulns; ++i) {
    Vulnerability v;
    v.id = "v" + std::to_string(i);
    v.name = rand_name(rng);
    v.cls = rand_enum(rng, detail::EnumTable<VulnerabilityClass>::names);
    v.description = rand_int(rng, 0, 1) ? rand_name(rng) : "";
    c.vulnerabilities.push_back(v);
  }
  std::set<std::pair<int, int>> used;
  int n_pairs = rand_int(rng, 0, n_threats * n_vulns);
  for (int i = 0; i < n_pairs; ++i) {
    int ti = rand_int(rng, 0, n_threats - 1);
    int vi = rand_int(rng, 0, n_vulns - 1);
    if (!used.insert({ti, vi}).second) continue;
    PairAssessment p;
    p.threat_id = c.threats[ti].id;
    p.vulnerability_id = c.vulnerabilities[vi].id;
    p.p_vulnerability = rand_score(rng);
    p.impact = rand_score(rng);
    c.pairs.push_back(p);
  }
  int n_cyber = rand_int(rng, 0, 4);
  for (int i = 0; i < n_cyber; ++i) {
    CyberThreatEntry e;
    e.id = "c" + std::to_string(i);
    e.name = rand_name(rng);
    e.attack_surface = rand_enum(rng, detail::EnumTable<AttackSurface>::names);
    int n_tags = rand_int(rng, 0, 2);
    for (int k = 0; k < n_tags; ++k) {
      auto tag = rand_enum(rng, detail::EnumTable<StrideCategory>::names);
      if (std::find(e.stride_tags.begin(), e.stride_tags.end(), tag) ==
          e.stride_tags.end()) {
        e.stride_tags.push_back(tag);
      }
    }
    e.cia_class = rand_enum(rng, detail::EnumTable<CiaClass>::names);
    e.vulnerability_id = c.vulnerabilities[rand_int(rng, 0, n_vulns - 1)].id;
    e.dread = DreadScore{rand_score(rng), rand_score(rng), rand_score(rng),
                         rand_score(rng), rand_score(rng)};
    e.known_vulnerability = rand_int(rng, 0, 3) == 0;
    if (e.known_vulnerability) e.dread.discoverability = Score(10);
    c.cyber_entries.push_back(e);
  }
  int n_mitigations = rand_int(rng, 0, 5);
  for (int i = 0; i < n_mitigations; ++i) {
    Mitigation m;
    m.id = "m" + std::to_string(i);
    m.name = rand_name(rng);
    m.attributes.push_back(
        rand_enum(rng, detail::EnumTable<ResilienceAttribute>::names));
    m.phase = rand_enum(rng, detail::EnumTable<MitigationPhase>::names);
    m.kind = rand_enum(rng, detail::EnumTable<MitigationKind>::names);
    switch (rand_int(rng, 0, 2)) {
      case 0:
        m.targets.push_back(
            ThreatTarget{c.threats[rand_int(rng, 0, n_threats - 1)].id});
        break;
      case 1:
        m.targets.push_back(
            rand_enum(rng, detail::EnumTable<VulnerabilityClass>::names));
        break;
      default:
        m.targets.push_back(
            rand_enum(rng, detail::EnumTable<AttackSurface>::names));
        break;
    }
    m.vuln_reduction = rand_fraction(rng);
    m.impact_reduction = rand_fraction(rng);
    m.difficulty = rand_score(rng);
    m.cost = rand_score(rng);
    c.mitigations.push_back(m);
  }
  if (with_graph) c.dependency_graph = random_graph(rng, 6, 3);
  return c;
}

inline Catalog shuffled_catalog(const Catalog& c, Rng& rng) {
  Catalog out = c;
  std::shuffle(out.threats.begin(), out.threats.end(), rng);
  std::shuffle(out.vulnerabilities.begin(), out.vulnerabilities.end(), rng);
  std::shuffle(out.pairs.begin(), out.pairs.end(), rng);
  std::shuffle(out.cyber_entries.begin(), out.cyber_entries.end(), rng);
  std::shuffle(out.mitigations.begin(), out.mitigations.end(), rng);
  if (out.dependency_graph.has_value()) {
    std::shuffle(out.dependency_graph->nodes.begin(),
                 out.dependency_graph->nodes.end(), rng);
    std::shuffle(out.dependency_graph->edges.begin(),
                 out.dependency_graph->edges.end(), rng);
  }
  return out;
}

}  // namespace testsupport
