#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridrisk/catalog.hpp"
#include "gridrisk/risk_register.hpp"
#include "gridrisk/scoring.hpp"

namespace gridrisk {

/// Per-node service status after a failure set is propagated.
struct ServiceReport {
  std::vector<std::pair<std::string, bool>> node_status;  // sorted by id, true = up
  std::vector<std::string> unserved_loads;                // sorted by id

  bool is_up(std::string_view id) const {
    for (const auto& [node, up] : node_status) {
      if (node == id) return up;
    }
    return false;
  }
};

/// Fixpoint evaluation in topological order. A source is up iff it has not
/// failed; an AllInputs node is up iff every supplier is up; an AnyInput
/// node is up iff at least one supplier is up.
inline ServiceReport propagate_failure(const DependencyGraph& graph,
                                       const std::vector<std::string>& failed_sources) {
  std::map<std::string, const GraphNode*> nodes;
  for (const auto& n : graph.nodes) nodes[n.id] = &n;

  std::set<std::string> failed;
  for (const auto& id : failed_sources) {
    auto it = nodes.find(id);
    if (it == nodes.end()) {
      throw UnknownNodeError("unknown node '" + id + "'");
    }
    if (it->second->kind != NodeKind::Source) {
      throw UnknownNodeError("node '" + id + "' is not a Source");
    }
    failed.insert(id);
  }

  std::map<std::string, std::vector<std::string>> suppliers;
  std::map<std::string, std::vector<std::string>> consumers;
  std::map<std::string, int> degree;
  for (const auto& n : graph.nodes) degree[n.id] = 0;
  for (const auto& e : graph.edges) {
    if (nodes.count(e.from) == 0 || nodes.count(e.to) == 0) {
      throw UnknownNodeError("edge references unknown node '" +
                             (nodes.count(e.from) == 0 ? e.from : e.to) + "'");
    }
    suppliers[e.to].push_back(e.from);
    consumers[e.from].push_back(e.to);
    degree[e.to] += 1;
  }

  std::vector<std::string> ready;
  for (const auto& [id, d] : degree) {
    if (d == 0) ready.push_back(id);
  }
  std::map<std::string, bool> up;
  size_t visited = 0;
  while (!ready.empty()) {
    std::string id = ready.back();
    ready.pop_back();
    ++visited;
    const GraphNode* node = nodes.at(id);
    bool status;
    if (node->kind == NodeKind::Source) {
      status = failed.count(id) == 0;
    } else {
      const auto& in = suppliers[id];
      if (node->logic == NodeLogic::AllInputs) {
        status = std::all_of(in.begin(), in.end(),
                             [&](const std::string& s) { return up.at(s); });
      } else {
        status = std::any_of(in.begin(), in.end(),
                             [&](const std::string& s) { return up.at(s); });
      }
    }
    up[id] = status;
    for (const auto& next : consumers[id]) {
      if (--degree[next] == 0) ready.push_back(next);
    }
  }
  if (visited < nodes.size()) {
    throw CycleError("dependency graph has a cycle");
  }

  ServiceReport report;
  for (const auto& [id, status] : up) {
    report.node_status.emplace_back(id, status);
  }
  for (const auto& n : graph.nodes) {
    if (n.kind == NodeKind::Load && !up.at(n.id)) {
      report.unserved_loads.push_back(n.id);
    }
  }
  std::sort(report.unserved_loads.begin(), report.unserved_loads.end());
  return report;
}

/// One interdependency what-if: which supplies fail together, how likely
/// that is, and the elicited exploitation/impact scores.
struct FailureScenario {
  std::string id;
  std::string name;
  std::vector<std::string> failed_sources;
  Score likelihood;
  Score p_vulnerability;
  Score impact;
};

/// A register-compatible row produced from a scenario: the vulnerability
/// description is the computed unserved-load set, and the score flows
/// through the standard risk-factor product.
struct ScenarioRiskEntry {
  FailureScenario scenario;
  std::vector<std::string> unserved_loads;
  std::string vulnerability_note;
  RiskTriple triple;
  Rational risk_score;
};

inline std::string format_unserved(const std::vector<std::string>& loads) {
  if (loads.empty()) return "unserved loads: (none)";
  std::string out = "unserved loads: ";
  for (size_t i = 0; i < loads.size(); ++i) {
    if (i > 0) out += ", ";
    out += loads[i];
  }
  return out;
}

inline std::vector<ScenarioRiskEntry> interdependency_risk_entries(
    const DependencyGraph& graph, const std::vector<FailureScenario>& scenarios) {
  std::vector<ScenarioRiskEntry> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    ScenarioRiskEntry entry;
    entry.scenario = s;
    entry.unserved_loads = propagate_failure(graph, s.failed_sources).unserved_loads;
    entry.vulnerability_note = format_unserved(entry.unserved_loads);
    entry.triple = RiskTriple{s.likelihood.rational(),
                              s.p_vulnerability.rational(), s.impact.rational()};
    entry.risk_score = physical_risk_score(entry.triple);
    out.push_back(std::move(entry));
  }
  return out;
}

/// Folds a scenario row into the register's entry shape (domain
/// Interdependency) so it can be ranked next to pair and cyber entries.
inline RiskEntry to_risk_entry(const ScenarioRiskEntry& s) {
  RiskEntry e;
  e.threat = {s.scenario.id, s.scenario.name};
  e.vulnerability = {s.scenario.id, s.vulnerability_note};
  e.domain = ResilienceDomain::Interdependency;
  e.exact_triple = s.triple;
  e.triple = integerize_triple(s.triple);
  e.risk_score = physical_risk_score(e.triple);
  return e;
}

}  // namespace gridrisk
