#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "gridrisk/catalog.hpp"
#include "gridrisk/risk_register.hpp"
#include "gridrisk/scoring.hpp"

namespace gridrisk {

/// A what-if set of mitigations plus the prioritization weights.
struct MitigationPlan {
  std::vector<std::string> mitigation_ids;
  Rational w_difficulty = Rational(1);
  Rational w_cost = Rational(1);

  friend bool operator==(const MitigationPlan&, const MitigationPlan&) = default;
};

/// A register entry after a plan's reductions have been applied.
struct ResidualEntry {
  RiskEntry base;
  std::vector<std::string> applied;  // mitigation ids, sorted
  RiskTriple residual_triple;        // integerized
  Rational residual_score;
  Rational reduction;  // base.risk_score - residual_score
  int rank = 0;
};

struct MitigationPriority {
  std::string id;
  std::string name;
  Rational benefit;
  Score difficulty;
  Score cost;
  Rational priority;
  int rank = 0;
};

namespace detail {

inline bool target_matches(const MitigationTarget& target,
                           const RiskEntry& entry, const Catalog& catalog) {
  if (const auto* t = std::get_if<ThreatTarget>(&target)) {
    return t->id == entry.threat.id;
  }
  if (const auto* cls = std::get_if<VulnerabilityClass>(&target)) {
    const Vulnerability* v = catalog.find_vulnerability(entry.vulnerability.id);
    return v != nullptr && v->cls == *cls;
  }
  const auto& surface = std::get<AttackSurface>(target);
  const CyberThreatEntry* c = catalog.find_cyber_entry(entry.threat.id);
  return c != nullptr && c->attack_surface == surface;
}

}  // namespace detail

/// Mitigations whose targets match the entry's threat id, the paired
/// vulnerability's class, or (cyber entries) the attack surface. Ordered
/// by mitigation id.
inline std::vector<Mitigation> applicable_mitigations(const RiskEntry& entry,
                                                      const Catalog& catalog) {
  std::vector<Mitigation> out;
  for (const auto& m : catalog.mitigations) {
    for (const auto& target : m.targets) {
      if (detail::target_matches(target, entry, catalog)) {
        out.push_back(m);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Mitigation& a, const Mitigation& b) { return a.id < b.id; });
  return out;
}

namespace detail {

inline ResidualEntry apply_mitigations(const RiskEntry& base,
                                       const std::vector<const Mitigation*>& set) {
  ResidualEntry r;
  r.base = base;
  // Reductions compose multiplicatively on the exact triple; the threat
  // probability is never touched (threats are outside the site's control).
  Rational vuln_factor(1);
  Rational impact_factor(1);
  for (const Mitigation* m : set) {
    vuln_factor *= Rational(1) - m->vuln_reduction;
    impact_factor *= Rational(1) - m->impact_reduction;
    r.applied.push_back(m->id);
  }
  std::sort(r.applied.begin(), r.applied.end());
  RiskTriple exact{base.exact_triple.p_threat,
                   base.exact_triple.p_vulnerability * vuln_factor,
                   base.exact_triple.impact * impact_factor};
  r.residual_triple = integerize_triple(exact);
  r.residual_score = physical_risk_score(r.residual_triple);
  r.reduction = base.risk_score - r.residual_score;
  return r;
}

}  // namespace detail

/// Applies the plan's mitigations to every entry and re-ranks by residual
/// score (same tie-break chain as the base register). Throws
/// UnknownMitigationError for plan ids absent from the catalog.
inline std::vector<ResidualEntry> residual_register(const RiskRegister& reg,
                                                    const MitigationPlan& plan,
                                                    const Catalog& catalog) {
  std::vector<const Mitigation*> chosen;
  std::vector<std::string> ids = plan.mitigation_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const auto& id : ids) {
    const Mitigation* m = catalog.find_mitigation(id);
    if (m == nullptr) {
      throw UnknownMitigationError("plan references unknown mitigation '" +
                                   id + "'");
    }
    chosen.push_back(m);
  }

  std::vector<ResidualEntry> out;
  out.reserve(reg.entries.size());
  for (const auto& entry : reg.entries) {
    std::vector<const Mitigation*> set;
    auto applicable = applicable_mitigations(entry, catalog);
    for (const Mitigation* m : chosen) {
      for (const auto& a : applicable) {
        if (a.id == m->id) {
          set.push_back(m);
          break;
        }
      }
    }
    out.push_back(detail::apply_mitigations(entry, set));
  }

  std::sort(out.begin(), out.end(),
            [](const ResidualEntry& a, const ResidualEntry& b) {
              auto ka = std::tuple(a.residual_score, a.residual_triple.impact);
              auto kb = std::tuple(b.residual_score, b.residual_triple.impact);
              if (ka != kb) return ka > kb;
              return std::tie(a.base.threat.id, a.base.vulnerability.id) <
                     std::tie(b.base.threat.id, b.base.vulnerability.id);
            });
  int rank = 1;
  for (auto& r : out) r.rank = rank++;
  return out;
}

/// Residual entries re-packed as a register (for diffing against the base).
inline RiskRegister residuals_as_register(const std::vector<ResidualEntry>& residuals,
                                          const std::string& fingerprint) {
  RiskRegister out;
  out.catalog_fingerprint = fingerprint;
  for (const auto& r : residuals) {
    RiskEntry e = r.base;
    e.triple = r.residual_triple;
    e.risk_score = r.residual_score;
    e.rank = r.rank;
    out.entries.push_back(std::move(e));
  }
  return out;
}

/// Ranks every catalog mitigation by risk reduction per unit of adoption
/// effort: benefit(m) = total register reduction with m alone;
/// priority(m) = benefit / (1 + w_difficulty*difficulty + w_cost*cost).
inline std::vector<MitigationPriority> prioritize_mitigations(
    const RiskRegister& reg, const Catalog& catalog,
    const Rational& w_difficulty = Rational(1),
    const Rational& w_cost = Rational(1)) {
  if (w_difficulty < Rational(0) || w_cost < Rational(0)) {
    throw RangeError("prioritization weights must be >= 0");
  }
  std::vector<MitigationPriority> out;
  for (const auto& m : catalog.mitigations) {
    MitigationPlan solo;
    solo.mitigation_ids = {m.id};
    Rational benefit(0);
    for (const auto& r : residual_register(reg, solo, catalog)) {
      benefit += r.reduction;
    }
    Rational denom = Rational(1) + w_difficulty * Rational(m.difficulty.value()) +
                     w_cost * Rational(m.cost.value());
    out.push_back({m.id, m.name, benefit, m.difficulty, m.cost,
                   benefit / denom, 0});
  }
  std::sort(out.begin(), out.end(),
            [](const MitigationPriority& a, const MitigationPriority& b) {
              if (a.priority != b.priority) return a.priority > b.priority;
              if (a.benefit != b.benefit) return a.benefit > b.benefit;
              return a.id < b.id;
            });
  int rank = 1;
  for (auto& p : out) p.rank = rank++;
  return out;
}

/// Mitigation ids per (attribute, phase, kind) cell; a mitigation with
/// several attributes appears under each of them.
struct FiveRSummary {
  std::map<std::tuple<ResilienceAttribute, MitigationPhase, MitigationKind>,
           std::vector<std::string>>
      cells;

  const std::vector<std::string>* cell(ResilienceAttribute a, MitigationPhase p,
                                       MitigationKind k) const {
    auto it = cells.find({a, p, k});
    return it == cells.end() ? nullptr : &it->second;
  }

  size_t count(ResilienceAttribute a, MitigationPhase p, MitigationKind k) const {
    const auto* ids = cell(a, p, k);
    return ids == nullptr ? 0 : ids->size();
  }
};

/// Plan file: {"mitigation_ids": [...], "weights": {"difficulty": w, "cost": w}}.
/// Weights are optional and default to 1; unknown keys are rejected.
inline MitigationPlan parse_plan(std::string_view bytes) {
  Json doc = detail::parse_json(bytes, "plan");
  detail::expect_object(doc, "plan");
  detail::reject_unknown_keys(doc, {"mitigation_ids", "weights"}, "plan");
  MitigationPlan plan;
  for (const auto& id : detail::get_array(doc, "mitigation_ids", "plan")) {
    if (!id.is_string()) {
      throw ValidationError("plan: 'mitigation_ids' entries must be strings");
    }
    plan.mitigation_ids.push_back(id.get<std::string>());
  }
  if (const Json* w = detail::find_key(doc, "weights")) {
    detail::expect_object(*w, "plan weights");
    detail::reject_unknown_keys(*w, {"difficulty", "cost"}, "plan weights");
    plan.w_difficulty = detail::get_rational(*w, "difficulty", "plan weights");
    plan.w_cost = detail::get_rational(*w, "cost", "plan weights");
    if (plan.w_difficulty < Rational(0) || plan.w_cost < Rational(0)) {
      throw ValidationError("plan weights must be >= 0");
    }
  }
  return plan;
}

inline MitigationPlan load_plan(const std::string& path) {
  return parse_plan(detail::read_file(path));
}

inline FiveRSummary classify_5r(const Catalog& catalog) {
  FiveRSummary summary;
  for (const auto& m : catalog.mitigations) {
    for (auto attribute : m.attributes) {
      summary.cells[{attribute, m.phase, m.kind}].push_back(m.id);
    }
  }
  for (auto& [key, ids] : summary.cells) {
    std::sort(ids.begin(), ids.end());
  }
  return summary;
}

}  // namespace gridrisk
