#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gridrisk/catalog.hpp"
#include "gridrisk/catalog_io.hpp"
#include "gridrisk/scoring.hpp"

namespace gridrisk {

struct EntityRef {
  std::string id;
  std::string name;

  friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

/// One scored threat-vulnerability combination. Physical entries carry the
/// elicited scores directly; cyber entries carry the mapped DREAD triple
/// plus the DREAD mean as an auxiliary score.
struct RiskEntry {
  EntityRef threat;
  EntityRef vulnerability;
  ResilienceDomain domain = ResilienceDomain::Physical;
  RiskTriple triple;        // integerized
  RiskTriple exact_triple;  // before rounding
  Rational risk_score;      // product of the integerized components
  std::optional<Rational> auxiliary_dread;
  int rank = 0;

  friend bool operator==(const RiskEntry&, const RiskEntry&) = default;
};

struct RiskRegister {
  std::vector<RiskEntry> entries;
  std::string catalog_fingerprint;

  friend bool operator==(const RiskRegister&, const RiskRegister&) = default;
};

namespace detail {

/// Sort key: score desc, integerized impact desc, then ids ascending.
/// Equal scores are ordered by magnitude of damage first.
inline auto entry_order_key(const RiskEntry& e) {
  return std::tuple(e.risk_score, e.triple.impact);
}

inline bool entry_before(const RiskEntry& a, const RiskEntry& b) {
  auto ka = entry_order_key(a);
  auto kb = entry_order_key(b);
  if (ka != kb) return ka > kb;
  return std::tie(a.threat.id, a.vulnerability.id) <
         std::tie(b.threat.id, b.vulnerability.id);
}

}  // namespace detail

/// Sorts and 1-bases ranks in place.
inline void rank_entries(std::vector<RiskEntry>& entries) {
  std::sort(entries.begin(), entries.end(), detail::entry_before);
  int rank = 1;
  for (auto& e : entries) e.rank = rank++;
}

/// Builds the combined cyber-physical register: one entry per pair
/// assessment and one per cyber entry, ranked by descending risk score.
/// Output is a pure function of catalog content; list order in the file
/// does not matter.
inline RiskRegister assemble_register(const Catalog& catalog) {
  RiskRegister out;
  out.catalog_fingerprint = catalog_fingerprint(catalog);

  for (const auto& p : catalog.pairs) {
    const Threat* threat = catalog.find_threat(p.threat_id);
    const Vulnerability* vuln = catalog.find_vulnerability(p.vulnerability_id);
    if (threat == nullptr || vuln == nullptr) {
      throw ValidationError("pair '" + p.threat_id + "/" + p.vulnerability_id +
                            "': dangling reference");
    }
    RiskEntry e;
    e.threat = {threat->id, threat->name};
    e.vulnerability = {vuln->id, vuln->name};
    e.domain = threat->domain;
    e.exact_triple = RiskTriple{threat->likelihood.rational(),
                                p.p_vulnerability.rational(),
                                p.impact.rational()};
    e.triple = integerize_triple(e.exact_triple);
    e.risk_score = physical_risk_score(e.triple);
    out.entries.push_back(std::move(e));
  }

  for (const auto& c : catalog.cyber_entries) {
    const Vulnerability* vuln = catalog.find_vulnerability(c.vulnerability_id);
    if (vuln == nullptr) {
      throw ValidationError("cyber entry '" + c.id + "': dangling reference");
    }
    RiskEntry e;
    e.threat = {c.id, c.name};
    e.vulnerability = {vuln->id, vuln->name};
    e.domain = ResilienceDomain::Cyber;
    e.exact_triple = map_dread_to_triple(c.dread);
    e.triple = integerize_triple(e.exact_triple);
    e.risk_score = physical_risk_score(e.triple);
    e.auxiliary_dread = dread_overall(c.dread);
    out.entries.push_back(std::move(e));
  }

  rank_entries(out.entries);
  return out;
}

/// Change report between two register revisions, keyed by
/// (threat id, vulnerability id).
struct RegisterDiff {
  struct Change {
    EntityRef threat;
    EntityRef vulnerability;
    Rational old_score;
    Rational new_score;
    int old_rank = 0;
    int new_rank = 0;
  };

  std::vector<RiskEntry> added;    // sorted by new rank
  std::vector<RiskEntry> removed;  // sorted by old rank
  std::vector<Change> changed;     // sorted by new rank

  bool empty() const {
    return added.empty() && removed.empty() && changed.empty();
  }
};

inline RegisterDiff diff_registers(const RiskRegister& before,
                                   const RiskRegister& after) {
  RegisterDiff diff;
  auto key = [](const RiskEntry& e) {
    return std::pair(e.threat.id, e.vulnerability.id);
  };

  for (const auto& e : after.entries) {
    const RiskEntry* old_entry = nullptr;
    for (const auto& o : before.entries) {
      if (key(o) == key(e)) {
        old_entry = &o;
        break;
      }
    }
    if (old_entry == nullptr) {
      diff.added.push_back(e);
    } else if (old_entry->risk_score != e.risk_score ||
               old_entry->rank != e.rank) {
      diff.changed.push_back({e.threat, e.vulnerability, old_entry->risk_score,
                              e.risk_score, old_entry->rank, e.rank});
    }
  }
  for (const auto& o : before.entries) {
    bool present = false;
    for (const auto& e : after.entries) {
      if (key(e) == key(o)) {
        present = true;
        break;
      }
    }
    if (!present) diff.removed.push_back(o);
  }

  std::sort(diff.added.begin(), diff.added.end(),
            [](const RiskEntry& a, const RiskEntry& b) { return a.rank < b.rank; });
  std::sort(diff.removed.begin(), diff.removed.end(),
            [](const RiskEntry& a, const RiskEntry& b) { return a.rank < b.rank; });
  std::sort(diff.changed.begin(), diff.changed.end(),
            [](const RegisterDiff::Change& a, const RegisterDiff::Change& b) {
              return a.new_rank < b.new_rank;
            });
  return diff;
}

}  // namespace gridrisk
