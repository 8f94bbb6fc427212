#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace gridrisk;
using testsupport::Rng;

namespace {

Catalog florida() {
  return load_catalog(testsupport::data_path("florida-coast.json").string());
}

const RiskEntry& entry_for(const RiskRegister& reg, std::string_view threat_id) {
  for (const auto& e : reg.entries) {
    if (e.threat.id == threat_id) return e;
  }
  FAIL("no entry for threat " << threat_id);
  return reg.entries.front();
}

const ResidualEntry& residual_for(const std::vector<ResidualEntry>& rs,
                                  std::string_view threat_id) {
  for (const auto& r : rs) {
    if (r.base.threat.id == threat_id) return r;
  }
  FAIL("no residual for threat " << threat_id);
  return rs.front();
}

}  // namespace

TEST_CASE("applicable mitigations match by threat, class, and surface") {
  Catalog c = florida();
  RiskRegister reg = assemble_register(c);

  // Storm entry: direct threat target plus the Natural-class enclosure.
  auto storm = applicable_mitigations(entry_for(reg, "storm"), c);
  REQUIRE(storm.size() == 2);
  CHECK(storm[0].id == "elevate-assets");
  CHECK(storm[1].id == "mechanical-enclosure");

  // DoS entry: matched through its attack surface.
  auto dos = applicable_mitigations(entry_for(reg, "dos"), c);
  REQUIRE(dos.size() == 1);
  CHECK(dos[0].id == "wireless-hardening");

  // No mitigation targets the lightning entry's threat or class? It has
  // spare parts (Physical class) coverage, so pick a catalog without it.
  Catalog bare = c;
  bare.mitigations.clear();
  CHECK(applicable_mitigations(entry_for(reg, "lightning"), bare).empty());
}

TEST_CASE("empty plan leaves the register unchanged") {
  Catalog c = florida();
  RiskRegister reg = assemble_register(c);
  auto residuals = residual_register(reg, MitigationPlan{}, c);
  REQUIRE(residuals.size() == reg.entries.size());
  for (const auto& r : residuals) {
    CHECK(r.residual_score == r.base.risk_score);
    CHECK(r.residual_triple == r.base.triple);
    CHECK(r.reduction == Rational(0));
    CHECK(r.applied.empty());
    CHECK(r.rank == r.base.rank);
  }
}

TEST_CASE("elevation plan cuts the storm entry from 567 to 162") {
  Catalog c = florida();
  RiskRegister reg = assemble_register(c);
  MitigationPlan plan;
  plan.mitigation_ids = {"elevate-assets"};
  auto residuals = residual_register(reg, plan, c);

  const ResidualEntry& storm = residual_for(residuals, "storm");
  CHECK(storm.base.risk_score == Rational(567));
  CHECK(storm.residual_triple ==
        RiskTriple{Rational(9), Rational(2), Rational(9)});
  CHECK(storm.residual_score == Rational(162));
  CHECK(storm.reduction == Rational(405));
  CHECK(storm.applied == std::vector<std::string>{"elevate-assets"});
  CHECK(storm.rank == 6);

  // Everyone else is untouched.
  for (const auto& r : residuals) {
    if (r.base.threat.id != "storm") {
      CHECK(r.residual_score == r.base.risk_score);
    }
  }
}

TEST_CASE("full vulnerability elimination zeroes the entry") {
  Catalog c = florida();
  c.mitigations.push_back(Mitigation{
      "underground",
      "Bury everything",
      {ResilienceAttribute::Robustness},
      MitigationPhase::PreDisaster,
      MitigationKind::SystemHardening,
      {ThreatTarget{"storm"}},
      Rational(1),
      Rational(0),
      Score(9),
      Score(9),
  });
  RiskRegister reg = assemble_register(c);
  MitigationPlan plan;
  plan.mitigation_ids = {"underground"};
  auto residuals = residual_register(reg, plan, c);
  const ResidualEntry& storm = residual_for(residuals, "storm");
  CHECK(storm.residual_triple.p_vulnerability == Rational(0));
  CHECK(storm.residual_score == Rational(0));
  // Threat probability is never modified.
  CHECK(storm.residual_triple.p_threat == storm.base.triple.p_threat);
}

TEST_CASE("unknown plan ids are rejected") {
  Catalog c = florida();
  RiskRegister reg = assemble_register(c);
  MitigationPlan plan;
  plan.mitigation_ids = {"not-a-mitigation"};
  CHECK_THROWS_AS(residual_register(reg, plan, c), UnknownMitigationError);
}

TEST_CASE("plan files parse") {
  MitigationPlan plan =
      load_plan((testsupport::repo_root() / "data" / "plans" / "elevation.json")
                    .string());
  CHECK(plan.mitigation_ids == std::vector<std::string>{"elevate-assets"});
  CHECK(plan.w_difficulty == Rational(1));
  CHECK(plan.w_cost == Rational(1));
  CHECK_THROWS_AS(parse_plan(R"({"mitigation_ids": [], "extra": 1})"),
                  ValidationError);
  CHECK_THROWS_AS(
      parse_plan(R"({"mitigation_ids": [], "weights": {"difficulty": -1, "cost": 0}})"),
      ValidationError);
}

TEST_CASE("prioritization ranks by benefit per effort") {
  Catalog c = florida();
  RiskRegister reg = assemble_register(c);
  auto table = prioritize_mitigations(reg, c);
  REQUIRE(table.size() == c.mitigations.size());
  for (size_t i = 0; i < table.size(); ++i) {
    CHECK(table[i].rank == static_cast<int>(i) + 1);
    if (i > 0) CHECK(table[i - 1].priority >= table[i].priority);
  }
  // Single-mitigation catalog: it is trivially first.
  Catalog solo = c;
  solo.mitigations.resize(1);
  auto solo_table = prioritize_mitigations(assemble_register(solo), solo);
  REQUIRE(solo_table.size() == 1);
  CHECK(solo_table[0].rank == 1);
  CHECK(solo_table[0].id == solo.mitigations[0].id);
}

TEST_CASE("equal benefit prefers the cheaper mitigation") {
  Catalog c;
  c.threats.push_back({"t", "threat", ThreatCategory::Natural,
                       ResilienceDomain::Physical, Score(5), ""});
  c.vulnerabilities.push_back({"v", "vuln", VulnerabilityClass::Physical, ""});
  c.pairs.push_back({"t", "v", Score(6), Score(6), ""});
  Mitigation cheap{"cheap",   "cheap",
                   {ResilienceAttribute::Robustness},
                   MitigationPhase::PreDisaster,
                   MitigationKind::SystemHardening,
                   {ThreatTarget{"t"}},
                   Rational(1, 2),
                   Rational(0),
                   Score(3),
                   Score(2)};
  Mitigation costly = cheap;
  costly.id = "costly";
  costly.name = "costly";
  costly.cost = Score(8);
  c.mitigations = {costly, cheap};

  auto table = prioritize_mitigations(assemble_register(c), c);
  REQUIRE(table.size() == 2);
  CHECK(table[0].id == "cheap");
  CHECK(table[1].id == "costly");
  CHECK(table[0].benefit == table[1].benefit);
}

TEST_CASE("residual properties") {
  Rng rng(808);
  int plan_cases = 0;
  while (plan_cases < 500) {
    Catalog c = testsupport::random_catalog(rng);
    if (c.mitigations.empty()) continue;
    RiskRegister reg = assemble_register(c);

    std::vector<std::string> all_ids;
    for (const auto& m : c.mitigations) all_ids.push_back(m.id);

    MitigationPlan plan;
    for (const auto& id : all_ids) {
      if (testsupport::rand_int(rng, 0, 1) == 1) plan.mitigation_ids.push_back(id);
    }

    auto residuals = residual_register(reg, plan, c);

    // Dominance: never above the base score; p_threat untouched.
    for (const auto& r : residuals) {
      CHECK(r.residual_score <= r.base.risk_score);
      CHECK(r.residual_score >= Rational(0));
      CHECK(r.residual_triple.p_threat == r.base.triple.p_threat);
      CHECK(r.reduction == r.base.risk_score - r.residual_score);
    }

    // Plan order never matters.
    MitigationPlan reversed = plan;
    std::reverse(reversed.mitigation_ids.begin(), reversed.mitigation_ids.end());
    auto reordered = residual_register(reg, reversed, c);
    REQUIRE(reordered.size() == residuals.size());
    for (size_t i = 0; i < residuals.size(); ++i) {
      CHECK(reordered[i].residual_score == residuals[i].residual_score);
      CHECK(reordered[i].base.threat.id == residuals[i].base.threat.id);
    }

    // Supersets only shrink scores.
    auto find_residual = [&](const RiskEntry& base) -> const ResidualEntry& {
      for (const auto& r : residuals) {
        if (r.base.threat.id == base.threat.id &&
            r.base.vulnerability.id == base.vulnerability.id) {
          return r;
        }
      }
      FAIL("missing residual entry");
      return residuals.front();
    };
    if (plan.mitigation_ids.size() < all_ids.size()) {
      MitigationPlan superset = plan;
      for (const auto& id : all_ids) {
        if (std::find(superset.mitigation_ids.begin(),
                      superset.mitigation_ids.end(),
                      id) == superset.mitigation_ids.end()) {
          superset.mitigation_ids.push_back(id);
          break;
        }
      }
      auto bigger = residual_register(reg, superset, c);
      for (const auto& r : bigger) {
        CHECK(r.residual_score <= find_residual(r.base).residual_score);
      }
    }
    ++plan_cases;
  }
}

TEST_CASE("prioritization ignores catalog list order") {
  Rng rng(616);
  int cases = 0;
  while (cases < 25) {
    Catalog c = testsupport::random_catalog(rng);
    if (c.mitigations.empty()) continue;
    std::string base =
        emit_priority_csv(prioritize_mitigations(assemble_register(c), c));
    for (int k = 0; k < 4; ++k) {
      Catalog shuffled = testsupport::shuffled_catalog(c, rng);
      std::string out = emit_priority_csv(
          prioritize_mitigations(assemble_register(shuffled), shuffled));
      CHECK(out == base);
    }
    ++cases;
  }
}

TEST_CASE("negative weights are rejected") {
  Catalog c = florida();
  RiskRegister reg = assemble_register(c);
  CHECK_THROWS_AS(prioritize_mitigations(reg, c, Rational(-1), Rational(1)),
                  RangeError);
}

TEST_CASE("5R classification counts attribute-phase-kind cells") {
  Catalog c = florida();
  FiveRSummary summary = classify_5r(c);

  CHECK(summary.count(ResilienceAttribute::Recovery,
                      MitigationPhase::PostDisaster,
                      MitigationKind::Operational) == 1);
  const auto* cell = summary.cell(ResilienceAttribute::Recovery,
                                  MitigationPhase::PostDisaster,
                                  MitigationKind::Operational);
  REQUIRE(cell != nullptr);
  CHECK((*cell)[0] == "spare-parts-inventory");

  // A multi-attribute mitigation appears under each attribute.
  CHECK(summary.count(ResilienceAttribute::Response,
                      MitigationPhase::PreDisaster,
                      MitigationKind::Operational) == 1);
  CHECK(summary.count(ResilienceAttribute::Recovery,
                      MitigationPhase::PreDisaster,
                      MitigationKind::Operational) == 1);

  CHECK(classify_5r(Catalog{}).cells.empty());

  Catalog single;
  single.mitigations.push_back(Mitigation{
      "m", "m",
      {ResilienceAttribute::Robustness},
      MitigationPhase::PreDisaster,
      MitigationKind::SystemHardening,
      {VulnerabilityClass::Physical},
      Rational(0),
      Rational(0),
      Score(1),
      Score(1)});
  FiveRSummary one = classify_5r(single);
  CHECK(one.cells.size() == 1);
  CHECK(one.count(ResilienceAttribute::Robustness, MitigationPhase::PreDisaster,
                  MitigationKind::SystemHardening) == 1);
}
