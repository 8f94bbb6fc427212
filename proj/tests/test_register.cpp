#include <catch2/catch_amalgamated.hpp>

#include <tuple>

#include "support.hpp"

using namespace gridrisk;
using testsupport::Rng;

namespace {

std::vector<std::int64_t> scores_of(const RiskRegister& reg) {
  std::vector<std::int64_t> out;
  for (const auto& e : reg.entries) out.push_back(e.risk_score.numerator());
  return out;
}

const RiskEntry& entry_for(const RiskRegister& reg, std::string_view threat_id) {
  for (const auto& e : reg.entries) {
    if (e.threat.id == threat_id) return e;
  }
  FAIL("no entry for threat " << threat_id);
  return reg.entries.front();
}

}  // namespace

TEST_CASE("combined register reproduces the sample site") {
  Catalog c = load_catalog(testsupport::data_path("florida-coast.json").string());
  RiskRegister reg = assemble_register(c);

  REQUIRE(reg.entries.size() == 9);
  CHECK(scores_of(reg) ==
        std::vector<std::int64_t>{567, 480, 448, 300, 300, 175, 144, 64, 24});
  for (size_t i = 0; i < reg.entries.size(); ++i) {
    CHECK(reg.entries[i].rank == static_cast<int>(i) + 1);
  }

  // Cyber triples come straight from the DREAD mapping.
  const RiskEntry& sniffing = entry_for(reg, "data-sniffing");
  CHECK(sniffing.triple == RiskTriple{Rational(5), Rational(10), Rational(6)});
  CHECK(sniffing.auxiliary_dread == Rational(32, 5));
  const RiskEntry& dos = entry_for(reg, "dos");
  CHECK(dos.triple == RiskTriple{Rational(6), Rational(10), Rational(8)});
  CHECK(dos.exact_triple.impact == Rational(17, 2));
  CHECK(dos.auxiliary_dread == Rational(39, 5));
  const RiskEntry& tampering = entry_for(reg, "data-tampering");
  CHECK(tampering.triple == RiskTriple{Rational(3), Rational(10), Rational(10)});
  CHECK(tampering.auxiliary_dread == Rational(36, 5));

  // Equal 300s: magnitude of impact breaks the tie.
  CHECK(tampering.rank < sniffing.rank);
  CHECK(tampering.rank == 4);
  CHECK(sniffing.rank == 5);

  // Physical entries carry no auxiliary score.
  CHECK_FALSE(entry_for(reg, "storm").auxiliary_dread.has_value());
}

TEST_CASE("empty catalog yields an empty register") {
  Catalog c;
  RiskRegister reg = assemble_register(c);
  CHECK(reg.entries.empty());
  CHECK_FALSE(reg.catalog_fingerprint.empty());
}

TEST_CASE("register is deterministic under catalog shuffling") {
  Rng rng(2025);
  for (int i = 0; i < 30; ++i) {
    Catalog c = testsupport::random_catalog(rng);
    RiskRegister base = assemble_register(c);
    CHECK(base.entries.size() == c.pairs.size() + c.cyber_entries.size());
    for (int k = 0; k < 5; ++k) {
      RiskRegister shuffled =
          assemble_register(testsupport::shuffled_catalog(c, rng));
      CHECK(shuffled == base);
      CHECK(emit_register_doc(shuffled) == emit_register_doc(base));
    }
  }
}

TEST_CASE("order matches a naive comparator") {
  Rng rng(555);
  for (int i = 0; i < 40; ++i) {
    Catalog c = testsupport::random_catalog(rng);
    RiskRegister reg = assemble_register(c);

    // Recompute every row from raw catalog inputs with plain integers.
    struct Row {
      long score;
      long impact;
      std::string tid, vid;
    };
    auto nearest_even = [](int num, int den) {
      int q = num / den;
      int rem = num % den;
      if (2 * rem > den) return q + 1;
      if (2 * rem < den) return q;
      return q % 2 == 0 ? q : q + 1;
    };
    std::vector<Row> rows;
    for (const auto& p : c.pairs) {
      const Threat* t = c.find_threat(p.threat_id);
      rows.push_back({static_cast<long>(t->likelihood.value()) *
                          p.p_vulnerability.value() * p.impact.value(),
                      p.impact.value(), p.threat_id, p.vulnerability_id});
    }
    for (const auto& e : c.cyber_entries) {
      int pt = nearest_even(e.dread.reproducibility.value() +
                                e.dread.exploitability.value(),
                            2);
      int pv = e.dread.discoverability.value();
      int im = nearest_even(e.dread.damage.value() +
                                e.dread.affected_users.value(),
                            2);
      rows.push_back({static_cast<long>(pt) * pv * im, im, e.id,
                      e.vulnerability_id});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return std::tuple(-a.score, -a.impact, a.tid, a.vid) <
             std::tuple(-b.score, -b.impact, b.tid, b.vid);
    });

    REQUIRE(rows.size() == reg.entries.size());
    for (size_t k = 0; k < rows.size(); ++k) {
      CHECK(rows[k].tid == reg.entries[k].threat.id);
      CHECK(rows[k].vid == reg.entries[k].vulnerability.id);
      CHECK(Rational(rows[k].score) == reg.entries[k].risk_score);
    }
  }
}

TEST_CASE("diff of a register with itself is empty") {
  Catalog c = load_catalog(testsupport::data_path("florida-coast.json").string());
  RiskRegister reg = assemble_register(c);
  CHECK(diff_registers(reg, reg).empty());
}

TEST_CASE("diff reports score and rank movement") {
  Catalog c = load_catalog(testsupport::data_path("florida-coast.json").string());
  RiskRegister base = assemble_register(c);

  Catalog edited = c;
  for (auto& p : edited.pairs) {
    if (p.threat_id == "storm") p.p_vulnerability = Score(2);
  }
  RiskRegister revised = assemble_register(edited);

  RegisterDiff diff = diff_registers(base, revised);
  CHECK(diff.added.empty());
  CHECK(diff.removed.empty());

  bool found_storm = false;
  for (const auto& ch : diff.changed) {
    if (ch.threat.id == "storm") {
      found_storm = true;
      CHECK(ch.old_score == Rational(567));
      CHECK(ch.new_score == Rational(162));
      CHECK(ch.old_rank == 1);
      // 162 lands below the 175 entry in the re-sorted register.
      CHECK(ch.new_rank == 6);
    }
  }
  CHECK(found_storm);
}

TEST_CASE("diff against an empty register reports additions") {
  Catalog c = load_catalog(testsupport::data_path("florida-coast.json").string());
  RiskRegister reg = assemble_register(c);
  RegisterDiff diff = diff_registers(RiskRegister{}, reg);
  CHECK(diff.added.size() == reg.entries.size());
  CHECK(diff.removed.empty());
  CHECK(diff.changed.empty());
  RegisterDiff reverse = diff_registers(reg, RiskRegister{});
  CHECK(reverse.removed.size() == reg.entries.size());
}
