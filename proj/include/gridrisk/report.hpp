#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gridrisk/catalog_io.hpp"
#include "gridrisk/dependency.hpp"
#include "gridrisk/mitigation.hpp"
#include "gridrisk/risk_register.hpp"

namespace gridrisk {

/// RFC-4180-style field quoting, LF newlines, UTF-8 passthrough.
inline std::string csv_field(std::string_view value) {
  bool needs_quotes = value.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline constexpr std::string_view kRegisterCsvHeader =
    "Threat,Type of Threat,Vulnerability,Probability of Threat,"
    "Probability of Vulnerability,Impact of Vulnerability,Risk Score,Rank";

/// Ranked register as CSV, mirroring the combined risk-score table layout.
inline std::string emit_register_csv(const RiskRegister& reg) {
  std::string out(kRegisterCsvHeader);
  out += '\n';
  for (const auto& e : reg.entries) {
    out += csv_field(e.threat.name);
    out += ',';
    out += to_string(e.domain);
    out += ',';
    out += csv_field(e.vulnerability.name);
    out += ',';
    out += format_decimal(e.triple.p_threat);
    out += ',';
    out += format_decimal(e.triple.p_vulnerability);
    out += ',';
    out += format_decimal(e.triple.impact);
    out += ',';
    out += format_decimal(e.risk_score);
    out += ',';
    out += std::to_string(e.rank);
    out += '\n';
  }
  return out;
}

/// Lossless structured form: exact triples and scores ride along as
/// fraction strings, so emit -> parse -> emit is byte-identical.
inline Json register_to_json(const RiskRegister& reg) {
  Json doc = Json::object();
  doc["kind"] = "risk_register";
  doc["catalog_fingerprint"] = reg.catalog_fingerprint;
  doc["entries"] = Json::array();
  for (const auto& e : reg.entries) {
    Json j = Json::object();
    j["rank"] = e.rank;
    j["threat_id"] = e.threat.id;
    j["threat_name"] = e.threat.name;
    j["vulnerability_id"] = e.vulnerability.id;
    j["vulnerability_name"] = e.vulnerability.name;
    j["domain"] = std::string(to_string(e.domain));
    j["p_threat"] = e.triple.p_threat.numerator();
    j["p_vulnerability"] = e.triple.p_vulnerability.numerator();
    j["impact"] = e.triple.impact.numerator();
    j["exact_p_threat"] = e.exact_triple.p_threat.str();
    j["exact_p_vulnerability"] = e.exact_triple.p_vulnerability.str();
    j["exact_impact"] = e.exact_triple.impact.str();
    j["risk_score"] = e.risk_score.str();
    if (e.auxiliary_dread.has_value()) {
      j["auxiliary_dread"] = e.auxiliary_dread->str();
    }
    doc["entries"].push_back(std::move(j));
  }
  return doc;
}

inline std::string emit_register_doc(const RiskRegister& reg) {
  return register_to_json(reg).dump(2) + "\n";
}

inline RiskRegister parse_register_doc(std::string_view bytes) {
  Json doc = detail::parse_json(bytes, "register document");
  detail::expect_object(doc, "register document");
  detail::reject_unknown_keys(doc, {"kind", "catalog_fingerprint", "entries"},
                              "register document");
  if (detail::get_string(doc, "kind", "register document") != "risk_register") {
    throw ValidationError("register document: kind must be 'risk_register'");
  }
  RiskRegister reg;
  reg.catalog_fingerprint =
      detail::get_string(doc, "catalog_fingerprint", "register document");
  for (const auto& j : detail::get_array(doc, "entries", "register document")) {
    detail::expect_object(j, "register entry");
    std::string ctx = "register entry";
    detail::reject_unknown_keys(
        j,
        {"rank", "threat_id", "threat_name", "vulnerability_id",
         "vulnerability_name", "domain", "p_threat", "p_vulnerability",
         "impact", "exact_p_threat", "exact_p_vulnerability", "exact_impact",
         "risk_score", "auxiliary_dread"},
        ctx);
    RiskEntry e;
    e.rank = static_cast<int>(detail::get_integer(j, "rank", ctx));
    e.threat.id = detail::get_string(j, "threat_id", ctx);
    e.threat.name = detail::get_string(j, "threat_name", ctx);
    e.vulnerability.id = detail::get_string(j, "vulnerability_id", ctx);
    e.vulnerability.name = detail::get_string(j, "vulnerability_name", ctx);
    e.domain = detail::get_enum<ResilienceDomain>(j, "domain", ctx);
    e.triple.p_threat = Rational(detail::get_integer(j, "p_threat", ctx));
    e.triple.p_vulnerability =
        Rational(detail::get_integer(j, "p_vulnerability", ctx));
    e.triple.impact = Rational(detail::get_integer(j, "impact", ctx));
    e.exact_triple.p_threat =
        Rational::parse(detail::get_string(j, "exact_p_threat", ctx));
    e.exact_triple.p_vulnerability =
        Rational::parse(detail::get_string(j, "exact_p_vulnerability", ctx));
    e.exact_triple.impact =
        Rational::parse(detail::get_string(j, "exact_impact", ctx));
    e.risk_score = Rational::parse(detail::get_string(j, "risk_score", ctx));
    if (const Json* aux = detail::find_key(j, "auxiliary_dread")) {
      if (!aux->is_string()) {
        throw ValidationError(ctx + ": 'auxiliary_dread' must be a string");
      }
      e.auxiliary_dread = Rational::parse(aux->get<std::string>());
    }
    reg.entries.push_back(std::move(e));
  }
  return reg;
}

inline constexpr std::array<std::string_view, 5> kDreadAxes = {
    "Damage", "Reproducibility", "Exploitability", "Affected Users",
    "Discoverability"};

/// One radar-plot polygon: a cyber threat's five DREAD attribute scores.
struct RadarSeries {
  std::string label;
  std::array<std::string_view, 5> axes = kDreadAxes;
  std::array<Score, 5> values;
};

inline std::vector<RadarSeries> emit_radar_data(
    const std::vector<CyberThreatEntry>& entries) {
  std::vector<RadarSeries> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    RadarSeries s;
    s.label = e.name;
    s.values = {e.dread.damage, e.dread.reproducibility, e.dread.exploitability,
                e.dread.affected_users, e.dread.discoverability};
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string emit_radar_doc(const std::vector<CyberThreatEntry>& entries) {
  Json doc = Json::object();
  doc["kind"] = "dread_radar";
  Json axes = Json::array();
  for (auto axis : kDreadAxes) axes.push_back(std::string(axis));
  doc["axes"] = std::move(axes);
  doc["series"] = Json::array();
  for (const auto& s : emit_radar_data(entries)) {
    Json j = Json::object();
    j["label"] = s.label;
    Json values = Json::array();
    for (const auto& v : s.values) values.push_back(v.value());
    j["values"] = std::move(values);
    doc["series"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

/// Bucketing for the bar chart's likelihood color legend. Documented tool
/// convention: low = 0-3, medium = 4-6, high = 7-10.
inline std::string_view likelihood_bucket(const Rational& p_threat) {
  if (p_threat <= Rational(3)) return "low";
  if (p_threat <= Rational(6)) return "medium";
  return "high";
}

/// One bar of the risk-score chart.
struct RiskBarDatum {
  std::string threat;
  Rational p_vulnerability;
  Rational impact;
  Rational risk_score;
  std::string_view threat_likelihood_bucket;
};

inline std::vector<RiskBarDatum> emit_bar_data(const RiskRegister& reg) {
  std::vector<RiskBarDatum> out;
  out.reserve(reg.entries.size());
  for (const auto& e : reg.entries) {
    out.push_back({e.threat.name, e.triple.p_vulnerability, e.triple.impact,
                   e.risk_score, likelihood_bucket(e.triple.p_threat)});
  }
  return out;
}

inline std::string emit_bar_doc(const RiskRegister& reg) {
  Json doc = Json::object();
  doc["kind"] = "risk_bars";
  doc["bars"] = Json::array();
  for (const auto& b : emit_bar_data(reg)) {
    Json j = Json::object();
    j["threat"] = b.threat;
    j["p_vulnerability"] = b.p_vulnerability.numerator();
    j["impact"] = b.impact.numerator();
    j["risk_score"] = b.risk_score.numerator();
    j["likelihood_bucket"] = std::string(b.threat_likelihood_bucket);
    doc["bars"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

inline constexpr std::string_view kResidualCsvHeader =
    "Threat,Vulnerability,Probability of Threat,Probability of Vulnerability,"
    "Impact of Vulnerability,Risk Score,Base Score,Reduction,"
    "Applied Mitigations,Rank";

inline std::string emit_residual_csv(const std::vector<ResidualEntry>& residuals) {
  std::string out(kResidualCsvHeader);
  out += '\n';
  for (const auto& r : residuals) {
    std::string applied;
    for (size_t i = 0; i < r.applied.size(); ++i) {
      if (i > 0) applied += "; ";
      applied += r.applied[i];
    }
    out += csv_field(r.base.threat.name);
    out += ',';
    out += csv_field(r.base.vulnerability.name);
    out += ',';
    out += format_decimal(r.residual_triple.p_threat);
    out += ',';
    out += format_decimal(r.residual_triple.p_vulnerability);
    out += ',';
    out += format_decimal(r.residual_triple.impact);
    out += ',';
    out += format_decimal(r.residual_score);
    out += ',';
    out += format_decimal(r.base.risk_score);
    out += ',';
    out += format_decimal(r.reduction);
    out += ',';
    out += csv_field(applied);
    out += ',';
    out += std::to_string(r.rank);
    out += '\n';
  }
  return out;
}

inline constexpr std::string_view kPriorityCsvHeader =
    "Mitigation,Benefit,Difficulty,Cost,Priority,Rank";

inline std::string emit_priority_csv(const std::vector<MitigationPriority>& table) {
  std::string out(kPriorityCsvHeader);
  out += '\n';
  for (const auto& p : table) {
    out += csv_field(p.id);
    out += ',';
    out += format_decimal(p.benefit);
    out += ',';
    out += std::to_string(p.difficulty.value());
    out += ',';
    out += std::to_string(p.cost.value());
    out += ',';
    out += format_decimal(p.priority);
    out += ',';
    out += std::to_string(p.rank);
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::string md_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

}  // namespace detail

/// Human-readable rollup of an assessment: the ranked register, the
/// residual picture when a plan was applied, and the mitigation priority
/// table. Sections with no content are omitted.
inline std::string emit_summary_markdown(
    const RiskRegister& reg, const std::vector<ResidualEntry>& residuals,
    const std::vector<MitigationPriority>& priorities) {
  std::string out = "# Risk assessment summary\n";
  out += "\n## Risk register\n\n";
  if (reg.entries.empty()) {
    out += "No scored entries.\n";
  } else {
    out +=
        "| Rank | Threat | Domain | Vulnerability | P(threat) | "
        "P(vulnerability) | Impact | Risk score |\n";
    out += "|---:|---|---|---|---:|---:|---:|---:|\n";
    for (const auto& e : reg.entries) {
      out += "| " + std::to_string(e.rank) + " | " +
             detail::md_escape(e.threat.name) + " | " +
             std::string(to_string(e.domain)) + " | " +
             detail::md_escape(e.vulnerability.name) + " | " +
             format_decimal(e.triple.p_threat) + " | " +
             format_decimal(e.triple.p_vulnerability) + " | " +
             format_decimal(e.triple.impact) + " | " +
             format_decimal(e.risk_score) + " |\n";
    }
  }
  if (!residuals.empty()) {
    out += "\n## Residual risk\n\n";
    out +=
        "| Rank | Threat | Vulnerability | Base score | Residual score | "
        "Reduction | Applied |\n";
    out += "|---:|---|---|---:|---:|---:|---|\n";
    for (const auto& r : residuals) {
      std::string applied;
      for (size_t i = 0; i < r.applied.size(); ++i) {
        if (i > 0) applied += ", ";
        applied += r.applied[i];
      }
      if (applied.empty()) applied = "-";
      out += "| " + std::to_string(r.rank) + " | " +
             detail::md_escape(r.base.threat.name) + " | " +
             detail::md_escape(r.base.vulnerability.name) + " | " +
             format_decimal(r.base.risk_score) + " | " +
             format_decimal(r.residual_score) + " | " +
             format_decimal(r.reduction) + " | " + detail::md_escape(applied) +
             " |\n";
    }
  }
  if (!priorities.empty()) {
    out += "\n## Mitigation priorities\n\n";
    out += "| Rank | Mitigation | Benefit | Difficulty | Cost | Priority |\n";
    out += "|---:|---|---:|---:|---:|---:|\n";
    for (const auto& p : priorities) {
      out += "| " + std::to_string(p.rank) + " | " + detail::md_escape(p.name) +
             " | " + format_decimal(p.benefit) + " | " +
             std::to_string(p.difficulty.value()) + " | " +
             std::to_string(p.cost.value()) + " | " +
             format_decimal(p.priority) + " |\n";
    }
  }
  return out;
}

/// Service report as stable text: one "<id> <up|down>" line per node
/// (sorted by id) and a final unserved-loads line.
inline std::string emit_service_report(const ServiceReport& report) {
  std::string out;
  for (const auto& [id, up] : report.node_status) {
    out += id;
    out += up ? " up" : " down";
    out += '\n';
  }
  out += format_unserved(report.unserved_loads);
  out += '\n';
  return out;
}

}  // namespace gridrisk
