// gridrisk: microgrid resilience risk assessment from the command line.
//
// One catalog file in, deterministic artifacts out. Exit codes: 0 success,
// 1 catalog/plan data errors (parse or validation), 2 usage or I/O errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "gridrisk/gridrisk.hpp"

namespace {

namespace fs = std::filesystem;
using namespace gridrisk;

bool g_quiet = false;

bool use_color() {
  static const bool enabled = [] {
    if (std::getenv("GRIDRISK_NO_COLOR") != nullptr) return false;
    return isatty(fileno(stdout)) == 1;
  }();
  return enabled;
}

std::string styled(std::string_view text, const char* code) {
  if (!use_color()) return std::string(text);
  return std::string("\033[") + code + "m" + std::string(text) + "\033[0m";
}

void note(const std::string& line) {
  if (!g_quiet) std::cout << line << "\n";
}

std::string severity_label(Severity s) {
  return s == Severity::Error ? styled("error", "31") : styled("warning", "33");
}

int cmd_validate(const std::string& catalog_path) {
  Catalog catalog = parse_catalog(detail::read_file(catalog_path));
  auto findings = validate_catalog(catalog);
  bool errors = false;
  for (const auto& f : findings) {
    if (f.severity == Severity::Error) errors = true;
    std::cout << severity_label(f.severity) << " " << f.entity << ": "
              << f.message << "\n";
  }
  if (findings.empty()) {
    note("catalog valid: " + std::to_string(catalog.threats.size()) +
         " threats, " + std::to_string(catalog.vulnerabilities.size()) +
         " vulnerabilities, " + std::to_string(catalog.pairs.size()) +
         " pairs, " + std::to_string(catalog.cyber_entries.size()) +
         " cyber entries, " + std::to_string(catalog.mitigations.size()) +
         " mitigations");
  }
  return errors ? 1 : 0;
}

int cmd_assess(const std::string& catalog_path, const std::string& out_dir,
               const std::string& format) {
  Catalog catalog = load_catalog(catalog_path);
  RiskRegister reg = assemble_register(catalog);
  fs::create_directories(out_dir);
  fs::path dir(out_dir);

  fs::path main_artifact;
  if (format == "csv") {
    main_artifact = dir / "register.csv";
    detail::write_file(main_artifact.string(), emit_register_csv(reg));
  } else if (format == "doc") {
    main_artifact = dir / "register.json";
    detail::write_file(main_artifact.string(), emit_register_doc(reg));
  } else {
    main_artifact = dir / "summary.md";
    auto priorities = prioritize_mitigations(reg, catalog);
    detail::write_file(main_artifact.string(),
                       emit_summary_markdown(reg, {}, priorities));
  }
  detail::write_file((dir / "radar.json").string(),
                     emit_radar_doc(catalog.cyber_entries));
  detail::write_file((dir / "bars.json").string(), emit_bar_doc(reg));

  note("wrote " + main_artifact.string());
  note("wrote " + (dir / "radar.json").string());
  note("wrote " + (dir / "bars.json").string());
  return 0;
}

int cmd_dread(const DreadScore* inline_scores, const std::string& catalog_path,
              const std::string& entry_id) {
  DreadScore dread;
  if (inline_scores == nullptr) {
    Catalog catalog = load_catalog(catalog_path);
    const CyberThreatEntry* entry = catalog.find_cyber_entry(entry_id);
    if (entry == nullptr) {
      throw ValidationError("no cyber entry '" + entry_id + "' in catalog");
    }
    dread = entry->dread;
  } else {
    dread = *inline_scores;
  }
  RiskTriple mapped = map_dread_to_triple(dread);
  RiskTriple integer = integerize_triple(mapped);
  std::cout << "overall: " << format_decimal(dread_overall(dread)) << "\n";
  std::cout << "triple: " << format_triple(mapped) << "\n";
  if (!(integer == mapped)) {
    std::cout << "integerized: " << format_triple(integer) << "\n";
  }
  std::cout << "risk score: " << format_decimal(physical_risk_score(integer))
            << "\n";
  return 0;
}

std::string diff_lines(const RegisterDiff& diff) {
  std::string out;
  auto key = [](const EntityRef& t, const EntityRef& v) {
    return t.id + "/" + v.id;
  };
  for (const auto& e : diff.added) {
    out += "+ " + key(e.threat, e.vulnerability) + " score " +
           format_decimal(e.risk_score) + " rank " + std::to_string(e.rank) +
           "\n";
  }
  for (const auto& e : diff.removed) {
    out += "- " + key(e.threat, e.vulnerability) + " score " +
           format_decimal(e.risk_score) + " rank " + std::to_string(e.rank) +
           "\n";
  }
  for (const auto& c : diff.changed) {
    out += "~ " + key(c.threat, c.vulnerability);
    if (c.old_score != c.new_score) {
      out += " score " + format_decimal(c.old_score) + " -> " +
             format_decimal(c.new_score);
    }
    if (c.old_rank != c.new_rank) {
      out += " rank " + std::to_string(c.old_rank) + " -> " +
             std::to_string(c.new_rank);
    }
    out += "\n";
  }
  if (out.empty()) out = "(no changes)\n";
  return out;
}

int cmd_whatif(const std::string& catalog_path, const std::string& plan_path) {
  Catalog catalog = load_catalog(catalog_path);
  MitigationPlan plan = load_plan(plan_path);
  RiskRegister base = assemble_register(catalog);
  auto residuals = residual_register(base, plan, catalog);

  std::string plan_ids;
  for (size_t i = 0; i < plan.mitigation_ids.size(); ++i) {
    if (i > 0) plan_ids += ", ";
    plan_ids += plan.mitigation_ids[i];
  }
  std::cout << "# residual register (plan: " << plan_ids << ")\n";
  std::cout << emit_residual_csv(residuals);
  std::cout << "# changes vs base register\n";
  std::cout << diff_lines(diff_registers(
      base, residuals_as_register(residuals, base.catalog_fingerprint)));
  return 0;
}

int cmd_prioritize(const std::string& catalog_path, const Rational& w_difficulty,
                   const Rational& w_cost) {
  Catalog catalog = load_catalog(catalog_path);
  RiskRegister reg = assemble_register(catalog);
  auto table = prioritize_mitigations(reg, catalog, w_difficulty, w_cost);
  std::cout << emit_priority_csv(table);
  return 0;
}

int cmd_propagate(const std::string& catalog_path,
                  const std::vector<std::string>& failed) {
  Catalog catalog = load_catalog(catalog_path);
  if (!catalog.dependency_graph.has_value()) {
    throw ValidationError("catalog has no dependency_graph section");
  }
  ServiceReport report = propagate_failure(*catalog.dependency_graph, failed);

  std::vector<std::string> sorted_failed = failed;
  std::sort(sorted_failed.begin(), sorted_failed.end());
  sorted_failed.erase(std::unique(sorted_failed.begin(), sorted_failed.end()),
                      sorted_failed.end());
  std::string header = "# service report (failed:";
  if (sorted_failed.empty()) header += " none";
  for (size_t i = 0; i < sorted_failed.size(); ++i) {
    header += i == 0 ? " " : ", ";
    header += sorted_failed[i];
  }
  header += ")";
  std::cout << header << "\n";
  std::cout << emit_service_report(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridrisk: microgrid resilience risk assessment"};
  app.require_subcommand(1);

  std::string catalog_path;
  std::string plan_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string entry_id;
  std::string w_difficulty = "1";
  std::string w_cost = "1";
  std::vector<int> dread_scores;
  std::vector<std::string> failed_sources;

  auto add_quiet = [](CLI::App* cmd) {
    cmd->add_flag("-q,--quiet", g_quiet, "suppress prose output (never data)");
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "check a catalog and list findings");
  validate->add_option("catalog", catalog_path, "catalog file")->required();
  add_quiet(validate);

  CLI::App* assess = app.add_subcommand(
      "assess", "assemble the ranked risk register and chart data");
  assess->add_option("catalog", catalog_path, "catalog file")->required();
  assess->add_option("-o,--out", out_dir, "output directory")
      ->capture_default_str();
  assess->add_option("--format", format, "register artifact format")
      ->check(CLI::IsMember({"csv", "doc", "markdown"}))
      ->capture_default_str();
  add_quiet(assess);

  CLI::App* dread = app.add_subcommand(
      "dread", "score a threat with the five-attribute cyber model");
  dread->add_option("scores", dread_scores,
                    "damage reproducibility exploitability affected_users "
                    "discoverability")
      ->expected(0, 5);
  dread->add_option("--catalog", catalog_path, "catalog file (with --entry)");
  dread->add_option("--entry", entry_id, "cyber entry id from the catalog");
  add_quiet(dread);

  CLI::App* whatif = app.add_subcommand(
      "whatif", "apply a mitigation plan and diff against the base register");
  whatif->add_option("catalog", catalog_path, "catalog file")->required();
  whatif->add_option("plan", plan_path, "plan file")->required();
  add_quiet(whatif);

  CLI::App* prioritize = app.add_subcommand(
      "prioritize", "rank mitigations by risk reduction per adoption effort");
  prioritize->add_option("catalog", catalog_path, "catalog file")->required();
  prioritize->add_option("--w-difficulty", w_difficulty, "difficulty weight")
      ->capture_default_str();
  prioritize->add_option("--w-cost", w_cost, "cost weight")
      ->capture_default_str();
  add_quiet(prioritize);

  CLI::App* propagate = app.add_subcommand(
      "propagate", "propagate utility failures through the dependency graph");
  propagate->add_option("catalog", catalog_path, "catalog file")->required();
  propagate->add_option("--fail", failed_sources, "source node id (repeatable)");
  add_quiet(propagate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(catalog_path);
    if (app.got_subcommand(assess)) {
      return cmd_assess(catalog_path, out_dir, format);
    }
    if (app.got_subcommand(dread)) {
      bool has_scores = dread_scores.size() == 5;
      bool by_entry = !entry_id.empty();
      if (has_scores == by_entry) {
        std::cerr << "dread needs either five scores or --catalog + --entry\n";
        return 2;
      }
      if (by_entry && catalog_path.empty()) {
        std::cerr << "--entry requires --catalog\n";
        return 2;
      }
      DreadScore inline_scores;
      if (has_scores) {
        try {
          inline_scores =
              DreadScore{Score(dread_scores[0]), Score(dread_scores[1]),
                         Score(dread_scores[2]), Score(dread_scores[3]),
                         Score(dread_scores[4])};
        } catch (const RangeError& e) {
          std::cerr << "error: " << e.what() << "\n";
          return 2;
        }
      }
      return cmd_dread(has_scores ? &inline_scores : nullptr, catalog_path,
                       entry_id);
    }
    if (app.got_subcommand(whatif)) return cmd_whatif(catalog_path, plan_path);
    if (app.got_subcommand(prioritize)) {
      Rational wd;
      Rational wc;
      try {
        wd = Rational::parse(w_difficulty);
        wc = Rational::parse(w_cost);
        if (wd < Rational(0) || wc < Rational(0)) {
          throw RangeError("prioritization weights must be >= 0");
        }
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      return cmd_prioritize(catalog_path, wd, wc);
    }
    if (app.got_subcommand(propagate)) {
      return cmd_propagate(catalog_path, failed_sources);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
