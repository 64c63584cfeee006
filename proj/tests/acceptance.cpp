// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include "lab_checks.hpp"
#include "oran_aml/advisor.hpp"
#include "oran_aml/app/cli.hpp"
#include "risk_checks.hpp"

using namespace oran_aml;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

Verdict from_failures(const std::vector<std::string>& fails, const std::string& ok_detail) {
  if (fails.empty()) return {true, ok_detail};
  std::string d = std::to_string(fails.size()) + " failure(s); first: " + fails.front();
  return {false, d};
}

int failures = 0;

void criterion(const std::string& name, double budget_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_seconds) {
    v.pass = false;
    v.detail += "; took " + format_number(secs) + " s, budget " + format_number(budget_seconds) + " s";
  }
  if (!v.pass) ++failures;
  std::printf("%s  %-28s %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string run_cli(std::vector<std::string> args, int& status) {
  args.insert(args.begin(), "oran-aml");
  std::ostringstream out, err;
  status = app::run_command(args, out, err).exit_status;
  return out.str();
}

}  // namespace

int main() {
  criterion("grade-anchor", 1.0, [] {
    const Question* q1 = find_question(testsupport::bundled_questions(), "Q1");
    if (!q1) return Verdict{false, "Q1 missing"};
    const double s = grade_to_score(*q1, "Easy");
    return Verdict{s == 0.8, "Q1 Easy -> " + format_number(s)};
  });

  criterion("risk-oracle-suite", 1.0, [] {
    const auto n = testsupport::risk_cases().size();
    auto fails = testsupport::check_risk_oracles(1e-12);
    if (n < 10) fails.push_back("only " + std::to_string(n) + " cases");
    return from_failures(fails, std::to_string(n) + " cases within 1e-12");
  });

  criterion("property-suite", 30.0, [] {
    return from_failures(testsupport::check_risk_properties(1000, 20240601), "1000 randomized profiles");
  });

  criterion("catalog-fidelity", 1.0, [] {
    const Catalog& c = testsupport::bundled_catalog();
    std::vector<std::string> fails;
    auto count = [&](const char* what, std::size_t got, std::size_t want) {
      if (got != want) fails.push_back(std::string(what) + " " + std::to_string(got) + " != " + std::to_string(want));
    };
    count("families", c.families.size(), 13);
    count("capabilities", c.capabilities.size(), 16);
    count("impact kinds", enum_count<ImpactKind>, 3);
    count("countermeasures", c.countermeasures.size(), 14);
    count("threats", c.threats.size(), 7);
    count("actors", c.actors.size(), 6);
    const std::vector<std::pair<std::string, std::string>> rows{
#include "table_rows.inc"
    };
    for (const auto& [id, glyphs] : rows) {
      const AttackTechnique* t = c.find_technique(id);
      if (!t) {
        fails.push_back(id + " missing");
      } else if (testsupport::glyph_row(*t) != glyphs) {
        fails.push_back(id + " glyphs " + testsupport::glyph_row(*t));
      }
    }
    std::vector<std::string> extraction;
    for (const auto* cm : candidates_for_threat(c, Threat::T6)) extraction.push_back(cm->name);
    std::sort(extraction.begin(), extraction.end());
    if (extraction != std::vector<std::string>{"Homomorphic Encryption", "Watermarking"})
      fails.push_back("model extraction candidates differ");
    DefenderContext ctx;
    for (MlHost h : enum_values<MlHost>()) ctx.hosts_available.insert(h);
    ctx.ric_target = RicLocation::NonRtRic;
    for (const auto& cm : c.countermeasures)
      if (!applicable(cm, ctx).ok) fails.push_back(cm.name + " not applicable at Non-RT");
    return from_failures(fails, "counts, 5 glyph rows, extraction pair, Non-RT row");
  });

  criterion("hsja-linear-geometry", 60.0, [] {
    const auto rep = testsupport::check_hsja_linear(50);
    std::vector<std::string> fails;
    if (!rep.all_found) fails.push_back("a run found no adversarial point");
    if (rep.median > 1.1 * 2.0) fails.push_back("median " + format_number(rep.median));
    if (rep.max_queries > 25000) fails.push_back("max queries " + std::to_string(rep.max_queries));
    if (!rep.monotone) fails.push_back("best distance increased");
    if (!rep.accounted) fails.push_back("query accounting mismatch");
    if (!rep.replay_valid) fails.push_back("recorded point not adversarial on replay");
    return from_failures(fails, "median " + format_number(rep.median) + " vs optimum 2, max queries " +
                                    std::to_string(rep.max_queries));
  });

  criterion("traffic-steering-demo", 300.0, [] {
    const auto& r = testsupport::default_demo();
    std::vector<std::string> fails;
    if (r.holdout_accuracy < 0.90) fails.push_back("accuracy " + format_number(r.holdout_accuracy));
    if (r.estimate.trials != 25) fails.push_back("trials " + std::to_string(r.estimate.trials));
    if (r.estimate.success_rate < 0.8) fails.push_back("success rate " + format_number(r.estimate.success_rate));
    for (const auto& o : r.estimate.outcomes)
      if (o.queries > 25000) fails.push_back("query budget exceeded");
    return from_failures(fails, "seed 7, n 5000: accuracy " + format_number(r.holdout_accuracy) + ", success " +
                                    std::to_string(r.estimate.successes) + "/25");
  });

  criterion("determinism", 120.0, [] {
    std::vector<std::string> fails;
    const std::string fixture = (testsupport::data_dir() / "fixtures" / "traffic_steering.json").string();
    int s1 = 0, s2 = 0;
    const std::string a1 = run_cli({"assess", "--project", fixture, "--format", "json"}, s1);
    const std::string a2 = run_cli({"assess", "--project", fixture, "--format", "json"}, s2);
    if (s1 || s2 || a1.empty() || a1 != a2) fails.push_back("assess output differs");
    const std::string e1 = run_cli({"attack", "estimate", "--seed", "7"}, s1);
    const std::string e2 = run_cli({"attack", "estimate", "--seed", "7"}, s2);
    if (s1 || s2 || e1.empty() || e1 != e2) fails.push_back("attack estimate output differs");
    const std::string e3 = run_cli({"attack", "estimate", "--seed", "7", "--threads", "4"}, s1);
    if (s1 || e3 != e1) fails.push_back("sequential and concurrent estimates differ");
    return from_failures(fails, "assess x2, estimate x2, threads 1 vs 4 byte-identical");
  });

  criterion("fixture-prioritization", 1.0, [] {
    auto fails = testsupport::check_fixture_prioritization();
    if (format_risk(7.9) != "7.90") fails.push_back("format_risk(7.9) = " + format_risk(7.9));
    return from_failures(fails, std::to_string(testsupport::fixture_expected().size()) +
                                    " rows match the independent recomputation; 7.9 renders 7.90");
  });

  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
