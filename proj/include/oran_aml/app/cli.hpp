#pragma once

// Command-line front end. Every subcommand goes through the same engine
// calls as the service.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oran_aml/advisor_io.hpp"
#include "oran_aml/app/attack_runs.hpp"
#include "oran_aml/app/service.hpp"
#include "oran_aml/app/workspace.hpp"

#ifndef ORAN_AML_DEFAULT_DATA_DIR
#define ORAN_AML_DEFAULT_DATA_DIR "data"
#endif

namespace oran_aml::app {

struct CommandOutcome {
  int exit_status = 0;
  std::string summary;
  /// Files written by the command.
  std::vector<std::string> payloads;
};

namespace detail {

struct Options {
  std::string project;
  std::string catalog = std::string(ORAN_AML_DEFAULT_DATA_DIR) + "/catalog.json";
  std::string questions = std::string(ORAN_AML_DEFAULT_DATA_DIR) + "/questions.json";
  std::string out;
  std::string format = "csv";
  std::string patch;
  std::string context;
  std::string estimates;
  std::string workspace;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::uint64_t> seed;
  std::size_t top = 0;
  std::size_t trials = 25;
  std::size_t n = 5000;
  std::size_t budget = 25000;
  unsigned threads = 1;
  std::string technique = "AT2.2";
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  CommandOutcome validate_catalog_cmd(const std::string& path) {
    const json doc = parse_json_text(read_text_file(path), "catalog");
    std::vector<Violation> v;
    Catalog c = decode_catalog(doc, v);
    if (v.empty()) v = validate_catalog(c);
    for (const auto& x : v) out_ << x.path << ": " << x.message << "\n";
    const std::string summary = std::to_string(v.size()) + " violations";
    out_ << summary << "\n";
    return {v.empty() ? 0 : 2, summary, {}};
  }

  CommandOutcome assess_cmd() {
    const auto [catalog, project] = inputs();
    const AssessmentResult r = assess(project.profile, project.questions, catalog);
    const std::string text = o_.format == "json" ? canonical(encode_result(r)) : result_csv(r, catalog);
    std::string summary = std::to_string(r.entries.size()) + " entries";
    if (!r.prioritized.empty()) {
      const RiskEntry& top = r.ranked(0);
      summary += "; top " + top.technique + "/" + std::string(to_string(top.threat)) + " risk " + format_risk(top.risk);
    }
    return emit(text, summary);
  }

  CommandOutcome prioritize_cmd() {
    const auto [catalog, project] = inputs();
    const AssessmentResult r = assess(project.profile, project.questions, catalog);
    const std::size_t k = o_.top ? std::min(o_.top, r.prioritized.size()) : r.prioritized.size();
    std::string text;
    if (o_.format == "json") {
      json arr = encode_prioritization(r);
      arr.erase(arr.begin() + static_cast<std::ptrdiff_t>(k), arr.end());
      text = canonical(arr);
    } else {
      const std::string csv = result_csv(r, catalog);
      std::size_t pos = 0;
      for (std::size_t line = 0; line <= k && pos != std::string::npos; ++line) {
        pos = csv.find('\n', pos);
        if (pos != std::string::npos) ++pos;
      }
      text = csv.substr(0, pos);
    }
    return emit(text, std::to_string(k) + " prioritized entries");
  }

  CommandOutcome what_if_cmd() {
    const auto [catalog, project] = inputs();
    const ProfilePatch patch = load_patch(parse_json_text(read_text_file(o_.patch), "patch"));
    const DeltaReport d = what_if(project.profile, patch, project.questions, catalog);
    std::size_t moved = 0;
    for (const auto& x : d.deltas) moved += x.rank_shift != 0 || x.old_risk != x.new_risk;
    const std::string text = o_.format == "json" ? canonical(encode_delta(d)) : delta_csv(d);
    return emit(text, std::to_string(moved) + " entries changed");
  }

  CommandOutcome recommend_cmd() {
    const auto [catalog, project] = inputs();
    const DefenderContext ctx =
        o_.context.empty() ? permissive_context() : load_context(parse_json_text(read_text_file(o_.context), "context"));
    const AssessmentResult r = assess(project.profile, project.questions, catalog);
    const auto recs = recommend(r, ctx, catalog, o_.top ? o_.top : 5);
    const std::string text = o_.format == "json" ? canonical(encode_recommendations(recs)) : recommendations_csv(recs);
    return emit(text, std::to_string(recs.size()) + " recommendations");
  }

  CommandOutcome export_cmd() {
    const auto [catalog, project] = inputs();
    Project p = project;
    p.catalog_version = catalog.version;
    p.result = assess(p.profile, p.questions, catalog);
    const std::string text = o_.format == "json" ? canonical(encode_project(p)) : result_csv(*p.result, catalog);
    return emit(text, "exported " + o_.format);
  }

  CommandOutcome attack_cmd(const std::string& kind) {
    if (kind == "estimate" && !o_.seed) throw ValidationError("--seed", "required for attack estimate");
    AttackRequest req;
    req.kind = kind;
    if (o_.seed) req.seed = *o_.seed;
    req.n = o_.n;
    req.trials = o_.trials;
    req.technique = o_.technique;
    req.query_budget = o_.budget;
    req.threads = o_.threads;
    const json record = run_attack(req);
    const auto& e = record["estimate"];
    const std::string summary = "holdout accuracy " + format_number(record["holdout_accuracy"].get<double>()) +
                                "; success rate " + format_number(e["success_rate"].get<double>()) + " (" +
                                e["successes"].dump() + "/" + e["trials"].dump() + ")";
    if (kind == "demo") return emit(canonical(record), summary);
    json doc = json::object();
    if (!o_.out.empty() && std::filesystem::exists(o_.out))
      doc = parse_json_text(read_text_file(o_.out), "estimates file");
    return emit(canonical(lab::merge_estimate(doc, estimate_of(record))), summary);
  }

  CommandOutcome serve_cmd() {
    if (o_.workspace.empty()) throw ValidationError("--workspace", "required");
    const std::filesystem::path root = o_.workspace;
    std::unique_ptr<Workspace> ws;
    if (!std::filesystem::exists(root / "catalog.json")) {
      ws = Workspace::create(root, load_catalog_file(o_.catalog), load_questions_file(o_.questions));
    } else {
      ws = std::make_unique<Workspace>(root);
    }
    Service svc(*ws);
    err_ << "serving " << root.string() << " on http://" << o_.host << ":" << o_.port << "\n";
    if (!svc.listen(o_.host, o_.port)) throw Error("cannot listen on " + o_.host + ":" + std::to_string(o_.port));
    return {0, "stopped", {}};
  }

 private:
  std::pair<Catalog, Project> inputs() {
    if (o_.project.empty()) throw ValidationError("--project", "required");
    Catalog catalog = load_catalog_file(o_.catalog);
    if (!o_.estimates.empty())
      catalog = apply_effectiveness_overrides(std::move(catalog), parse_json_text(read_text_file(o_.estimates), "estimates"));
    Project project = load_project_file(o_.project);
    if (project.catalog_version != catalog.version)
      err_ << "note: project was written against catalog " << project.catalog_version << ", using "
           << catalog.version << "\n";
    return {std::move(catalog), std::move(project)};
  }

  CommandOutcome emit(const std::string& text, const std::string& summary) {
    CommandOutcome outcome{0, summary, {}};
    if (o_.out.empty()) {
      out_ << text;
    } else {
      write_text_file(o_.out, text);
      outcome.payloads.push_back(o_.out);
      out_ << summary << "\n";
    }
    return outcome;
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace detail

/// argv[0] is the program name. Exit status 0 on success, 1 on usage or I/O
/// errors, 2 on validation failures.
inline CommandOutcome run_command(const std::vector<std::string>& argv, std::ostream& out = std::cout,
                                  std::ostream& err = std::cerr) {
  detail::Options o;
  CLI::App app{"AML risk assessment for O-RAN ML pipelines"};
  app.require_subcommand(1);

  auto with_project = [&](CLI::App* sub) {
    sub->add_option("--project", o.project, "assessment project file");
    sub->add_option("--catalog", o.catalog, "catalog file");
    sub->add_option("--estimates", o.estimates, "measured effectiveness overrides");
    sub->add_option("--out", o.out, "output file (default: stdout)");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };

  std::string catalog_arg;
  auto* validate = app.add_subcommand("validate-catalog", "check a catalog file");
  validate->add_option("path", catalog_arg, "catalog file");
  validate->add_option("--catalog", o.catalog, "catalog file");

  auto* assess_sub = app.add_subcommand("assess", "risk for every technique and threat");
  with_project(assess_sub);
  auto* prioritize_sub = app.add_subcommand("prioritize", "entries ordered by risk");
  with_project(prioritize_sub);
  prioritize_sub->add_option("--top", o.top, "keep the first N entries");
  auto* what_if_sub = app.add_subcommand("what-if", "risk and rank changes under a profile patch");
  with_project(what_if_sub);
  what_if_sub->add_option("--patch", o.patch, "patch document")->required();
  auto* recommend_sub = app.add_subcommand("recommend", "countermeasures for the top threats");
  with_project(recommend_sub);
  recommend_sub->add_option("--top", o.top, "number of top entries to cover (default 5)");
  recommend_sub->add_option("--context", o.context, "defender context document");
  auto* export_sub = app.add_subcommand("export", "project with its result, or the CSV report");
  with_project(export_sub);

  auto* attack = app.add_subcommand("attack", "traffic-steering attack lab");
  attack->require_subcommand(1);
  auto lab_options = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--trials", o.trials, "attack trials")->check(CLI::PositiveNumber);
    sub->add_option("--n", o.n, "dataset size")->check(CLI::Range(std::size_t{100}, std::size_t{1000000}));
    sub->add_option("--technique", o.technique, "technique id the estimate is filed under");
    sub->add_option("--budget", o.budget, "query budget per attack");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "output file (default: stdout)");
  };
  auto* demo = attack->add_subcommand("demo", "train, attack, report one run record with traces");
  lab_options(demo);
  auto* estimate = attack->add_subcommand("estimate", "success rate merged into an estimates file");
  lab_options(estimate);

  auto* serve = app.add_subcommand("serve", "HTTP service over a workspace directory");
  serve->add_option("--workspace", o.workspace, "workspace directory")->required();
  serve->add_option("--host", o.host, "listen address");
  serve->add_option("--port", o.port, "listen port");
  serve->add_option("--catalog", o.catalog, "catalog used to seed a new workspace");
  serve->add_option("--questions", o.questions, "question set used to seed a new workspace");

  std::vector<const char*> raw;
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {code, e.what(), {}};
  }

  detail::Runner run(o, out, err);
  try {
    if (validate->parsed()) return run.validate_catalog_cmd(catalog_arg.empty() ? o.catalog : catalog_arg);
    if (assess_sub->parsed()) return run.assess_cmd();
    if (prioritize_sub->parsed()) return run.prioritize_cmd();
    if (what_if_sub->parsed()) return run.what_if_cmd();
    if (recommend_sub->parsed()) return run.recommend_cmd();
    if (export_sub->parsed()) return run.export_cmd();
    if (demo->parsed()) return run.attack_cmd("demo");
    if (estimate->parsed()) return run.attack_cmd("estimate");
    if (serve->parsed()) return run.serve_cmd();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return {2, e.what(), {}};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {1, e.what(), {}};
  }
  return {1, "no command", {}};
}

}  // namespace oran_aml::app
