#pragma once

// JSON and CSV forms of questions, profiles, patches and assessment results.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oran_aml/catalog_io.hpp"
#include "oran_aml/format.hpp"
#include "oran_aml/risk.hpp"

namespace oran_aml {

inline std::vector<Question> decode_questions(const json& doc, std::vector<Violation>& violations) {
  detail::Reader r(violations);
  std::vector<Question> out;
  const json* arr = doc.is_array() ? &doc : r.array(doc, "", "questions");
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const json& item = (*arr)[i];
    const std::string path = detail::indexed("questions", i);
    Question q;
    q.id = r.string(item, path, "id");
    q.text = r.string(item, path, "text", false);
    q.capability = r.enumeration<Capability>(item, path, "capability");
    if (const json* scale = r.field(item, path, "scale", false)) {
      q.scale.clear();
      if (!scale->is_array()) {
        r.fail(path + ".scale", "expected an array");
      } else {
        for (std::size_t k = 0; k < scale->size(); ++k) {
          const std::string gp = detail::indexed(path + ".scale", k);
          q.scale.push_back({r.string((*scale)[k], gp, "label"), r.number((*scale)[k], gp, "score")});
        }
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

/// Decodes and validates; throws ParseError or ValidationError.
inline std::vector<Question> load_questions(const json& doc) {
  std::vector<Violation> v;
  auto qs = decode_questions(doc, v);
  if (v.empty()) v = validate_questions(qs);
  if (!v.empty()) throw ValidationError(std::move(v));
  return qs;
}

inline std::vector<Question> load_questions_file(const std::filesystem::path& path) {
  return load_questions(parse_json_text(read_text_file(path), "questions"));
}

inline json encode_questions(const std::vector<Question>& questions) {
  json arr = json::array();
  for (const auto& q : questions) {
    json scale = json::array();
    for (const auto& g : q.scale) scale.push_back({{"label", g.label}, {"score", g.score}});
    arr.push_back({{"id", q.id}, {"text", q.text}, {"capability", std::string(to_string(q.capability))},
                   {"scale", scale}});
  }
  return {{"questions", arr}};
}

namespace detail {

inline std::map<std::string, std::string> decode_answers(Reader& r, const json& obj, const std::string& path) {
  std::map<std::string, std::string> out;
  if (!obj.is_object()) {
    r.fail(path, "expected an object");
    return out;
  }
  for (const auto& [qid, grade] : obj.items()) {
    if (grade.is_string()) {
      out[qid] = grade.get<std::string>();
    } else {
      r.fail(path + "." + qid, "expected a grade label");
    }
  }
  return out;
}

}  // namespace detail

/// Missing impact grades are left empty here and reported by validate_profile.
inline UseCaseProfile decode_profile(const json& doc, std::vector<Violation>& violations) {
  detail::Reader r(violations);
  UseCaseProfile p;
  p.title = r.string(doc, "", "title", false);
  p.description = r.string(doc, "", "description", false);
  p.scenario = r.enumeration<Scenario>(doc, "", "scenario");
  p.actor = r.enumeration<Actor>(doc, "", "actor");
  if (const json* grades = r.field(doc, "", "impact_grades")) {
    if (!grades->is_object()) {
      r.fail("impact_grades", "expected an object");
    } else {
      for (const auto& [key, value] : grades->items()) {
        auto t = enum_from_string<Threat>(key);
        if (!t) {
          r.fail("impact_grades." + key, "unknown threat");
          continue;
        }
        p.impact_grades[*t] = r.enumeration<ImpactGrade>(value, "impact_grades." + key);
      }
    }
  }
  if (const json* answers = r.field(doc, "", "answers", false)) p.answers = detail::decode_answers(r, *answers, "answers");
  if (const json* closure = r.field(doc, "", "apply_dominance_closure", false)) {
    if (closure->is_boolean()) {
      p.apply_dominance_closure = closure->get<bool>();
    } else {
      r.fail("apply_dominance_closure", "expected a boolean");
    }
  }
  return p;
}

inline json encode_profile(const UseCaseProfile& p) {
  json grades = json::object();
  for (Threat t : enum_values<Threat>())
    if (p.impact_grades[t]) grades[std::string(to_string(t))] = std::string(to_string(*p.impact_grades[t]));
  json answers = json::object();
  for (const auto& [q, g] : p.answers) answers[q] = g;
  return {{"title", p.title},
          {"description", p.description},
          {"scenario", std::string(to_string(p.scenario))},
          {"actor", std::string(to_string(p.actor))},
          {"impact_grades", grades},
          {"answers", answers},
          {"apply_dominance_closure", p.apply_dominance_closure}};
}

/// Patch document: any subset of the profile fields. An answer set to null
/// clears that answer.
inline ProfilePatch decode_patch(const json& doc, std::vector<Violation>& violations) {
  detail::Reader r(violations);
  ProfilePatch patch;
  if (!doc.is_object()) {
    r.fail("", "expected an object");
    return patch;
  }
  if (doc.contains("title")) patch.title = r.string(doc, "", "title");
  if (doc.contains("description")) patch.description = r.string(doc, "", "description");
  if (doc.contains("scenario")) patch.scenario = r.enumeration<Scenario>(doc, "", "scenario");
  if (doc.contains("actor")) patch.actor = r.enumeration<Actor>(doc, "", "actor");
  if (doc.contains("impact_grades")) {
    const json& grades = doc["impact_grades"];
    if (!grades.is_object()) {
      r.fail("impact_grades", "expected an object");
    } else {
      for (const auto& [key, value] : grades.items()) {
        auto t = enum_from_string<Threat>(key);
        if (!t) {
          r.fail("impact_grades." + key, "unknown threat");
          continue;
        }
        patch.impact_grades[*t] = r.enumeration<ImpactGrade>(value, "impact_grades." + key);
      }
    }
  }
  if (doc.contains("answers")) {
    const json& answers = doc["answers"];
    if (!answers.is_object()) {
      r.fail("answers", "expected an object");
    } else {
      for (const auto& [qid, grade] : answers.items()) {
        if (grade.is_null()) {
          patch.answers[qid] = std::nullopt;
        } else if (grade.is_string()) {
          patch.answers[qid] = grade.get<std::string>();
        } else {
          r.fail("answers." + qid, "expected a grade label or null");
        }
      }
    }
  }
  if (doc.contains("apply_dominance_closure")) {
    if (doc["apply_dominance_closure"].is_boolean()) {
      patch.apply_dominance_closure = doc["apply_dominance_closure"].get<bool>();
    } else {
      r.fail("apply_dominance_closure", "expected a boolean");
    }
  }
  return patch;
}

inline ProfilePatch load_patch(const json& doc) {
  std::vector<Violation> v;
  auto patch = decode_patch(doc, v);
  if (!v.empty()) throw ValidationError(std::move(v));
  return patch;
}

inline json encode_scores(const ScoreVector& s) {
  json out = json::object();
  for (Capability c : enum_values<Capability>()) out[std::string(to_string(c))] = s[c];
  return out;
}

inline json encode_entry(const RiskEntry& e) {
  return {{"actor", std::string(to_string(e.actor))},
          {"technique", e.technique},
          {"threat", std::string(to_string(e.threat))},
          {"likelihood", e.likelihood},
          {"effectiveness", e.effectiveness},
          {"impact_value", e.impact_value},
          {"indicator", e.indicator},
          {"risk", e.risk},
          {"feasible", e.feasible}};
}

/// Prioritized entries, highest risk first, each carrying its 1-based rank.
inline json encode_prioritization(const AssessmentResult& r) {
  json arr = json::array();
  for (std::size_t pos = 0; pos < r.prioritized.size(); ++pos) {
    json e = encode_entry(r.entries[r.prioritized[pos]]);
    e["rank"] = pos + 1;
    arr.push_back(std::move(e));
  }
  return arr;
}

inline json encode_result(const AssessmentResult& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back(encode_entry(e));
  return {{"profile", encode_profile(r.profile)},
          {"catalog_version", r.catalog_version},
          {"scores", encode_scores(r.scores)},
          {"entries", entries},
          {"prioritized", r.prioritized}};
}

inline json encode_delta(const DeltaReport& d) {
  json arr = json::array();
  for (const auto& x : d.deltas) {
    arr.push_back({{"technique", x.technique},
                   {"threat", std::string(to_string(x.threat))},
                   {"old_risk", x.old_risk},
                   {"new_risk", x.new_risk},
                   {"delta", x.delta()},
                   {"old_rank", x.old_rank},
                   {"new_rank", x.new_rank},
                   {"rank_shift", x.rank_shift},
                   {"old_feasible", x.old_feasible},
                   {"new_feasible", x.new_feasible}});
  }
  return {{"deltas", arr}, {"after", encode_prioritization(d.after)}};
}

/// rank, technique_id, variant, threat, actor, feasible, Ef, Imp, LH, risk
inline std::string result_csv(const AssessmentResult& r, const Catalog& catalog) {
  std::string out = csv_row({"rank", "technique_id", "variant", "threat", "actor", "feasible", "Ef", "Imp", "LH", "risk"});
  for (std::size_t pos = 0; pos < r.prioritized.size(); ++pos) {
    const RiskEntry& e = r.entries[r.prioritized[pos]];
    const AttackTechnique* t = catalog.find_technique(e.technique);
    out += csv_row({std::to_string(pos + 1), e.technique, t ? t->variant : std::string(),
                    std::string(to_string(e.threat)), std::string(to_string(e.actor)), e.feasible ? "true" : "false",
                    format_number(e.effectiveness), format_number(e.impact_value), format_number(e.likelihood),
                    format_risk(e.risk)});
  }
  return out;
}

inline std::string delta_csv(const DeltaReport& d) {
  std::string out = csv_row({"technique_id", "threat", "old_risk", "new_risk", "old_rank", "new_rank", "rank_shift",
                             "old_feasible", "new_feasible"});
  for (const auto& x : d.deltas) {
    out += csv_row({x.technique, std::string(to_string(x.threat)), format_risk(x.old_risk), format_risk(x.new_risk),
                    std::to_string(x.old_rank), std::to_string(x.new_rank), std::to_string(x.rank_shift),
                    x.old_feasible ? "true" : "false", x.new_feasible ? "true" : "false"});
  }
  return out;
}

/// Assessment project file: profile, question set, catalog version and an
/// optional cached result.
struct Project {
  UseCaseProfile profile;
  std::vector<Question> questions;
  std::string catalog_version;
  std::optional<AssessmentResult> result;
};

inline Project decode_project(const json& doc) {
  std::vector<Violation> v;
  detail::Reader r(v);
  Project p;
  if (const json* prof = r.field(doc, "", "profile")) {
    std::vector<Violation> pv;
    p.profile = decode_profile(*prof, pv);
    for (auto& x : pv) v.push_back({"profile." + x.path, x.message});
  }
  if (const json* qs = r.field(doc, "", "questions")) p.questions = decode_questions(*qs, v);
  p.catalog_version = r.string(doc, "", "catalog_version");
  if (!v.empty()) throw ValidationError(std::move(v));
  if (auto qv = validate_questions(p.questions); !qv.empty()) throw ValidationError(std::move(qv));
  if (auto pv = validate_profile(p.profile, p.questions); !pv.empty()) throw ValidationError(std::move(pv));
  return p;
}

inline Project load_project_file(const std::filesystem::path& path) {
  return decode_project(parse_json_text(read_text_file(path), "project"));
}

inline json encode_project(const Project& p) {
  json doc = {{"profile", encode_profile(p.profile)},
              {"questions", encode_questions(p.questions)["questions"]},
              {"catalog_version", p.catalog_version}};
  if (p.result) doc["result"] = encode_result(*p.result);
  return doc;
}

}  // namespace oran_aml
