#pragma once

// Use-case risk assessment: questionnaire grades -> capability scores ->
// per-technique likelihood -> risk = effectiveness x impact x likelihood.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oran_aml/catalog.hpp"

namespace oran_aml {

using ScoreVector = CapabilityMap<double>;

struct ScaleGrade {
  std::string label;
  double score = 0.0;

  friend bool operator==(const ScaleGrade&, const ScaleGrade&) = default;
};

/// Impossible 0.0 / Hard 0.2 / Moderate 0.5 / Easy 0.8 / Trivial 1.0
inline std::vector<ScaleGrade> default_scale() {
  return {{"Impossible", 0.0}, {"Hard", 0.2}, {"Moderate", 0.5}, {"Easy", 0.8}, {"Trivial", 1.0}};
}

struct Question {
  std::string id;
  std::string text;
  Capability capability{};
  std::vector<ScaleGrade> scale = default_scale();

  friend bool operator==(const Question&, const Question&) = default;
};

inline double grade_to_score(const Question& q, std::string_view grade) {
  for (const auto& g : q.scale)
    if (g.label == grade) return g.score;
  throw Error("grade '" + std::string(grade) + "' is not on the scale of question " + q.id);
}

inline std::vector<Violation> validate_questions(const std::vector<Question>& questions) {
  std::vector<Violation> out;
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const auto& q = questions[i];
    const std::string path = "questions[" + std::to_string(i) + "]";
    if (q.id.empty() || seen[q.id]++ > 0) out.push_back({path + ".id", "missing or duplicate question id"});
    if (q.scale.size() < 2) {
      out.push_back({path + ".scale", "scale needs at least two grades"});
      continue;
    }
    if (q.scale.front().score != 0.0 || q.scale.back().score != 1.0) {
      out.push_back({path + ".scale", "scale endpoints must be 0.0 and 1.0"});
    }
    for (std::size_t k = 1; k < q.scale.size(); ++k) {
      if (!(q.scale[k].score > q.scale[k - 1].score)) {
        out.push_back({path + ".scale", "scores must be strictly increasing"});
        break;
      }
    }
  }
  return out;
}

struct UseCaseProfile {
  std::string title;
  std::string description;
  Scenario scenario = Scenario::DS1;
  Actor actor = Actor::A1;
  EnumMap<Threat, std::optional<ImpactGrade>> impact_grades{};
  /// Question id -> grade label.
  std::map<std::string, std::string> answers;
  bool apply_dominance_closure = true;

  double impact(Threat t) const { return impact_grades[t] ? impact_value(*impact_grades[t]) : 0.0; }

  friend bool operator==(const UseCaseProfile&, const UseCaseProfile&) = default;
};

inline const Question* find_question(const std::vector<Question>& questions, std::string_view id) {
  auto it = std::find_if(questions.begin(), questions.end(), [&](const Question& q) { return q.id == id; });
  return it == questions.end() ? nullptr : &*it;
}

inline std::vector<Violation> validate_profile(const UseCaseProfile& p, const std::vector<Question>& questions) {
  std::vector<Violation> out;
  for (Threat t : enum_values<Threat>()) {
    if (!p.impact_grades[t]) out.push_back({"impact_grades." + std::string(to_string(t)), "missing impact grade"});
  }
  for (const auto& [qid, grade] : p.answers) {
    const Question* q = find_question(questions, qid);
    if (!q) {
      out.push_back({"answers." + qid, "unknown question"});
      continue;
    }
    const bool on_scale =
        std::any_of(q->scale.begin(), q->scale.end(), [&](const ScaleGrade& g) { return g.label == grade; });
    if (!on_scale) out.push_back({"answers." + qid, "grade '" + grade + "' is not on the question's scale"});
  }
  return out;
}

/// Per capability, the best (max) score among answered questions; optionally
/// closed under the capability order.
inline ScoreVector capability_scores(const UseCaseProfile& profile, const std::vector<Question>& questions,
                                     const Catalog& catalog) {
  if (auto v = validate_profile(profile, questions); !v.empty()) throw ValidationError(std::move(v));
  ScoreVector scores{0.0};
  for (const auto& [qid, grade] : profile.answers) {
    const Question& q = *find_question(questions, qid);
    scores[q.capability] = std::max(scores[q.capability], grade_to_score(q, grade));
  }
  return profile.apply_dominance_closure ? close_scores_under_dominance(catalog, scores) : scores;
}

/// Average of req[k] * score[k] over the capabilities the technique requires
/// (req > 0). Zero when nothing is required.
inline double likelihood(const Requirements& req, const ScoreVector& scores) {
  double sum = 0.0;
  std::size_t n = 0;
  for (Capability c : enum_values<Capability>()) {
    if (req[c] > 0.0) {
      sum += req[c] * scores[c];
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

inline double likelihood(const AttackTechnique& t, const ScoreVector& scores) { return likelihood(t.req, scores); }

struct RiskEntry {
  Actor actor{};
  std::string technique;
  Threat threat{};
  double likelihood = 0.0;
  double effectiveness = 0.0;
  double impact_value = 0.0;
  int indicator = 0;
  double risk = 0.0;
  bool feasible = false;

  friend bool operator==(const RiskEntry&, const RiskEntry&) = default;
};

inline double risk_value(double effectiveness, double impact, int indicator, double lh) {
  return effectiveness * (impact * indicator) * lh;
}

inline RiskEntry risk(const Catalog& catalog, const AttackTechnique& technique, Threat threat,
                      const UseCaseProfile& profile, const ScoreVector& scores) {
  RiskEntry e;
  e.actor = profile.actor;
  e.technique = technique.id;
  e.threat = threat;
  e.likelihood = likelihood(technique, scores);
  e.effectiveness = technique.effectiveness;
  e.impact_value = profile.impact(threat);
  e.indicator = reachable_threats(catalog, technique).contains(threat) ? 1 : 0;
  e.risk = risk_value(e.effectiveness, e.impact_value, e.indicator, e.likelihood);
  e.feasible = actor_feasible(technique, profile.actor, profile.scenario);
  return e;
}

/// Orders identifiers with embedded numbers numerically ("AT1.2" < "AT1.10").
inline bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ei = i, ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      auto na = a.substr(i, ei - i), nb = b.substr(j, ej - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ei;
      j = ej;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return (a.size() - i) < (b.size() - j);
}

/// Strict weak order used for prioritization: risk descending, then
/// (technique id, threat id) ascending.
inline bool priority_before(const RiskEntry& x, const RiskEntry& y) {
  if (x.risk != y.risk) return x.risk > y.risk;
  if (x.technique != y.technique) return natural_less(x.technique, y.technique);
  return x.threat < y.threat;
}

inline std::vector<std::size_t> prioritize(const std::vector<RiskEntry>& entries) {
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return priority_before(entries[a], entries[b]); });
  return order;
}

struct AssessmentResult {
  UseCaseProfile profile;
  ScoreVector scores{0.0};
  std::vector<RiskEntry> entries;
  /// Indices into `entries`, highest risk first.
  std::vector<std::size_t> prioritized;
  std::string catalog_version;

  const RiskEntry& ranked(std::size_t rank) const { return entries.at(prioritized.at(rank)); }

  friend bool operator==(const AssessmentResult&, const AssessmentResult&) = default;
};

/// One entry per (technique, reachable threat) for the profile's actor, in
/// catalog order, plus the prioritized ordering.
inline AssessmentResult assess(const UseCaseProfile& profile, const std::vector<Question>& questions,
                               const Catalog& catalog) {
  if (auto v = validate_profile(profile, questions); !v.empty()) throw ValidationError(std::move(v));
  AssessmentResult result;
  result.profile = profile;
  result.catalog_version = catalog.version;
  result.scores = capability_scores(profile, questions, catalog);
  for (const auto& t : catalog.techniques) {
    const auto threats = reachable_threats(catalog, t);
    for (Threat th : threats.values()) result.entries.push_back(risk(catalog, t, th, profile, result.scores));
  }
  result.prioritized = prioritize(result.entries);
  return result;
}

/// Partial profile update. Answers mapped to std::nullopt are removed.
struct ProfilePatch {
  std::optional<std::string> title;
  std::optional<std::string> description;
  std::optional<Scenario> scenario;
  std::optional<Actor> actor;
  std::map<Threat, ImpactGrade> impact_grades;
  std::map<std::string, std::optional<std::string>> answers;
  std::optional<bool> apply_dominance_closure;

  bool empty() const {
    return !title && !description && !scenario && !actor && impact_grades.empty() && answers.empty() &&
           !apply_dominance_closure;
  }
};

inline UseCaseProfile apply_patch(UseCaseProfile p, const ProfilePatch& patch) {
  if (patch.title) p.title = *patch.title;
  if (patch.description) p.description = *patch.description;
  if (patch.scenario) p.scenario = *patch.scenario;
  if (patch.actor) p.actor = *patch.actor;
  for (const auto& [t, g] : patch.impact_grades) p.impact_grades[t] = g;
  for (const auto& [qid, grade] : patch.answers) {
    if (grade) {
      p.answers[qid] = *grade;
    } else {
      p.answers.erase(qid);
    }
  }
  if (patch.apply_dominance_closure) p.apply_dominance_closure = *patch.apply_dominance_closure;
  return p;
}

struct RiskDelta {
  std::string technique;
  Threat threat{};
  double old_risk = 0.0;
  double new_risk = 0.0;
  std::size_t old_rank = 0;  // 1-based
  std::size_t new_rank = 0;
  /// Positive when the entry moved up the prioritized list.
  long rank_shift = 0;
  bool old_feasible = false;
  bool new_feasible = false;

  double delta() const { return new_risk - old_risk; }
};

struct DeltaReport {
  AssessmentResult before;
  AssessmentResult after;
  std::vector<RiskDelta> deltas;  // in entry (catalog) order
};

inline DeltaReport what_if(const UseCaseProfile& base, const ProfilePatch& patch,
                           const std::vector<Question>& questions, const Catalog& catalog) {
  DeltaReport report;
  report.before = assess(base, questions, catalog);
  report.after = assess(apply_patch(base, patch), questions, catalog);
  const auto& b = report.before;
  const auto& a = report.after;
  auto ranks = [](const AssessmentResult& r) {
    std::vector<std::size_t> rank(r.entries.size());
    for (std::size_t pos = 0; pos < r.prioritized.size(); ++pos) rank[r.prioritized[pos]] = pos + 1;
    return rank;
  };
  const auto rb = ranks(b), ra = ranks(a);
  // Both results enumerate the same (technique, threat) keys in catalog order.
  for (std::size_t i = 0; i < b.entries.size(); ++i) {
    RiskDelta d;
    d.technique = b.entries[i].technique;
    d.threat = b.entries[i].threat;
    d.old_risk = b.entries[i].risk;
    d.new_risk = a.entries[i].risk;
    d.old_rank = rb[i];
    d.new_rank = ra[i];
    d.rank_shift = static_cast<long>(rb[i]) - static_cast<long>(ra[i]);
    d.old_feasible = b.entries[i].feasible;
    d.new_feasible = a.entries[i].feasible;
    report.deltas.push_back(std::move(d));
  }
  return report;
}

}  // namespace oran_aml
