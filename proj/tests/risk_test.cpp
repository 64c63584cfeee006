#include <gtest/gtest.h>
#include <gmock/gmock.h>

#include "oran_aml/assessment_io.hpp"
#include "risk_checks.hpp"

using namespace oran_aml;
using testsupport::bundled_catalog;
using testsupport::bundled_questions;

namespace {

UseCaseProfile blank_profile() {
  UseCaseProfile p;
  p.title = "blank";
  p.scenario = Scenario::DS2;
  p.actor = Actor::A5;
  for (Threat t : enum_values<Threat>()) p.impact_grades[t] = ImpactGrade::Medium;
  return p;
}

std::string joined(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + "\n";
  return out;
}

}  // namespace

TEST(Grades, AnchorAndEndpoints) {
  const auto& qs = bundled_questions();
  const Question* q1 = find_question(qs, "Q1");
  ASSERT_NE(q1, nullptr);
  EXPECT_EQ(q1->capability, Capability::ACD4);
  EXPECT_EQ(grade_to_score(*q1, "Easy"), 0.8);
  for (const auto& q : qs) {
    EXPECT_EQ(grade_to_score(q, "Impossible"), 0.0);
    EXPECT_EQ(grade_to_score(q, "Trivial"), 1.0);
  }
  EXPECT_THROW(grade_to_score(*q1, "Effortless"), Error);
}

TEST(Grades, QuestionSetCoversEveryCapabilityOnce) {
  EnumMap<Capability, int> seen{0};
  for (const auto& q : bundled_questions()) ++seen[q.capability];
  for (int n : seen) EXPECT_EQ(n, 1);
}

TEST(Grades, ScaleValidation) {
  Question q{"Qx", "", Capability::AKD1, {{"low", 0.0}, {"mid", 0.5}, {"mid2", 0.5}, {"high", 1.0}}};
  EXPECT_EQ(validate_questions({q}).size(), 1u);
  q.scale = {{"low", 0.1}, {"high", 1.0}};
  EXPECT_EQ(validate_questions({q}).size(), 1u);
  EXPECT_EQ(validate_questions({q, q}).size(), 3u);
}

TEST(ImpactScale, Values) {
  EXPECT_EQ(impact_value(ImpactGrade::None), 0.0);
  EXPECT_EQ(impact_value(ImpactGrade::Low), 2.5);
  EXPECT_EQ(impact_value(ImpactGrade::Medium), 5.0);
  EXPECT_EQ(impact_value(ImpactGrade::High), 7.5);
  EXPECT_EQ(impact_value(ImpactGrade::Critical), 10.0);
}

TEST(CapabilityScores, SingleAnswer) {
  UseCaseProfile p = blank_profile();
  p.answers["Q1"] = "Easy";
  const auto s = capability_scores(p, bundled_questions(), bundled_catalog());
  EXPECT_EQ(s[Capability::ACD4], 0.8);
  EXPECT_EQ(s[Capability::ACD5], 0.0);
}

TEST(CapabilityScores, NoAnswersIsZero) {
  const auto s = capability_scores(blank_profile(), bundled_questions(), bundled_catalog());
  EXPECT_EQ(s, ScoreVector{0.0});
}

TEST(CapabilityScores, MaxAggregation) {
  std::vector<Question> qs = bundled_questions();
  qs.push_back({"Q17", "second decision-access question", Capability::ACM2});
  UseCaseProfile p = blank_profile();
  p.answers["Q8"] = "Moderate";
  p.answers["Q17"] = "Easy";
  EXPECT_EQ(capability_scores(p, qs, bundled_catalog())[Capability::ACM2], 0.8);
}

TEST(CapabilityScores, ClosureIsOptional) {
  UseCaseProfile p = blank_profile();
  p.answers["Q9"] = "Trivial";
  p.apply_dominance_closure = false;
  EXPECT_EQ(capability_scores(p, bundled_questions(), bundled_catalog())[Capability::AKM3], 0.0);
  p.apply_dominance_closure = true;
  EXPECT_EQ(capability_scores(p, bundled_questions(), bundled_catalog())[Capability::AKM3], 1.0);
}

TEST(Likelihood, Examples) {
  Requirements req{0.0};
  req[Capability::AKD1] = 1;
  req[Capability::AKM1] = 1;
  req[Capability::ACD4] = 0.5;
  req[Capability::ACM2] = 0.5;
  ScoreVector s{0.0};
  s[Capability::AKD1] = 0.2;
  s[Capability::AKM1] = 0.2;
  s[Capability::ACD4] = 0.8;
  s[Capability::ACM2] = 0.8;
  EXPECT_NEAR(likelihood(req, s), 0.30, 1e-15);
  EXPECT_EQ(likelihood(req, ScoreVector{1.0}), 0.75);
  Requirements ones{0.0};
  ones[Capability::ACD1] = ones[Capability::ACM1] = 1.0;
  EXPECT_EQ(likelihood(ones, ScoreVector{1.0}), 1.0);
  Requirements single{0.0};
  single[Capability::AKD3] = 1.0;
  EXPECT_EQ(likelihood(single, ScoreVector{0.0}), 0.0);
  EXPECT_EQ(likelihood(Requirements{0.0}, ScoreVector{1.0}), 0.0);
}

TEST(Risk, HandOracleSuite) {
  ASSERT_GE(testsupport::risk_cases().size(), 10u);
  const auto fails = testsupport::check_risk_oracles();
  EXPECT_TRUE(fails.empty()) << joined(fails);
}

TEST(Risk, IndicatorZeroForUnreachableThreat) {
  const Catalog& c = bundled_catalog();
  UseCaseProfile p = blank_profile();
  const RiskEntry e = risk(c, c.technique("AT1.1"), Threat::T6, p, ScoreVector{1.0});
  EXPECT_EQ(e.indicator, 0);
  EXPECT_EQ(e.risk, 0.0);
  EXPECT_GT(e.likelihood, 0.0);
}

TEST(Risk, DisplayRounding) {
  EXPECT_EQ(format_risk(7.9), "7.90");
  EXPECT_EQ(format_risk(1.0 * 10.0 * 0.79), "7.90");
  EXPECT_EQ(format_risk(0.0), "0.00");
  EXPECT_EQ(format_risk(5.25), "5.25");
}

TEST(Risk, RandomizedProperties) {
  const auto fails = testsupport::check_risk_properties(300, 99);
  EXPECT_TRUE(fails.empty()) << joined(fails);
}

TEST(Assess, AllZeroAnswersFollowTieBreak) {
  UseCaseProfile p = blank_profile();
  for (const auto& q : bundled_questions()) p.answers[q.id] = "Impossible";
  const AssessmentResult r = assess(p, bundled_questions(), bundled_catalog());
  ASSERT_FALSE(r.entries.empty());
  for (const auto& e : r.entries) EXPECT_EQ(e.risk, 0.0);
  EXPECT_EQ(r.ranked(0).technique, "AT1.1");
  EXPECT_EQ(r.ranked(1).technique, "AT1.2");
  EXPECT_EQ(r.ranked(r.entries.size() - 1).technique, "AT13.12");
}

TEST(Assess, OneEntryPerReachablePair) {
  const AssessmentResult r = assess(blank_profile(), bundled_questions(), bundled_catalog());
  EXPECT_EQ(r.entries.size(), bundled_catalog().techniques.size() + 1);  // one technique reaches two threats
  for (const auto& e : r.entries) {
    EXPECT_EQ(e.indicator, 1);
    EXPECT_EQ(e.actor, Actor::A5);
  }
  EXPECT_EQ(r.catalog_version, bundled_catalog().version);
}

TEST(Assess, GradeChangeIsLocal) {
  const auto& qs = bundled_questions();
  const Catalog& c = bundled_catalog();
  UseCaseProfile a = blank_profile();
  a.apply_dominance_closure = false;
  for (const auto& q : qs) a.answers[q.id] = "Moderate";
  UseCaseProfile b = a;
  b.answers["Q16"] = "Trivial";  // AKD4
  const auto ra = assess(a, qs, c), rb = assess(b, qs, c);
  for (std::size_t i = 0; i < ra.entries.size(); ++i) {
    const bool requires_it = c.technique(ra.entries[i].technique).req[Capability::AKD4] > 0.0;
    EXPECT_EQ(ra.entries[i].risk != rb.entries[i].risk, requires_it) << ra.entries[i].technique;
  }
}

TEST(Assess, InvalidProfileReportsPaths) {
  UseCaseProfile p = blank_profile();
  p.impact_grades[Threat::T4].reset();
  p.answers["Q1"] = "Effortless";
  p.answers["Q99"] = "Easy";
  try {
    assess(p, bundled_questions(), bundled_catalog());
    FAIL();
  } catch (const ValidationError& e) {
    std::vector<std::string> paths;
    for (const auto& v : e.violations()) paths.push_back(v.path);
    EXPECT_THAT(paths, ::testing::UnorderedElementsAre("impact_grades.T4", "answers.Q1", "answers.Q99"));
  }
}

TEST(Fixture, PrioritizationMatchesIndependentRecomputation) {
  const auto fails = testsupport::check_fixture_prioritization();
  EXPECT_TRUE(fails.empty()) << joined(fails);
}

TEST(Fixture, TopEntryIsWhiteBoxPoisoningMarkedInfeasibleForUe) {
  const auto project = testsupport::fixture_project();
  const auto r = assess(project.profile, project.questions, bundled_catalog());
  const RiskEntry& top = r.ranked(0);
  EXPECT_EQ(top.technique, "AT4.1");
  EXPECT_EQ(bundled_catalog().family_of(bundled_catalog().technique(top.technique)).label,
            "Gradient-based poisoning attacks");
  EXPECT_FALSE(top.feasible);
}

TEST(WhatIf, EmptyPatchHasZeroDeltas) {
  const auto project = testsupport::fixture_project();
  const auto d = what_if(project.profile, ProfilePatch{}, project.questions, bundled_catalog());
  for (const auto& x : d.deltas) {
    EXPECT_EQ(x.delta(), 0.0);
    EXPECT_EQ(x.rank_shift, 0);
  }
}

TEST(WhatIf, RaisingGradeNeverLowersRisk) {
  const auto project = testsupport::fixture_project();
  for (const auto& q : project.questions) {
    ProfilePatch patch;
    patch.answers[q.id] = "Trivial";
    const auto d = what_if(project.profile, patch, project.questions, bundled_catalog());
    for (const auto& x : d.deltas) EXPECT_GE(x.new_risk, x.old_risk) << q.id << " " << x.technique;
  }
}

TEST(WhatIf, ActorSwitchChangesFeasibility) {
  const auto project = testsupport::fixture_project();
  ProfilePatch patch;
  patch.actor = Actor::A4;
  const auto d = what_if(project.profile, patch, project.questions, bundled_catalog());
  const Catalog& c = bundled_catalog();
  bool any_changed = false;
  for (const auto& x : d.deltas) {
    const auto& t = c.technique(x.technique);
    EXPECT_EQ(x.old_feasible, t.feasibility.a5);
    EXPECT_EQ(x.new_feasible, t.feasibility.a4);
    any_changed = any_changed || x.old_feasible != x.new_feasible;
    EXPECT_EQ(x.delta(), 0.0);
  }
  EXPECT_TRUE(any_changed);
  EXPECT_EQ(project.profile.actor, Actor::A5);
}

TEST(WhatIf, InvalidPatchRejected) {
  const auto project = testsupport::fixture_project();
  ProfilePatch patch;
  patch.answers["Q1"] = std::string("Effortless");
  EXPECT_THROW(what_if(project.profile, patch, project.questions, bundled_catalog()), ValidationError);
}

TEST(Io, ProfileRoundTrip) {
  const auto project = testsupport::fixture_project();
  std::vector<Violation> v;
  const UseCaseProfile back = decode_profile(encode_profile(project.profile), v);
  EXPECT_TRUE(v.empty());
  EXPECT_EQ(back, project.profile);
}

TEST(Io, ProjectMissingImpactNamesPath) {
  json doc = encode_project(testsupport::fixture_project());
  doc["profile"]["impact_grades"].erase("T4");
  try {
    decode_project(doc);
    FAIL();
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].path, "impact_grades.T4");
  }
}

TEST(Io, PatchDecoding) {
  std::vector<Violation> v;
  const auto p = decode_patch(json::parse(R"({"answers":{"Q1":"Easy","Q2":null},"impact_grades":{"T2":"High"},"actor":"A4"})"), v);
  EXPECT_TRUE(v.empty());
  EXPECT_EQ(p.answers.at("Q1"), std::optional<std::string>("Easy"));
  EXPECT_EQ(p.answers.at("Q2"), std::nullopt);
  EXPECT_EQ(p.impact_grades.at(Threat::T2), ImpactGrade::High);
  EXPECT_EQ(p.actor, Actor::A4);
  decode_patch(json::parse(R"({"impact_grades":{"T9":"High"},"actor":"A9"})"), v);
  EXPECT_EQ(v.size(), 2u);
}

TEST(Io, CanonicalResultIsDeterministic) {
  const auto project = testsupport::fixture_project();
  const auto a = canonical(encode_result(assess(project.profile, project.questions, bundled_catalog())));
  const auto b = canonical(encode_result(assess(project.profile, project.questions, bundled_catalog())));
  EXPECT_EQ(a, b);
}

TEST(Io, CsvExport) {
  const auto project = testsupport::fixture_project();
  const auto r = assess(project.profile, project.questions, bundled_catalog());
  const std::string csv = result_csv(r, bundled_catalog());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rank,technique_id,variant,threat,actor,feasible,Ef,Imp,LH,risk");
  const std::string row1 = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1) - csv.find('\n') - 1);
  EXPECT_EQ(row1, "1,AT4.1,model knowledge,T2,A5,false,1,10,0.525,5.25");
  EXPECT_NE(csv.find("\"model's score (i.e., vector of probabilities)\""), std::string::npos);
}

TEST(NaturalOrder, NumericSegments) {
  EXPECT_TRUE(natural_less("AT1.2", "AT1.10"));
  EXPECT_TRUE(natural_less("AT2.1", "AT10.1"));
  EXPECT_FALSE(natural_less("AT10.1", "AT2.1"));
  EXPECT_FALSE(natural_less("AT1.1", "AT1.1"));
  EXPECT_TRUE(natural_less("AT1", "AT1.1"));
}
