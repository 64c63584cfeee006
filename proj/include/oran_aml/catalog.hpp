#pragma once

// Threat taxonomy data model and structural queries.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "oran_aml/enums.hpp"
#include "oran_aml/error.hpp"

namespace oran_aml {

template <class T>
using CapabilityMap = EnumMap<Capability, T>;

/// Capability requirement of a technique, each entry in [0,1].
using Requirements = CapabilityMap<double>;

struct CapabilityInfo {
  Capability code{};
  Axis axis{};
  std::string label;
};

struct OrderEdge {
  Capability stronger{};
  Capability weaker{};
};

struct ThreatActorInfo {
  Actor id{};
  std::string label;
  std::string description;
};

struct ThreatCategoryInfo {
  Threat id{};
  std::string label;
  SecurityProperty violated_property{};
};

struct AttackFamily {
  std::string id;
  std::string label;
  Threat threat{};
  ThreatModelClass threat_model_class{};
  Phase phase{};
};

/// Which actors can obtain the capabilities a technique needs. A2 is resolved
/// per (RIC location, deployment scenario); A1 per ML workflow host.
struct ActorFeasibility {
  EnumMap<MlHost, bool> a1{false};
  EnumMap<RicLocation, EnumMap<Scenario, bool>> a2{EnumMap<Scenario, bool>{false}};
  bool a3 = false;
  bool a4 = false;
  bool a5 = false;
  bool a6 = false;
};

struct AttackTechnique {
  std::string id;
  std::string family;
  std::string variant;
  Requirements req{0.0};
  EnumSet<ImpactKind> impacts;
  double effectiveness = 0.0;
  ActorFeasibility feasibility;
  /// Threats reachable in addition to the family's own category.
  std::vector<Threat> additional_threats;
};

struct DeploymentScenario {
  Scenario id{};
  LatencyClass latency_class{};
  LearningMode learning_mode{};
  EnumMap<MlHost, RicLocation> placements{};
};

struct OranConstraints {
  bool black_box_ok = false;
  bool white_box_only = false;
  bool needs_training_data = false;
  bool needs_feature_data = false;
  EnumSet<MlHost> hosts;
  bool near_rt_ok = false;
  bool non_rt_ok = false;
};

struct Countermeasure {
  std::string id;
  std::string name;
  CountermeasureCategory category{};
  EnumSet<Threat> threats_covered;
  EnumSet<FamilyClass> families_covered;
  EnumSet<SecurityType> security_type;
  EnumSet<DefenderNeed> defender_needs;
  EnumSet<Phase> phases;
  EnumSet<PerformanceFlag> performance_flags;
  OranConstraints oran_constraints;
  std::vector<std::string> unverified;
};

struct Catalog {
  std::string version;
  std::string provenance;
  std::vector<CapabilityInfo> capabilities;
  std::vector<OrderEdge> order;
  std::vector<ThreatActorInfo> actors;
  std::vector<ThreatCategoryInfo> threats;
  std::vector<AttackFamily> families;
  std::vector<AttackTechnique> techniques;
  std::vector<Countermeasure> countermeasures;
  std::vector<DeploymentScenario> scenarios;

  const AttackTechnique* find_technique(std::string_view id) const {
    auto it = std::find_if(techniques.begin(), techniques.end(),
                           [&](const AttackTechnique& t) { return t.id == id; });
    return it == techniques.end() ? nullptr : &*it;
  }

  const AttackFamily* find_family(std::string_view id) const {
    auto it = std::find_if(families.begin(), families.end(),
                           [&](const AttackFamily& f) { return f.id == id; });
    return it == families.end() ? nullptr : &*it;
  }

  const Countermeasure* find_countermeasure(std::string_view id) const {
    auto it = std::find_if(countermeasures.begin(), countermeasures.end(),
                           [&](const Countermeasure& c) { return c.id == id; });
    return it == countermeasures.end() ? nullptr : &*it;
  }

  const AttackTechnique& technique(std::string_view id) const {
    if (const auto* t = find_technique(id)) return *t;
    throw Error("unknown technique id '" + std::string(id) + "'");
  }

  const AttackFamily& family_of(const AttackTechnique& t) const {
    if (const auto* f = find_family(t.family)) return *f;
    throw Error("technique " + t.id + " references unknown family '" + t.family + "'");
  }
};

/// Reflexive-free transitive closure of the capability order:
/// `dominates[s][w]` holds when s is strictly stronger than w.
using CapabilityRelation = CapabilityMap<CapabilityMap<bool>>;

inline CapabilityRelation transitive_closure(const std::vector<OrderEdge>& edges) {
  CapabilityRelation rel{CapabilityMap<bool>{false}};
  for (const auto& e : edges) rel[e.stronger][e.weaker] = true;
  const auto caps = enum_values<Capability>();
  for (Capability k : caps)
    for (Capability i : caps)
      if (rel[i][k])
        for (Capability j : caps)
          if (rel[k][j]) rel[i][j] = true;
  return rel;
}

/// True when `stronger` equals or dominates `weaker` in the capability order.
inline bool capability_implies(const Catalog& catalog, Capability stronger, Capability weaker) {
  if (stronger == weaker) return true;
  return transitive_closure(catalog.order)[stronger][weaker];
}

inline bool capability_implies(const Catalog& catalog, std::string_view stronger,
                               std::string_view weaker) {
  auto s = enum_from_string<Capability>(stronger);
  auto w = enum_from_string<Capability>(weaker);
  if (!s) throw Error("unknown capability id '" + std::string(stronger) + "'");
  if (!w) throw Error("unknown capability id '" + std::string(weaker) + "'");
  return capability_implies(catalog, *s, *w);
}

/// Smallest score map that dominates `scores` and never gives a weaker
/// capability a lower score than a stronger one.
inline CapabilityMap<double> close_scores_under_dominance(const Catalog& catalog,
                                                          const CapabilityMap<double>& scores) {
  for (Capability c : enum_values<Capability>()) {
    const double v = scores[c];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error("score for " + std::string(to_string(c)) + " out of [0,1]");
    }
  }
  const auto rel = transitive_closure(catalog.order);
  CapabilityMap<double> out = scores;
  for (Capability s : enum_values<Capability>())
    for (Capability w : enum_values<Capability>())
      if (rel[s][w]) out[w] = std::max(out[w], scores[s]);
  return out;
}

/// Where a feasible actor sits: A1 on an ML host, A2 at a RIC location, the
/// rest everywhere.
struct FeasibleActor {
  Actor actor{};
  std::optional<MlHost> host;
  std::optional<RicLocation> location;

  std::string placement() const {
    if (host) return std::string(to_string(*host));
    if (location) return std::string(to_string(*location));
    return "All";
  }

  friend bool operator==(const FeasibleActor&, const FeasibleActor&) = default;
};

inline std::vector<FeasibleActor> feasible_actors(const AttackTechnique& technique,
                                                  Scenario scenario) {
  const auto& f = technique.feasibility;
  std::vector<FeasibleActor> out;
  for (MlHost h : enum_values<MlHost>())
    if (f.a1[h]) out.push_back({Actor::A1, h, std::nullopt});
  for (RicLocation loc : enum_values<RicLocation>())
    if (f.a2[loc][scenario]) out.push_back({Actor::A2, std::nullopt, loc});
  const std::array<std::pair<Actor, bool>, 4> rest{
      {{Actor::A3, f.a3}, {Actor::A4, f.a4}, {Actor::A5, f.a5}, {Actor::A6, f.a6}}};
  for (const auto& [actor, ok] : rest)
    if (ok) out.push_back({actor, std::nullopt, std::nullopt});
  return out;
}

inline std::vector<FeasibleActor> feasible_actors(const Catalog& catalog,
                                                  std::string_view technique_id,
                                                  Scenario scenario) {
  return feasible_actors(catalog.technique(technique_id), scenario);
}

inline bool actor_feasible(const AttackTechnique& technique, Actor actor, Scenario scenario) {
  const auto all = feasible_actors(technique, scenario);
  return std::any_of(all.begin(), all.end(),
                     [&](const FeasibleActor& fa) { return fa.actor == actor; });
}

/// Threat categories a technique can materialize.
inline EnumSet<Threat> reachable_threats(const Catalog& catalog, const AttackTechnique& t) {
  EnumSet<Threat> out;
  out.insert(catalog.family_of(t).threat);
  for (Threat extra : t.additional_threats) out.insert(extra);
  return out;
}

/// Checks every catalog invariant; returns one violation per broken rule.
inline std::vector<Violation> validate_catalog(const Catalog& c) {
  std::vector<Violation> out;
  auto add = [&](std::string path, std::string msg) {
    out.push_back({std::move(path), std::move(msg)});
  };

  // Capabilities: exactly the 16 known codes, each on its own axis.
  if (c.capabilities.size() != kCapabilityCount) {
    add("capabilities", "expected 16 capabilities, found " + std::to_string(c.capabilities.size()));
  }
  {
    std::set<Capability> seen;
    for (std::size_t i = 0; i < c.capabilities.size(); ++i) {
      const auto& cap = c.capabilities[i];
      const std::string path = "capabilities[" + std::to_string(i) + "]";
      if (!seen.insert(cap.code).second) add(path + ".code", "duplicate capability " + std::string(to_string(cap.code)));
      if (cap.axis != axis_of(cap.code)) add(path + ".axis", "axis does not match capability code");
    }
  }

  // Capability order: no cross-axis edges, strict partial order after closure.
  for (std::size_t i = 0; i < c.order.size(); ++i) {
    const auto& e = c.order[i];
    const std::string path = "order_edges[" + std::to_string(i) + "]";
    if (e.stronger == e.weaker) add(path, "order not irreflexive");
    if (is_knowledge(axis_of(e.stronger)) != is_knowledge(axis_of(e.weaker))) {
      add(path, "edge crosses knowledge and access axes");
    }
  }
  {
    const auto rel = transitive_closure(c.order);
    const auto caps = enum_values<Capability>();
    for (std::size_t i = 0; i < caps.size(); ++i)
      for (std::size_t j = i + 1; j < caps.size(); ++j)
        if (rel[caps[i]][caps[j]] && rel[caps[j]][caps[i]]) {
          add("order_edges", "order not antisymmetric (" + std::string(to_string(caps[i])) +
                                 ", " + std::string(to_string(caps[j])) + ")");
        }
  }

  if (c.actors.size() != enum_count<Actor>) add("actors", "expected 6 threat actors");
  {
    std::set<Actor> seen;
    for (std::size_t i = 0; i < c.actors.size(); ++i)
      if (!seen.insert(c.actors[i].id).second) add("actors[" + std::to_string(i) + "].id", "duplicate actor");
  }

  if (c.threats.size() != enum_count<Threat>) add("threats", "expected 7 threat categories");
  {
    std::set<Threat> seen;
    for (std::size_t i = 0; i < c.threats.size(); ++i) {
      const auto& t = c.threats[i];
      const std::string path = "threats[" + std::to_string(i) + "]";
      if (!seen.insert(t.id).second) add(path + ".id", "duplicate threat");
      if (t.id == Threat::T1 && t.violated_property != SecurityProperty::Integrity) {
        add(path + ".violated_property", "T1 must violate Integrity");
      }
    }
  }

  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < c.families.size(); ++i) {
      const auto& f = c.families[i];
      if (f.id.empty() || !seen.insert(f.id).second) {
        add("families[" + std::to_string(i) + "].id", "missing or duplicate family id");
      }
    }
  }

  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < c.techniques.size(); ++i) {
      const auto& t = c.techniques[i];
      const std::string path = "techniques[" + std::to_string(i) + "]";
      if (t.id.empty() || !seen.insert(t.id).second) add(path + ".id", "missing or duplicate technique id '" + t.id + "'");
      if (!c.find_family(t.family)) {
        add(path + ".family", "technique " + t.id + " references unknown family '" + t.family + "'");
      }
      for (Capability cap : enum_values<Capability>()) {
        const double r = t.req[cap];
        if (!(r >= 0.0 && r <= 1.0)) {
          add(path + ".req." + std::string(to_string(cap)), "requirement out of [0,1]");
        }
      }
      if (!(t.effectiveness >= 0.0 && t.effectiveness <= 1.0)) {
        add(path + ".effectiveness", "effectiveness out of [0,1]");
      }
      if (t.impacts.empty()) add(path + ".impacts", "technique " + t.id + " has no impact indicator");
    }
  }

  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < c.countermeasures.size(); ++i) {
      const auto& cm = c.countermeasures[i];
      const std::string path = "countermeasures[" + std::to_string(i) + "]";
      if (cm.id.empty() || !seen.insert(cm.id).second) add(path + ".id", "missing or duplicate countermeasure id");
      if (!cm.oran_constraints.non_rt_ok) add(path + ".oran_constraints.non_rt_ok", "every countermeasure must apply at the Non-RT RIC");
      if (cm.oran_constraints.black_box_ok == cm.oran_constraints.white_box_only) {
        add(path + ".oran_constraints", "white_box_only must be the negation of black_box_ok");
      }
      if (cm.oran_constraints.hosts.empty()) add(path + ".oran_constraints.hosts", "no implementation host");
    }
  }

  if (c.scenarios.size() != enum_count<Scenario>) add("scenarios", "expected 5 deployment scenarios");
  {
    std::set<Scenario> seen;
    for (std::size_t i = 0; i < c.scenarios.size(); ++i)
      if (!seen.insert(c.scenarios[i].id).second) add("scenarios[" + std::to_string(i) + "].id", "duplicate scenario");
  }
  return out;
}

}  // namespace oran_aml
