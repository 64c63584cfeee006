#pragma once

// JSON encoding of the catalog document.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oran_aml/catalog.hpp"

namespace oran_aml {

using json = nlohmann::json;

namespace detail {

/// Collects violations while walking a JSON document.
class Reader {
 public:
  explicit Reader(std::vector<Violation>& out) : out_(out) {}

  void fail(const std::string& path, std::string message) { out_.push_back({path, std::move(message)}); }

  const json* field(const json& obj, const std::string& path, const char* key, bool required = true) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(join(path, key), "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::string string(const json& obj, const std::string& path, const char* key, bool required = true) {
    const json* v = field(obj, path, key, required);
    if (!v) return {};
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return {};
    }
    return v->get<std::string>();
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback = 0.0) {
    const json* v = field(obj, path, key);
    if (!v) return fallback;
    if (!v->is_number()) {
      fail(join(path, key), "expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  bool boolean(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key);
    if (!v) return false;
    if (!v->is_boolean()) {
      fail(join(path, key), "expected a boolean");
      return false;
    }
    return v->get<bool>();
  }

  template <class E>
  E enumeration(const json& value, const std::string& path) {
    if (value.is_string()) {
      if (auto e = enum_from_string<E>(value.get<std::string>())) return *e;
      fail(path, "unknown value '" + value.get<std::string>() + "'");
    } else {
      fail(path, "expected a string");
    }
    return E{};
  }

  template <class E>
  E enumeration(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key);
    return v ? enumeration<E>(*v, join(path, key)) : E{};
  }

  template <class E>
  EnumSet<E> enum_set(const json& obj, const std::string& path, const char* key) {
    EnumSet<E> out;
    const json* v = field(obj, path, key);
    if (!v) return out;
    if (!v->is_array()) {
      fail(join(path, key), "expected an array");
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      out.insert(enumeration<E>((*v)[i], join(path, key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  /// Object keyed by every enumerator of E.
  template <class E, class T, class F>
  EnumMap<E, T> keyed(const json& obj, const std::string& path, const char* key, F&& item) {
    EnumMap<E, T> out{};
    const json* v = field(obj, path, key);
    if (!v) return out;
    const std::string here = join(path, key);
    if (!v->is_object()) {
      fail(here, "expected an object");
      return out;
    }
    for (const auto& [k, _] : v->items()) {
      if (!enum_from_string<E>(k)) fail(here + "." + k, "unknown key");
    }
    for (E e : enum_values<E>()) {
      const std::string name(to_string(e));
      auto it = v->find(name);
      if (it == v->end()) {
        fail(here + "." + name, "missing entry");
      } else {
        out[e] = item(*it, here + "." + name);
      }
    }
    return out;
  }

  const json* array(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key);
    if (v && !v->is_array()) {
      fail(join(path, key), "expected an array");
      return nullptr;
    }
    return v;
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
  }

 private:
  std::vector<Violation>& out_;
};

template <class E>
json names(const EnumSet<E>& set) {
  json out = json::array();
  for (E e : set.values()) out.push_back(std::string(to_string(e)));
  return out;
}

inline std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

}  // namespace detail

/// Builds a Catalog from its JSON form. Shape problems are appended to
/// `violations`; the returned catalog is only meaningful when none were added.
inline Catalog decode_catalog(const json& doc, std::vector<Violation>& violations) {
  detail::Reader r(violations);
  Catalog c;
  if (!doc.is_object()) {
    r.fail("", "catalog document must be an object");
    return c;
  }
  c.version = r.string(doc, "", "version");
  c.provenance = r.string(doc, "", "provenance", false);

  if (const json* arr = r.array(doc, "", "capabilities")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const auto path = detail::indexed("capabilities", i);
      c.capabilities.push_back({r.enumeration<Capability>(v, path, "code"),
                                r.enumeration<Axis>(v, path, "axis"), r.string(v, path, "label")});
    }
  }

  if (const json* arr = r.array(doc, "", "order_edges")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const auto path = detail::indexed("order_edges", i);
      if (!v.is_array() || v.size() != 2) {
        r.fail(path, "expected [stronger, weaker]");
        continue;
      }
      c.order.push_back({r.enumeration<Capability>(v[0], path + "[0]"),
                         r.enumeration<Capability>(v[1], path + "[1]")});
    }
  }

  if (const json* arr = r.array(doc, "", "actors")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const auto path = detail::indexed("actors", i);
      c.actors.push_back({r.enumeration<Actor>(v, path, "id"), r.string(v, path, "label"),
                          r.string(v, path, "description", false)});
    }
  }

  if (const json* arr = r.array(doc, "", "threats")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const auto path = detail::indexed("threats", i);
      c.threats.push_back({r.enumeration<Threat>(v, path, "id"), r.string(v, path, "label"),
                           r.enumeration<SecurityProperty>(v, path, "violated_property")});
    }
  }

  if (const json* arr = r.array(doc, "", "families")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const auto path = detail::indexed("families", i);
      c.families.push_back({r.string(v, path, "id"), r.string(v, path, "label"),
                            r.enumeration<Threat>(v, path, "threat"),
                            r.enumeration<ThreatModelClass>(v, path, "threat_model_class"),
                            r.enumeration<Phase>(v, path, "phase")});
    }
  }

  if (const json* arr = r.array(doc, "", "techniques")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const auto path = detail::indexed("techniques", i);
      AttackTechnique t;
      t.id = r.string(v, path, "id");
      t.family = r.string(v, path, "family");
      t.variant = r.string(v, path, "variant");
      if (const json* req = r.field(v, path, "req")) {
        if (!req->is_object()) {
          r.fail(path + ".req", "expected an object");
        } else {
          for (const auto& [key, value] : req->items()) {
            auto cap = enum_from_string<Capability>(key);
            if (!cap) {
              r.fail(path + ".req." + key, "unknown capability");
            } else if (!value.is_number()) {
              r.fail(path + ".req." + key, "expected a number");
            } else {
              t.req[*cap] = value.get<double>();
            }
          }
        }
      }
      t.impacts = r.enum_set<ImpactKind>(v, path, "impacts");
      t.effectiveness = r.number(v, path, "effectiveness");
      if (const json* f = r.field(v, path, "feasibility")) {
        const auto fp = path + ".feasibility";
        auto as_bool = [&](const json& b, const std::string& p) {
          if (!b.is_boolean()) r.fail(p, "expected a boolean");
          return b.is_boolean() && b.get<bool>();
        };
        t.feasibility.a1 = r.keyed<MlHost, bool>(*f, fp, "a1", as_bool);
        t.feasibility.a2 = r.keyed<RicLocation, EnumMap<Scenario, bool>>(
            *f, fp, "a2", [&](const json& loc, const std::string& p) {
              EnumMap<Scenario, bool> m{false};
              if (!loc.is_object()) {
                r.fail(p, "expected an object");
                return m;
              }
              for (Scenario s : enum_values<Scenario>()) {
                const std::string name(to_string(s));
                auto it = loc.find(name);
                if (it == loc.end()) {
                  r.fail(p + "." + name, "missing entry");
                } else {
                  m[s] = as_bool(*it, p + "." + name);
                }
              }
              return m;
            });
        t.feasibility.a3 = r.boolean(*f, fp, "a3");
        t.feasibility.a4 = r.boolean(*f, fp, "a4");
        t.feasibility.a5 = r.boolean(*f, fp, "a5");
        t.feasibility.a6 = r.boolean(*f, fp, "a6");
      }
      if (v.contains("additional_threats")) {
        t.additional_threats = r.enum_set<Threat>(v, path, "additional_threats").values();
      }
      c.techniques.push_back(std::move(t));
    }
  }

  if (const json* arr = r.array(doc, "", "countermeasures")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const auto path = detail::indexed("countermeasures", i);
      Countermeasure cm;
      cm.id = r.string(v, path, "id");
      cm.name = r.string(v, path, "name");
      cm.category = r.enumeration<CountermeasureCategory>(v, path, "category");
      cm.threats_covered = r.enum_set<Threat>(v, path, "threats_covered");
      cm.families_covered = r.enum_set<FamilyClass>(v, path, "families_covered");
      cm.security_type = r.enum_set<SecurityType>(v, path, "security_type");
      cm.defender_needs = r.enum_set<DefenderNeed>(v, path, "defender_needs");
      cm.phases = r.enum_set<Phase>(v, path, "phases");
      cm.performance_flags = r.enum_set<PerformanceFlag>(v, path, "performance_flags");
      if (const json* oc = r.field(v, path, "oran_constraints")) {
        const auto op = path + ".oran_constraints";
        auto& k = cm.oran_constraints;
        k.black_box_ok = r.boolean(*oc, op, "black_box_ok");
        k.white_box_only = r.boolean(*oc, op, "white_box_only");
        k.needs_training_data = r.boolean(*oc, op, "needs_training_data");
        k.needs_feature_data = r.boolean(*oc, op, "needs_feature_data");
        k.hosts = r.enum_set<MlHost>(*oc, op, "hosts");
        k.near_rt_ok = r.boolean(*oc, op, "near_rt_ok");
        k.non_rt_ok = r.boolean(*oc, op, "non_rt_ok");
      }
      if (const json* u = v.contains("unverified") ? &v["unverified"] : nullptr) {
        if (u->is_array()) {
          for (const auto& s : *u)
            if (s.is_string()) cm.unverified.push_back(s.get<std::string>());
        }
      }
      c.countermeasures.push_back(std::move(cm));
    }
  }

  if (const json* arr = r.array(doc, "", "scenarios")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& v = (*arr)[i];
      const auto path = detail::indexed("scenarios", i);
      DeploymentScenario s;
      s.id = r.enumeration<Scenario>(v, path, "id");
      s.latency_class = r.enumeration<LatencyClass>(v, path, "latency_class");
      s.learning_mode = r.enumeration<LearningMode>(v, path, "learning_mode");
      s.placements = r.keyed<MlHost, RicLocation>(
          v, path, "placements",
          [&](const json& loc, const std::string& p) { return r.enumeration<RicLocation>(loc, p); });
      c.scenarios.push_back(s);
    }
  }
  return c;
}

inline json encode_catalog(const Catalog& c) {
  using detail::names;
  json doc;
  doc["version"] = c.version;
  doc["provenance"] = c.provenance;
  doc["capabilities"] = json::array();
  for (const auto& cap : c.capabilities) {
    doc["capabilities"].push_back(
        {{"code", to_string(cap.code)}, {"axis", to_string(cap.axis)}, {"label", cap.label}});
  }
  doc["order_edges"] = json::array();
  for (const auto& e : c.order) doc["order_edges"].push_back({to_string(e.stronger), to_string(e.weaker)});
  doc["actors"] = json::array();
  for (const auto& a : c.actors) {
    doc["actors"].push_back({{"id", to_string(a.id)}, {"label", a.label}, {"description", a.description}});
  }
  doc["threats"] = json::array();
  for (const auto& t : c.threats) {
    doc["threats"].push_back({{"id", to_string(t.id)},
                              {"label", t.label},
                              {"violated_property", to_string(t.violated_property)}});
  }
  doc["families"] = json::array();
  for (const auto& f : c.families) {
    doc["families"].push_back({{"id", f.id},
                               {"label", f.label},
                               {"threat", to_string(f.threat)},
                               {"threat_model_class", to_string(f.threat_model_class)},
                               {"phase", to_string(f.phase)}});
  }
  doc["techniques"] = json::array();
  for (const auto& t : c.techniques) {
    json req = json::object();
    for (Capability cap : enum_values<Capability>())
      if (t.req[cap] != 0.0) req[std::string(to_string(cap))] = t.req[cap];
    json a1 = json::object();
    for (MlHost h : enum_values<MlHost>()) a1[std::string(to_string(h))] = t.feasibility.a1[h];
    json a2 = json::object();
    for (RicLocation loc : enum_values<RicLocation>()) {
      json per = json::object();
      for (Scenario s : enum_values<Scenario>()) per[std::string(to_string(s))] = t.feasibility.a2[loc][s];
      a2[std::string(to_string(loc))] = per;
    }
    json item{{"id", t.id},
              {"family", t.family},
              {"variant", t.variant},
              {"req", req},
              {"impacts", names(t.impacts)},
              {"effectiveness", t.effectiveness},
              {"feasibility",
               {{"a1", a1}, {"a2", a2}, {"a3", t.feasibility.a3}, {"a4", t.feasibility.a4},
                {"a5", t.feasibility.a5}, {"a6", t.feasibility.a6}}}};
    if (!t.additional_threats.empty()) {
      json extra = json::array();
      for (Threat th : t.additional_threats) extra.push_back(std::string(to_string(th)));
      item["additional_threats"] = extra;
    }
    doc["techniques"].push_back(item);
  }
  doc["countermeasures"] = json::array();
  for (const auto& cm : c.countermeasures) {
    const auto& k = cm.oran_constraints;
    doc["countermeasures"].push_back(
        {{"id", cm.id},
         {"name", cm.name},
         {"category", to_string(cm.category)},
         {"threats_covered", names(cm.threats_covered)},
         {"families_covered", names(cm.families_covered)},
         {"security_type", names(cm.security_type)},
         {"defender_needs", names(cm.defender_needs)},
         {"phases", names(cm.phases)},
         {"performance_flags", names(cm.performance_flags)},
         {"oran_constraints",
          {{"black_box_ok", k.black_box_ok},
           {"white_box_only", k.white_box_only},
           {"needs_training_data", k.needs_training_data},
           {"needs_feature_data", k.needs_feature_data},
           {"hosts", names(k.hosts)},
           {"near_rt_ok", k.near_rt_ok},
           {"non_rt_ok", k.non_rt_ok}}},
         {"unverified", cm.unverified}});
  }
  doc["scenarios"] = json::array();
  for (const auto& s : c.scenarios) {
    json placements = json::object();
    for (MlHost h : enum_values<MlHost>()) placements[std::string(to_string(h))] = to_string(s.placements[h]);
    doc["scenarios"].push_back({{"id", to_string(s.id)},
                                {"latency_class", to_string(s.latency_class)},
                                {"learning_mode", to_string(s.learning_mode)},
                                {"placements", placements}});
  }
  return doc;
}

inline json parse_json_text(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

/// Decodes and validates; throws ParseError or ValidationError.
inline Catalog load_catalog(const json& doc) {
  std::vector<Violation> violations;
  Catalog c = decode_catalog(doc, violations);
  if (violations.empty()) violations = validate_catalog(c);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return c;
}

inline Catalog load_catalog_text(std::string_view text) {
  return load_catalog(parse_json_text(text, "catalog"));
}

inline Catalog load_catalog_file(const std::filesystem::path& path) {
  return load_catalog_text(read_text_file(path));
}

/// Replaces technique effectiveness values with measured success rates from
/// an estimates document (`{"estimates": {"AT2.2": {"success_rate": ...}}}`).
inline Catalog apply_effectiveness_overrides(Catalog catalog, const json& estimates) {
  if (!estimates.is_object() || !estimates.contains("estimates") || !estimates["estimates"].is_object()) {
    throw ParseError("estimates document must contain an 'estimates' object");
  }
  std::vector<Violation> violations;
  for (const auto& [id, est] : estimates["estimates"].items()) {
    auto it = std::find_if(catalog.techniques.begin(), catalog.techniques.end(),
                           [&](const AttackTechnique& t) { return t.id == id; });
    if (it == catalog.techniques.end()) {
      violations.push_back({"estimates." + id, "unknown technique id"});
      continue;
    }
    if (!est.is_object() || !est.contains("success_rate") || !est["success_rate"].is_number()) {
      violations.push_back({"estimates." + id + ".success_rate", "expected a number"});
      continue;
    }
    it->effectiveness = est["success_rate"].get<double>();
  }
  if (violations.empty()) violations = validate_catalog(catalog);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return catalog;
}

}  // namespace oran_aml
