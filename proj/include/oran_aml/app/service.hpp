#pragma once

// HTTP binding of the workspace. JSON in, JSON out; every mutation answers
// with the re-derived result. No authentication: meant for a local analyst.

#include <string>

#include <httplib.h>

#include "oran_aml/advisor_io.hpp"
#include "oran_aml/app/attack_runs.hpp"
#include "oran_aml/app/workspace.hpp"

namespace oran_aml::app {

inline json encode_violations(const std::vector<Violation>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back({{"path", x.path}, {"message", x.message}});
  return arr;
}

/// A defender context from query parameters; list values are comma separated.
inline DefenderContext context_from_query(const httplib::Request& req) {
  json doc = json::object();
  auto list = [](const std::string& s) {
    json arr = json::array();
    std::size_t start = 0;
    while (start <= s.size()) {
      const auto end = s.find(',', start);
      const std::string item = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (!item.empty()) arr.push_back(item);
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return arr;
  };
  auto flag = [](const std::string& s) -> json {
    if (s == "true") return true;
    if (s == "false") return false;
    return s;
  };
  if (req.has_param("model_access")) doc["model_access"] = req.get_param_value("model_access");
  if (req.has_param("ric_target")) doc["ric_target"] = req.get_param_value("ric_target");
  if (req.has_param("hosts")) doc["hosts_available"] = list(req.get_param_value("hosts"));
  if (req.has_param("budget")) doc["performance_budget"] = list(req.get_param_value("budget"));
  if (req.has_param("has_training_data")) doc["has_training_data"] = flag(req.get_param_value("has_training_data"));
  if (req.has_param("has_feature_data")) doc["has_feature_data"] = flag(req.get_param_value("has_feature_data"));
  return load_context(doc);
}

class Service {
 public:
  explicit Service(Workspace& ws) : ws_(ws) { routes(); }

  httplib::Server& server() { return server_; }

  bool listen(const std::string& host, int port) { return server_.listen(host, port); }
  int bind_to_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() { server_.wait_until_ready(); }

 private:
  using Handler = std::function<json(const httplib::Request&, httplib::Response&)>;

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static httplib::Server::Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        res.status = 200;
        json body = h(req, res);
        reply(res, res.status, body);
      } catch (const ValidationError& e) {
        reply(res, 422, {{"error", "validation failed"}, {"violations", encode_violations(e.violations())}});
      } catch (const NotFound& e) {
        reply(res, 404, {{"error", e.what()}});
      } catch (const ParseError& e) {
        reply(res, 400, {{"error", e.what()}});
      } catch (const Error& e) {
        reply(res, 400, {{"error", e.what()}});
      } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
      }
    };
  }

  static json body_of(const httplib::Request& req) { return parse_json_text(req.body, "request body"); }

  json mutation_reply(const std::string& id, const AssessmentResult& r) const {
    return {{"id", id}, {"result", encode_result(r)}, {"prioritization", encode_prioritization(r)}};
  }

  void routes() {
    static const std::string id = "([A-Za-z0-9_-]+)";
    server_.Get("/catalog", guarded([this](const auto&, auto&) { return encode_catalog(ws_.catalog()); }));
    server_.Get("/questions", guarded([this](const auto&, auto&) { return encode_questions(ws_.questions()); }));

    server_.Get("/assessments", guarded([this](const auto&, auto&) { return json{{"ids", ws_.assessment_ids()}}; }));
    server_.Post("/assessments", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const json doc = body_of(req);
                   std::vector<Violation> v;
                   UseCaseProfile p = decode_profile(doc.contains("profile") ? doc["profile"] : doc, v);
                   if (!v.empty()) throw ValidationError(std::move(v));
                   const std::string aid = ws_.create_assessment(p);
                   res.status = 201;
                   return mutation_reply(aid, *ws_.assessment(aid).result);
                 }));
    server_.Get("/assessments/" + id, guarded([this](const httplib::Request& req, auto&) {
                  const std::string aid = req.matches[1];
                  json doc = encode_project(ws_.assessment(aid));
                  doc["id"] = aid;
                  return doc;
                }));
    server_.Patch("/assessments/" + id + "/answers", guarded([this](const httplib::Request& req, auto&) {
                    const std::string aid = req.matches[1];
                    const ProfilePatch patch = load_patch({{"answers", body_of(req)}});
                    return mutation_reply(aid, ws_.update_assessment(aid, patch));
                  }));
    server_.Patch("/assessments/" + id + "/impacts", guarded([this](const httplib::Request& req, auto&) {
                    const std::string aid = req.matches[1];
                    const ProfilePatch patch = load_patch({{"impact_grades", body_of(req)}});
                    return mutation_reply(aid, ws_.update_assessment(aid, patch));
                  }));
    server_.Get("/assessments/" + id + "/risk", guarded([this](const httplib::Request& req, auto&) {
                  const std::string aid = req.matches[1];
                  json doc = encode_result(*ws_.assessment(aid).result);
                  doc["id"] = aid;
                  return doc;
                }));
    server_.Get("/assessments/" + id + "/prioritization", guarded([this](const httplib::Request& req, auto&) {
                  const std::string aid = req.matches[1];
                  const Project p = ws_.assessment(aid);
                  return json{{"id", aid},
                              {"catalog_version", p.catalog_version},
                              {"prioritization", encode_prioritization(*p.result)}};
                }));
    server_.Post("/assessments/" + id + "/what-if", guarded([this](const httplib::Request& req, auto&) {
                   const std::string aid = req.matches[1];
                   const Project p = ws_.assessment(aid);
                   const ProfilePatch patch = load_patch(body_of(req));
                   json doc = encode_delta(what_if(p.profile, patch, p.questions, ws_.catalog()));
                   doc["id"] = aid;
                   return doc;
                 }));
    server_.Get("/assessments/" + id + "/recommendations", guarded([this](const httplib::Request& req, auto&) {
                  const std::string aid = req.matches[1];
                  std::size_t top = 5;
                  if (req.has_param("top")) {
                    const std::string s = req.get_param_value("top");
                    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6)
                      throw ValidationError("top", "expected a positive integer");
                    top = std::stoul(s);
                    if (top < 1) throw ValidationError("top", "expected a positive integer");
                  }
                  const DefenderContext ctx = context_from_query(req);
                  const Project p = ws_.assessment(aid);
                  return json{{"id", aid},
                              {"top", top},
                              {"context", encode_context(ctx)},
                              {"recommendations", encode_recommendations(recommend(*p.result, ctx, ws_.catalog(), top))}};
                }));

    server_.Get("/attack-runs", guarded([this](const auto&, auto&) { return json{{"ids", ws_.run_ids()}}; }));
    server_.Post("/attack-runs", guarded([this](const httplib::Request& req, httplib::Response& res) {
                   const AttackRequest ar = load_attack_request(req.body.empty() ? json::object() : body_of(req));
                   json record = run_attack(ar);
                   const std::string rid = ws_.save_run(record);
                   record["id"] = rid;
                   res.status = 201;
                   return record;
                 }));
    server_.Get("/attack-runs/" + id, guarded([this](const httplib::Request& req, auto&) {
                  return ws_.run(req.matches[1]);
                }));
  }

  Workspace& ws_;
  httplib::Server server_;
};

}  // namespace oran_aml::app
