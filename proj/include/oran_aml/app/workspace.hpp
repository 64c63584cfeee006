#pragma once

// File-backed workspace: catalog.json, questions.json, assessments/*.json,
// runs/*.json. Writes to one assessment are serialized; reads and writes to
// different assessments proceed independently.

#include <filesystem>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <regex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "oran_aml/assessment_io.hpp"
#include "oran_aml/catalog_io.hpp"

namespace oran_aml::app {

class NotFound : public Error {
 public:
  using Error::Error;
};

inline bool valid_id(const std::string& id) {
  static const std::regex pattern("[A-Za-z0-9_-]{1,64}");
  return std::regex_match(id, pattern);
}

class Workspace {
 public:
  /// Opens an existing workspace; throws when catalog.json or questions.json
  /// is missing or invalid.
  explicit Workspace(std::filesystem::path root)
      : root_(std::move(root)),
        catalog_(load_catalog_file(root_ / "catalog.json")),
        questions_(load_questions_file(root_ / "questions.json")) {
    std::filesystem::create_directories(root_ / "assessments");
    std::filesystem::create_directories(root_ / "runs");
  }

  /// Writes catalog.json and questions.json, then opens the workspace.
  static std::unique_ptr<Workspace> create(const std::filesystem::path& root, const Catalog& catalog,
                                           const std::vector<Question>& questions) {
    write_text_file(root / "catalog.json", canonical(encode_catalog(catalog)));
    write_text_file(root / "questions.json", canonical(encode_questions(questions)));
    return std::make_unique<Workspace>(root);
  }

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  const std::filesystem::path& root() const { return root_; }
  const Catalog& catalog() const { return catalog_; }
  const std::vector<Question>& questions() const { return questions_; }

  std::vector<std::string> assessment_ids() const { return ids_in(root_ / "assessments"); }
  std::vector<std::string> run_ids() const { return ids_in(root_ / "runs"); }

  /// Validates the profile, stores it with a fresh result and returns its id.
  std::string create_assessment(const UseCaseProfile& profile) {
    AssessmentResult result = assess(profile, questions_, catalog_);
    std::lock_guard create(create_mutex_);
    const std::string id = next_id(root_ / "assessments", "a");
    std::unique_lock lock(lock_for(id));
    store(id, profile, questions_, result);
    return id;
  }

  /// The stored project, its result re-derived against the current catalog
  /// and stamped with its version; the stored copy is only for export.
  Project assessment(const std::string& id) {
    std::shared_lock lock(lock_for(id));
    return load(id);
  }

  /// Applies the patch under the assessment's write lock and returns the
  /// re-derived result. The stored file is left untouched when the patched
  /// profile is invalid.
  AssessmentResult update_assessment(const std::string& id, const ProfilePatch& patch) {
    std::unique_lock lock(lock_for(id));
    Project p = load(id);
    UseCaseProfile next = apply_patch(p.profile, patch);
    AssessmentResult result = assess(next, p.questions, catalog_);
    store(id, next, p.questions, result);
    return result;
  }

  std::string save_run(const json& record) {
    std::lock_guard create(create_mutex_);
    const std::string id = next_id(root_ / "runs", "r");
    json doc = record;
    doc["id"] = id;
    replace_file(root_ / "runs" / (id + ".json"), canonical(doc));
    return id;
  }

  json run(const std::string& id) const {
    const auto path = checked(root_ / "runs", id);
    return parse_json_text(read_text_file(path), "run " + id);
  }

 private:
  static void replace_file(const std::filesystem::path& path, std::string_view text) {
    auto tmp = path;
    tmp += ".tmp";
    write_text_file(tmp, text);
    std::filesystem::rename(tmp, path);
  }

  static std::vector<std::string> ids_in(const std::filesystem::path& dir) {
    std::vector<std::string> out;
    if (!std::filesystem::exists(dir)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    return out;
  }

  static std::string next_id(const std::filesystem::path& dir, const std::string& prefix) {
    for (std::size_t k = 1;; ++k) {
      const std::string id = prefix + std::to_string(k);
      if (!std::filesystem::exists(dir / (id + ".json"))) return id;
    }
  }

  static std::filesystem::path checked(const std::filesystem::path& dir, const std::string& id) {
    if (!valid_id(id)) throw NotFound("no such id: " + id);
    auto path = dir / (id + ".json");
    if (!std::filesystem::exists(path)) throw NotFound("no such id: " + id);
    return path;
  }

  std::shared_mutex& lock_for(const std::string& id) {
    if (!valid_id(id)) throw NotFound("no such id: " + id);
    std::lock_guard guard(locks_mutex_);
    auto& slot = locks_[id];
    if (!slot) slot = std::make_unique<std::shared_mutex>();
    return *slot;
  }

  Project load(const std::string& id) const {
    const auto path = checked(root_ / "assessments", id);
    Project p = decode_project(parse_json_text(read_text_file(path), "assessment " + id));
    p.catalog_version = catalog_.version;
    p.result = assess(p.profile, p.questions, catalog_);
    return p;
  }

  void store(const std::string& id, const UseCaseProfile& profile, const std::vector<Question>& questions,
             const AssessmentResult& result) {
    Project p{profile, questions, catalog_.version, result};
    replace_file(root_ / "assessments" / (id + ".json"), canonical(encode_project(p)));
  }

  std::filesystem::path root_;
  Catalog catalog_;
  std::vector<Question> questions_;
  std::mutex create_mutex_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::shared_mutex>> locks_;
};

}  // namespace oran_aml::app
