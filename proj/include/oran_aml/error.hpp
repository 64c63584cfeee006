#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oran_aml {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (not JSON, wrong shape).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A single broken invariant, located by a dotted path such as
/// `techniques[3].family` or `impact_grades.T4`.
struct Violation {
  std::string path;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(summarize(violations)), violations_(std::move(violations)) {}
  ValidationError(std::string path, std::string message)
      : ValidationError(std::vector<Violation>{{std::move(path), std::move(message)}}) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string summarize(const std::vector<Violation>& v) {
    std::string out = std::to_string(v.size()) + " violation(s)";
    for (const auto& item : v) out += "\n  " + item.path + ": " + item.message;
    return out;
  }

  std::vector<Violation> violations_;
};

}  // namespace oran_aml
