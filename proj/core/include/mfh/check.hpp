#pragma once

#include <string>
#include <vector>

namespace mfh {

enum class Status { Pass, Fail, Error };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "error";
}

/// One verdict line. `witness` holds the first counterexample on failure,
/// or supporting data on success.
struct Check {
  std::string name;
  Status status = Status::Pass;
  std::string witness;

  bool passed() const noexcept { return status == Status::Pass; }
};

struct ValidationReport {
  std::vector<Check> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return true;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  void add(std::string name, bool pass, std::string witness = {}) {
    checks.push_back({std::move(name), pass ? Status::Pass : Status::Fail, std::move(witness)});
  }
  void append(const ValidationReport& o, const std::string& prefix = {}) {
    for (const auto& c : o.checks) checks.push_back({prefix + c.name, c.status, c.witness});
  }
};

}  // namespace mfh
