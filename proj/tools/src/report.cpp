#include "mfv/report.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace mfv {

std::string Report::to_json(bool include_time) const {
  nlohmann::ordered_json j;
  j["format"] = "mfv1-report";
  j["command"] = command;
  j["fixture"] = fixture;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks.checks) {
    nlohmann::ordered_json cj;
    cj["check"] = c.name;
    cj["status"] = mfh::to_string(c.status);
    if (!c.witness.empty()) cj["witness"] = c.witness;
    j["checks"].push_back(cj);
  }
  j["ok"] = ok();
  if (include_time) j["wall_time_ms"] = wall_time_ms;
  return j.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << command << " " << fixture << "\n";
  int passed = 0;
  for (const auto& c : checks.checks) {
    os << "  [" << mfh::to_string(c.status) << "] " << c.name;
    if (!c.witness.empty()) os << ": " << c.witness;
    os << "\n";
    if (c.passed()) ++passed;
  }
  os << passed << "/" << checks.checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace mfv
