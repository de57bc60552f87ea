#pragma once

#include <string>

#include "mfh/check.hpp"

namespace mfv {

/// Machine report "mfv1-report". Check order is the order of evaluation.
struct Report {
  std::string command;
  std::string fixture;
  mfh::ValidationReport checks;
  double wall_time_ms = 0.0;

  bool ok() const { return checks.ok(); }
  /// 0 when every check passes, 1 otherwise.
  int exit_code() const { return ok() ? 0 : 1; }
  std::string to_json(bool include_time = true) const;
  std::string to_text() const;
};

}  // namespace mfv
