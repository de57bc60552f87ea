#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfh/error.hpp"
#include "mfv/fixture.hpp"
#include "mfv/report.hpp"

namespace mfv {

struct Options {
  std::string file;
  std::string sub;
  std::optional<std::string> lifting;  ///< images of the variables, separated by ";"
  std::optional<std::string> compare_lifting;
  bool saturate = false;
  int random_liftings = 0;
  int random_sections = 10;
  std::uint64_t seed = 0;
  std::optional<int> degree_bound;
  std::optional<std::string> liftings_file;
};

/// Error kinds that express a failed mathematical check rather than bad input.
bool is_check_failure(mfh::ErrorKind kind);

Report cmd_validate(const Model& m, const Options& o);
Report cmd_grade(const Model& m, const Options& o);
Report cmd_associate(const Model& m, const Options& o);
Report cmd_pcurv(const Model& m, const Options& o);
Report cmd_descend(const Model& m, const Options& o);
Report cmd_roundtrip(const Model& m, const Options& o);
Report cmd_twist(const Model& m, const Options& o);
Report cmd_degree(const Model& m, const Options& o);

/// Loads the fixture and dispatches; input errors propagate as mfh::Error.
Report run_command(const std::string& command, const Options& o);

/// Full command-line entry point; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace mfv
