#pragma once

#include <string>
#include <vector>

#include "graphsplit/json_io.hpp"

namespace graphsplit {

inline constexpr const char* kVersion = "1.0.0";

struct CommandOutcome {
  int exit_code = 0;  // 0 success, 1 domain failure, 2 I/O or parse failure
  std::string message;
  std::vector<std::string> files;
};

/// Runs check | run | sweep | bench | equivalence; never throws.
CommandOutcome run_command(const std::string& command, const Json& config, const std::string& out_dir);

/// Applies a dotted-path override; the value is parsed as JSON when possible.
void apply_override(Json& config, const std::string& assignment);

}  // namespace graphsplit
