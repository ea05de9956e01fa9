#pragma once

#include <string>

namespace leanevo::detail {

struct CommandResult {
  int exit_code{-1};
  std::string output;  // stdout and stderr interleaved
  bool timed_out{false};
};

// Runs `sh -c command` capturing combined output; kills the process group
// after `timeout_seconds` (0 disables the timeout).
CommandResult run_command(const std::string& command, double timeout_seconds);

}  // namespace leanevo::detail
