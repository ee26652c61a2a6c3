#pragma once

#include <iosfwd>

namespace dirquant::cli {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitEstimator = 3,
  kExitRankDeficient = 4,
  kExitTestPrecondition = 5,
};

// Entry point of the `dirquant` tool, with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dirquant::cli
