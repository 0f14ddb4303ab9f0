#pragma once

#include <iosfwd>

namespace zlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitAssertion = 1,
  kExitInvalid = 2,
  kExitNumerical = 3,
  kExitError = 4,
};

/// Entry point of the zlab tool; returns the process exit code.
int zlab_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zlab
