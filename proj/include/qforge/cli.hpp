#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qforge {

/// Process exit codes. Stable; success is exactly 0.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,    // bad flags, config file, profile or corpus
  kExitRender = 3,    // renderer missing, failing, or a font file absent
  kExitIo = 4,        // unreadable or unwritable files
  kExitData = 5,      // missing, duplicate or malformed ids and lines
  kExitConflict = 6,  // report inputs scored under different metric configs
  kExitInspect = 7,   // unknown sample id or a failed conformance check
};

/// Entry point behind the `qari-forge` binary. `args` excludes the program
/// name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qforge
