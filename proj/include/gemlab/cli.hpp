#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gemlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitBadInput = 2;

/// Entry point; `args` excludes the program name. Records go to `out` as
/// line-delimited JSON, the human summary to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

/// Worker count from GEMLAB_WORKERS, else the hardware concurrency (at least 1).
unsigned worker_count();

}  // namespace gemlab::cli
