#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seqabs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDiverged = 3;

/// Entry point of the `seqabs` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqabs::cli
