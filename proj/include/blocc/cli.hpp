#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blocc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command. args excludes the program name. Reports go to `out`
/// unless --output is given; errors go to `err` as a one-line JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blocc::cli
