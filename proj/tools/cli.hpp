#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace mvr::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitIo = 3;

/// Runs the mvr command line; args excludes the program name. Output files
/// are written by the subcommands; `out` and `err` receive console text.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mvr::cli
