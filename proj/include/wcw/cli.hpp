#pragma once

// Command-line front end. `wcw <subcommand> [options] [inputs]`.
//
// Exit codes: 0 success, 2 input or validation error (one JSON line on the
// error stream), 64 unknown subcommand (usage on the error stream).

#include <iosfwd>
#include <string>
#include <vector>

namespace wcw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitUsage = 64;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const std::vector<std::string>& subcommands();

std::string sha256_hex(const std::string& bytes);

}  // namespace wcw::cli
