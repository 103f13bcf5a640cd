#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infonet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 1;
inline constexpr int kExitInternal = 2;

// Runs one command line (args[0] is the program name). Normal output goes to
// `out`, diagnostics and warnings to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Lowercase hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

}  // namespace infonet::cli
