#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dtvar::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_domain_error = 1;
inline constexpr int exit_usage_error = 2;

/// Runs one command; args exclude the program name. CSV results without an
/// --out path go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dtvar::cli
