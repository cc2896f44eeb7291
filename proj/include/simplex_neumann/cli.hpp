#pragma once

#include <ostream>

namespace simplex_neumann::cli {

/// Exit codes of the command-line tool.
inline constexpr int kSuccess = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

/// Parses and runs one subcommand. Reports go to `out` (or to --out),
/// a one-line JSON error to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace simplex_neumann::cli
