#pragma once

#include <iosfwd>

namespace cnet {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_usage = 2;

// Entry point of the `cnet` tool:
//   validate <dataset>
//   matrix   <dataset> [--weights-mode uniform|implied|expert] [--weights a,b,...] [--closure ...]
//   graph    <dataset> [--rule maximal|knn:<n>|threshold:<t>] [--format dot|graphml|json] [weights...]
//   sweep    <dataset> [--delta 0.25] [--rule ...]
//   serve    <dataset> [--host 127.0.0.1] [--port N]    (default port from CNET_PORT, else 8080)
//   generate [--seed N] [--correlation r]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cnet
