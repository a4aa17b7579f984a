#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "membrane/config.hpp"

namespace membrane::cli {

// Exit codes.
inline constexpr int kSuccess = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kNumericalFailure = 2;

// Entry point of the `reinforce` tool. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Subcommands on an already resolved and validated config. They throw on
// failure; `run` maps exceptions to exit codes.
int cmd_radial(const RunConfig& config, std::ostream& out);
int cmd_optimize(const RunConfig& config, std::ostream& out);
int cmd_eigen(const RunConfig& config, std::ostream& out);
int cmd_mesh(const RunConfig& config, std::ostream& out);

}  // namespace membrane::cli
