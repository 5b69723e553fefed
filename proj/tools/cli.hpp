#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace parsvm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_runtime_error = 1;
inline constexpr int exit_usage = 2;

/// Runs `parsvm <subcommand> ...`; args excludes the program name.
/// Subcommands: train, predict, bench, gen.
int run(std::span<const std::string> args, std::ostream &out, std::ostream &err);

}  // namespace parsvm::cli
