#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hmlab/config.hpp"

namespace hmlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

struct Args {
  std::optional<std::string> command;  // positional; same as --command
  std::optional<std::filesystem::path> config;
  std::vector<std::string> extras;  // "--key value" or "--key=value" pairs
};

/// Turns unparsed "--dotted.key value" tokens into overrides. Throws
/// ConfigError on a dangling key or a token that is not a flag.
std::vector<Override> parse_overrides(const std::vector<std::string>& extras);

/// Executes one command and writes its artifacts into output_dir. Returns
/// the process exit code; diagnostics go to `err`, a summary to `out`.
int run(const Args& args, std::ostream& out, std::ostream& err);

}  // namespace hmlab::cli
