#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynzeta::cli {

enum ExitCode : int { kPass = 0, kVerificationFailed = 1, kUsageError = 2, kNumericalError = 3 };

/// Runs one invocation; args exclude the program name. Errors go to `err` as one JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CommandInfo {
  std::string path;                // e.g. "verify selberg-funceq"
  std::vector<std::string> flags;  // long option names, e.g. "--config"
  std::string help;                // the text printed by --help
};

/// Every leaf subcommand with its registered flags and rendered help.
std::vector<CommandInfo> command_registry();

/// RFC 4180 field quoting.
std::string csv_field(const std::string& text);

}  // namespace dynzeta::cli
