#pragma once

#include "elastinet/flow.hpp"
#include "elastinet/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace elastinet {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitError = 2 };

/// Options shared by all commands; unset members fall back to the input's own values.
struct CliOptions {
  std::optional<Flavor> flavor;
  std::optional<double> mu;
  std::optional<std::size_t> grid;
  std::optional<double> amplitude;
  std::uint64_t seed = 0;
  std::string out;
  SchemeConfig scheme;
};

/// Resolves a built-in scenario name or a snapshot path to a network and its μ.
LoadedNetwork resolve_input(const std::string& input, const CliOptions& options);

int cmd_scenario(const std::string& input, const CliOptions& options, std::ostream& out);
int cmd_check(const std::string& input, const CliOptions& options, std::ostream& out);
int cmd_ls(const std::string& input, const CliOptions& options, std::ostream& out);
int cmd_reparam(const std::string& input, const CliOptions& options, std::ostream& out);
int cmd_simulate(const std::string& input, const CliOptions& options, std::ostream& out);

/// Parses argv and dispatches; errors are reported on `err` with exit code 2.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace elastinet
