#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "lowvolt/config.hpp"

namespace lowvolt {

enum class Command { Sweep, Optimize, Frontier, CalibrateVf, CalibratePower, Validate };

std::optional<Command> parse_command(std::string_view name);

struct CommandInputs {
  std::string samples;  // CSV path for the calibrate commands
};

/// Run one command and write its artifacts under `cfg.output.dir`.
/// Returns the process exit status; errors are reported on `err` and mapped
/// through `exit_code`.
int run_command(Command cmd, const RunConfig& cfg, const CommandInputs& inputs, std::ostream& out,
                std::ostream& err);

/// Full command-line entry point:
///   lowvolt <command> [--config <path>] [--out <dir>] [--svg] [--samples <csv>]
///   lowvolt --explain-params
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lowvolt
