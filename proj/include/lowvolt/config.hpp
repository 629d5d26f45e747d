#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lowvolt/model.hpp"
#include "lowvolt/planner.hpp"
#include "lowvolt/speedup.hpp"

namespace lowvolt {

struct OutputOptions {
  std::string dir = ".";
  bool csv = true;
  bool report = true;
  bool svg = false;

  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

/// Grid walked by the `validate` command.
struct ValidationGrid {
  std::vector<double> fractions{0.5, 0.9, 0.99, 1.0};
  std::vector<double> targets{0.25, 0.5, 1.0};
  double tolerance = 1e-9;

  friend bool operator==(const ValidationGrid&, const ValidationGrid&) = default;
};

struct RunConfig {
  ChipParams<double> chip = ChipParams<double>::reference();
  ReferencePoint<double> reference = ReferencePoint<double>::reference();
  SpeedupModel<double> speedup = AmdahlSpeedup<double>{0.9};
  std::string speedup_table;  // absolute path when the table variant is used
  std::vector<TargetSpec<double>> targets{TargetSpec<double>{1.0}};
  CoreRange p_range{1, 64};
  OutputOptions output;
  ValidationGrid validate;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parse config text. Relative table paths resolve against `base_dir`.
/// Throws Error(Parse) for malformed text and Error(Validation) listing
/// every invariant violation with its field path.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

/// Serialise every field explicitly; `parse_config` of the result yields an
/// equal RunConfig.
std::string dump_config(const RunConfig& cfg);

}  // namespace lowvolt
