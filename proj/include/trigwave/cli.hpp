#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trigwave/harness.hpp"

namespace trigwave::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidation = 1,
  kReferenceUnconverged = 2,
  kIo = 3,
};

/// Reads an experiment config. The file is YAML (a key/value tree); a JSON
/// summary written by `convergence` is also accepted, in which case its
/// embedded "config" object is used. Throws InvalidArgument with the file
/// name, line and field on malformed input and IoError if unreadable.
ExperimentConfig load_config(const std::string& path);

/// Parses a config from text; `origin` names the source in diagnostics.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

/// Entry point of the trigwave executable. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trigwave::cli
