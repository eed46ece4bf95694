#pragma once

#include <map>
#include <string>

namespace hypcmc {

// ---------------------------------------------------------------------------
// Batch front-end: flat key=value configuration, one command per run, CSV and
// structured-text artifacts written to the output directory. Identical
// configurations (and seed) produce byte-identical outputs.
//
// Exit statuses: 0 success, 1 failed check, 2 usage/configuration error.
// ---------------------------------------------------------------------------

struct RunOutcome {
  int status = 0;
  std::string message;  // human-readable summary / error text
};

/// Parses "key=value" lines (''#' comments and blank lines allowed).
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Executes a command described by a flat key=value map. Requires a
/// "command" key; unknown keys fail fast and are listed in the message.
RunOutcome run_config(const std::map<std::string, std::string>& cfg);

RunOutcome run_config_text(const std::string& text);

}  // namespace hypcmc
