#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace orbitkit {

using Json = nlohmann::json;

// Rejected configuration (unknown key, missing key, wrong type, out-of-cap
// value).  The CLI maps this to exit code 2; any invariant violation found
// while running lands in the report's `violations` array with exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOutcome {
  Json report;
  int exit_code = 0;  // 0 consistent, 1 violation found
};

// Reads a JSON config (// comments allowed).  I/O or parse problems are
// configuration errors.
Json load_config_file(const std::string& path);

/**
 * Dispatches one batch command ("verify-finite", "descend", "gallery",
 * "audit", "remetrize") against its config object.  Config keys are
 * allowlisted per command and sampled commands require a "seed" key.
 * The report payload is deterministic for a fixed (command, config) pair
 * except for the "wall_time_ms" field.
 */
RunOutcome run_command(const std::string& command, const Json& config);

}  // namespace orbitkit
