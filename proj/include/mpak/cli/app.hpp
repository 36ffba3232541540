#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpak/cli/specs.hpp"

namespace mpak::cli {

inline constexpr const char* kSchema = "mpak/1";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kExpectationFailed = 1, kUsage = 2, kNumerical = 3 };

/// One parsed and computed invocation. Nothing is written to disk.
struct Execution {
  int exit_code = kOk;
  std::string command;
  std::string message;   // help text or the error for exit codes 2 and 3
  Json payload;          // result document (schema, command, inputs, result)
  std::string json;      // dump(payload)
  std::string csv;       // empty when the command produced no grid output
  std::string json_path;  // "-" for stdout
  std::string csv_path;
  std::string manifest_path;
  Json seeds = Json::object();
  Json tolerances = Json::object();
};

/// Arguments exclude the program name.
Execution execute(const std::vector<std::string>& args);

/// Manifest document for an execution (wall-clock seconds and the output digests).
Json make_manifest(const std::vector<std::string>& args, const Execution& ex, double wall_clock);

/// Re-executes the argv recorded in a manifest and compares output digests.
Execution replay(const std::string& manifest_path);

/// The tool: executes, writes outputs atomically plus the manifest, returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpak::cli
