#ifndef JSPEC_TOOLS_CLI_HPP
#define JSPEC_TOOLS_CLI_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace jspec::cli {

enum ExitCode { kOk = 0, kInvalidInput = 1, kUndecided = 2, kVerificationFailed = 3 };

struct RunConfig {
  std::string command;
  std::string model;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  nlohmann::ordered_json options = nlohmann::ordered_json::object();
  std::string out;
  std::string format = "json";
};

/// Thrown for malformed configs and inadmissible parameters.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies "key=value" overrides. "model" and "format" set those fields,
/// known option names go to options and everything else to params. Values
/// are parsed as JSON when possible and kept as strings otherwise.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Reads {"model": ..., "params": {...}, "options": {...}} from a file.
RunConfig load_config(const std::string& path);

struct CommandResult {
  int exit_code = kOk;
  /// Output document; CSV is rendered from `table`.
  nlohmann::ordered_json document;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> table;
};

CommandResult run_command(const RunConfig& cfg);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17-significant-digit decimal string.
std::string fixed17(double v);

/// Shortest decimal string that reads back to v.
std::string shortest(double v);

}  // namespace jspec::cli

#endif
