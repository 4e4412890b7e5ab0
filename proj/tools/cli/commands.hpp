// The sasaki-link subcommands as plain functions, so tests can run them in-process.

#ifndef SASAKI_CLI_COMMANDS_HPP
#define SASAKI_CLI_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "json_io.hpp"

namespace sasaki::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,  // validation or verification failure, infeasible system
  kInputError = 2,
  kNumericFailure = 3,  // non-convergence, sampler failure
};

struct CommandResult {
  int exit_code = kSuccess;
  std::string output;  // JSON document for standard output
  std::string error;   // one-line message for standard error, empty on success
};

enum class ReebMode { closed, minimize };

struct PipelineOptions {
  ReebMode reeb = ReebMode::minimize;
  std::size_t samples = 500;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t workers = 1;  // never changes the report
  std::optional<std::string> export_samples;
};

CommandResult cmd_validate(const std::string& path);
CommandResult cmd_validate(const ConeSpec& cone);
CommandResult cmd_ypq(long long p, long long q);
CommandResult cmd_pipeline(const std::string& path, const PipelineOptions& options);
CommandResult cmd_pipeline(const ConeSpec& cone, const PipelineOptions& options);

/// Worker count from SASAKI_WORKERS, or 1.
std::size_t workers_from_env();

std::string tool_version();

}  // namespace sasaki::cli

#endif  // SASAKI_CLI_COMMANDS_HPP
