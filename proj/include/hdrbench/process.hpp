#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hdrbench {

struct ProcessOptions {
  double timeout_s = 0.0;  // 0: wait forever
  // Where the child's stdout/stderr go. Unset streams are discarded.
  std::optional<std::filesystem::path> stdout_path;
  std::optional<std::filesystem::path> stderr_path;
};

struct ProcessResult {
  int exit_code = -1;   // valid when exited normally
  int term_signal = 0;  // nonzero when killed by a signal
  bool timed_out = false;
  double wall_time_s = 0.0;

  bool ok() const { return !timed_out && term_signal == 0 && exit_code == 0; }
};

// Resolves a bare name through PATH, or checks an explicit path is executable.
std::optional<std::filesystem::path> resolve_executable(const std::string& name);

// Spawns argv[0] (resolved through PATH) with stdin on /dev/null. Throws
// Error(EncoderNotFound) when the executable cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options = {});

// Last `max_bytes` bytes of a text file, or "" if unreadable.
std::string file_tail(const std::filesystem::path& path, std::size_t max_bytes = 2048);

// Runs argv and returns its stdout; nullopt on spawn failure or nonzero exit.
std::optional<std::string> capture_stdout(const std::vector<std::string>& argv, double timeout_s = 30.0);

// Whitespace split with single and double quote grouping.
std::vector<std::string> split_command(const std::string& command);

}  // namespace hdrbench
