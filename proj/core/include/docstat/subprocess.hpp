#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace docstat {

struct ProcessResult {
  // Exit status; 128 + signal number for signal deaths; absent on timeout.
  std::optional<int> exit_code;
  std::string stderr_bytes;
  double duration_s = 0.0;
  bool timed_out = false;
  bool stderr_truncated = false;
};

// Searches PATH unless `command` contains a '/'. Returns the executable path
// or nullopt.
std::optional<std::filesystem::path> resolve_executable(std::string_view command);

// Spawns `command args...` in its own process group with stdin and stdout on
// /dev/null, capturing stderr. When `timeout` elapses the whole group gets
// SIGKILL. Stderr beyond `max_stderr_bytes` is read and discarded.
ProcessResult run_process(const std::filesystem::path& executable,
                          const std::vector<std::string>& args,
                          std::chrono::duration<double> timeout,
                          std::size_t max_stderr_bytes = 16u << 20);

}  // namespace docstat
