#pragma once

// Paths baked in by the build, and a shell-out helper for CLI tests.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace splv {

inline std::filesystem::path corpus(const std::string& rel) { return std::filesystem::path(SPLV_CORPUS_DIR) / rel; }
inline std::filesystem::path golden(const std::string& rel) { return std::filesystem::path(SPLV_GOLDEN_DIR) / rel; }

/// Runs the CLI with `args` (already shell-quoted), stdout/stderr to `log`.
/// `env` is prepended as shell assignments. Returns the exit status, or -1 if the process did not exit normally.
inline int run_cli(const std::string& args, const std::filesystem::path& log = "/dev/null",
                   const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + "'" + SPLV_CLI_PATH + "' " + args + " >'" + log.string() + "' 2>&1";
  int st = std::system(cmd.c_str());
  if (st == -1 || !WIFEXITED(st)) return -1;
  return WEXITSTATUS(st);
}

}  // namespace splv
