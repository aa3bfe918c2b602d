#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tyfix {

struct ProcessResult {
  int exit_code = -1;    // valid when the process exited normally
  int term_signal = 0;   // nonzero when killed by a signal
  bool timed_out = false;
  std::string out;
  std::string err;

  bool exited_ok() const { return !timed_out && term_signal == 0 && exit_code == 0; }
};

/// Runs argv[0] with the given arguments, feeding `input` on stdin and
/// collecting stdout/stderr. The whole process group is killed on timeout.
/// Throws tyfix::Error only if the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input,
                          std::chrono::milliseconds timeout);

/// Runs a shell command line with extra positional arguments appended,
/// i.e. `/bin/sh -c '<command> "$@"' sh args...`.
ProcessResult run_shell(const std::string& command, const std::vector<std::string>& args,
                        std::string_view input, std::chrono::milliseconds timeout);

/// Private temporary directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view prefix = "tyfix");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

}  // namespace tyfix
