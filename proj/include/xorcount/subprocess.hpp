#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>

namespace xorcount {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool signaled = false;
  std::string out;
  std::string err;
  double wall_time_s = 0.0;
};

/// Runs `command` through /bin/sh in its own process group. When `budget` is
/// positive and elapses, the whole group is killed with SIGKILL.
ProcessResult run_shell(const std::string& command, std::chrono::duration<double> budget);

/// Unique file under the system temp directory, removed on destruction.
class TempFile {
 public:
  explicit TempFile(std::string_view suffix = ".cnf");
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }
  void write(std::string_view contents) const;

 private:
  std::filesystem::path path_;
};

}  // namespace xorcount
