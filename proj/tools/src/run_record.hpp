#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gridpop::cli {

/// Provenance written as `<command>.run.json` beside a command's outputs.
struct RunRecord {
  std::string command;
  std::string version;
  /// Canonical JSON of the effective configuration, or empty.
  std::string config_json;
  std::string seed_source;  // default | config | env | flag
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::map<std::string, long long> counts;
  std::map<std::string, double> stage_seconds;
  std::vector<std::string> diagnostics;

  void add_input(const std::filesystem::path& path);
  std::string to_json() const;
};

class StageTimer {
 public:
  StageTimer(RunRecord& record, std::string stage)
      : record_(record), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    record_.stage_seconds[stage_] += d.count();
  }

 private:
  RunRecord& record_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

const char* tool_version();

}  // namespace gridpop::cli
