#pragma once

// Output staging, input digests and the per-tile parallel map used by the
// command implementations.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gridpop::cli {

/// Collects outputs as `<path>.partial` files. commit() renames them into
/// place; a transaction destroyed without commit deletes them.
class OutputTransaction {
 public:
  OutputTransaction() = default;
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;
  ~OutputTransaction();

  /// Returns the staging path for `final_path`, creating parent directories.
  std::filesystem::path stage(const std::filesystem::path& final_path);
  void write_text(const std::filesystem::path& final_path, std::string_view text);
  void commit();

  std::size_t size() const { return staged_.size(); }

 private:
  std::vector<std::filesystem::path> staged_;
  bool committed_ = false;
};

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Runs fn(i) for i in [0, n) on at most `jobs` threads. Callers store
/// results by index, so output never depends on scheduling.
void parallel_for(int jobs, std::size_t n, const std::function<void(std::size_t)>& fn);

int default_jobs();

}  // namespace gridpop::cli
