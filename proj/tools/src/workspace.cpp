#include "workspace.hpp"

#include <openssl/evp.h>
#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <array>
#include <fstream>
#include <memory>
#include <thread>

#include "gridpop/error.hpp"
#include "gridpop/geodata.hpp"

namespace gridpop::cli {

namespace fs = std::filesystem;

OutputTransaction::~OutputTransaction() {
  if (committed_) return;
  std::error_code ec;
  for (const fs::path& p : staged_) fs::remove(p, ec);
}

fs::path OutputTransaction::stage(const fs::path& final_path) {
  if (final_path.has_parent_path()) fs::create_directories(final_path.parent_path());
  fs::path partial = final_path;
  partial += ".partial";
  staged_.push_back(partial);
  return partial;
}

void OutputTransaction::write_text(const fs::path& final_path, std::string_view text) {
  write_text_file(stage(final_path), text);
}

void OutputTransaction::commit() {
  for (const fs::path& p : staged_) {
    fs::path final_path = p;
    final_path.replace_extension();
    fs::rename(p, final_path);
  }
  committed_ = true;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

void parallel_for(int jobs, std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  tbb::task_arena arena(jobs);
  arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const tbb::blocked_range<std::size_t>& r) {
      for (std::size_t i = r.begin(); i != r.end(); ++i) fn(i);
    });
  });
}

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace gridpop::cli
