#pragma once

// Shared fixtures: scratch directories, seeded random shapes and a runner
// for the gridpop executable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "gridpop/geodata.hpp"
#include "gridpop/geometry.hpp"
#include "gridpop/random.hpp"

namespace gridpop::testing {

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("gridpop-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Star-shaped, hence simple, polygon with `n` vertices around `center`.
inline Ring random_star_ring(Rng& rng, int n, Point center, double r_min, double r_max) {
  // One angle per sector keeps every gap below pi, so the ring stays simple.
  std::vector<double> angles(n);
  for (int i = 0; i < n; ++i) angles[i] = 2.0 * std::numbers::pi * (i + 0.8 * rng.uniform()) / n;
  Ring ring;
  for (double a : angles) {
    const double r = rng.uniform(r_min, r_max);
    ring.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
  }
  return ring;
}

inline Footprint rect_footprint(std::string id, Box b, ClassTag tag = ClassTag::residential) {
  return {std::move(id), make_polygon(box_ring(b)), tag, tag == ClassTag::residential ? "house" : "school"};
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CommandResult {
  int exit_code = -1;
  std::string err;
  std::string out;
};

/// Runs the gridpop binary with `args` (already shell-quoted as needed).
inline CommandResult run_gridpop(const std::string& args, const std::filesystem::path& scratch,
                                 const std::string& env = "") {
  const auto out = scratch / "cmd.stdout";
  const auto err = scratch / "cmd.stderr";
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string("'") + GRIDPOP_EXE + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace gridpop::testing
