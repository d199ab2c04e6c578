#include "gridpop/error.hpp"

namespace gridpop {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::crs_mismatch: return "crs_mismatch";
    case ErrorKind::config: return "config";
    case ErrorKind::input: return "input";
    case ErrorKind::domain: return "domain";
  }
  return "unknown";
}

}  // namespace gridpop
