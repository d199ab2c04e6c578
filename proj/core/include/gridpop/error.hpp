#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridpop {

enum class ErrorKind {
  parse,         // malformed input text
  geometry,      // invalid polygon or raster geometry
  crs_mismatch,  // inputs disagree on coordinate reference system
  config,        // invalid configuration value
  input,         // missing or unreadable input
  domain,        // operation precondition violated
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gridpop
