#pragma once

#include <string>
#include <string_view>

namespace gridpop::cli {

/// Entry point of the `gridpop` tool. Returns the process exit code:
/// 0 on success, 1 for pipeline errors, 2 for usage errors. Errors are
/// reported on stderr as a single `gridpop error kind=... msg="..."` line.
int run(int argc, char** argv);

/// The single-line error report.
std::string error_line(std::string_view kind, std::string_view message);

}  // namespace gridpop::cli
