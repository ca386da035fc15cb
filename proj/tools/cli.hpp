#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace malseq::cli {

/// args excludes the program name. Returns the process exit status:
/// 0 on success, 1 when a pipeline stage fails, 2 for usage errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat key=value file; '#' starts a comment. Keys are long flag names.
std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text);

}  // namespace malseq::cli
