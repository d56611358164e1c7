#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "yieldnet/io.hpp"

namespace yieldnet::cli {

/// Runs one CLI invocation (args exclude the program name). JSON results and
/// error documents go to `out`; usage text goes to `err`. Returns the exit
/// code: 0 success, 1 invalid input, 2 size limit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Git-style blob hash: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_sha1(const std::string& content);

/// Comma-separated numbers.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace yieldnet::cli
