#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ascifit::cli {

enum ExitStatus : int {
  kOk = 0,
  kInputError = 1,
  kNumericalFailure = 2,
};

/// Entry point of the `ascifit` tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Responses from a text file: one number per line, or one CSV column selected
/// by header name or 0-based index. Blank lines and '#' comments are skipped.
std::vector<double> read_responses(const std::string& path, const std::string& column = "");

}  // namespace ascifit::cli
