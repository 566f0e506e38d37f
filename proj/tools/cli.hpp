#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bwmin::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInputError = 2 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bwmin::cli
