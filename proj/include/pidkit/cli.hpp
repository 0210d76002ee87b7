#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pidkit::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kPropertyFails = 1;
inline constexpr int kUsageError = 2;

/// Runs the pidkit command line. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pidkit::cli
