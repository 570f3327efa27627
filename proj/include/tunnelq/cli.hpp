#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tunnelq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericalError = 3;

/// Runs the command line tool; args exclude the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace tunnelq::cli
