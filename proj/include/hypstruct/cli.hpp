#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hyp::cli {

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kInputError = 2;
inline constexpr int kNoConvergence = 3;
inline constexpr int kBadSlope = 4;

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyp::cli
