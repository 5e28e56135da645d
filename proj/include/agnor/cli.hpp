#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agnor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitDegenerate = 2;

/// Runs `agnor-bench` with the arguments that follow the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace agnor::cli
