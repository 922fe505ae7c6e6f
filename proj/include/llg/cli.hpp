// Command-line front end: gaps | discs | freepath | mc | compare | replay.
#pragma once

#include <string>
#include <vector>

namespace llg {

/// Exit codes: 0 success, 1 runtime failure, 2 invalid configuration,
/// 3 compare verdict failed.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace llg
