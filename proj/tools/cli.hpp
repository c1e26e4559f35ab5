// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aaaeigs::cli
{

enum ExitCode : int
{
  Ok = 0,
  Usage = 1,
  Numerical = 2,
  VerifyFailed = 3,
};

// Runs `aaaeigs <args...>` (args exclude the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace aaaeigs::cli
