// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The attrib Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace attrib::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBackend = 3;

// Runs the command line `args` (without the program name). Normal output
// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace attrib::cli
