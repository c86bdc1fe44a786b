// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mapkit::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitMismatch = 1,  // compare found a difference
    kExitInput = 2,     // bad arguments or input files
    kExitDeadlock = 3,
};

/// Runs one command line (without the program name). Warnings and errors go
/// to `err`, results to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mapkit::cli
