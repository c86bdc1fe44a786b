// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mapkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input: files, arguments, sizes.
class InputError : public Error {
public:
    using Error::Error;
};

class SimulationError : public Error {
public:
    using Error::Error;
};

class DeadlockError : public SimulationError {
public:
    DeadlockError(const std::string& what, std::vector<int> stuck_ranks)
        : SimulationError(what), stuck_ranks_(std::move(stuck_ranks)) {}

    const std::vector<int>& stuck_ranks() const noexcept { return stuck_ranks_; }

private:
    std::vector<int> stuck_ranks_;
};

}  // namespace mapkit
