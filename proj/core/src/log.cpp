// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "mapkit/log.hpp"

#include <iostream>
#include <mutex>

namespace mapkit {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& sink() {
    static WarningHandler handler = [](std::string_view msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return handler;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(sink_mutex());
    WarningHandler previous = std::move(sink());
    sink() = std::move(handler);
    return previous;
}

void warn(std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (sink()) {
        sink()(message);
    }
}

}  // namespace mapkit
