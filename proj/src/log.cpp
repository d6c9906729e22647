#include "rfsic/log.hpp"

#include <iostream>
#include <mutex>

namespace rfsic {
namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler() {
    static WarningHandler h = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
    std::lock_guard lock(handler_mutex());
    auto previous = std::move(handler());
    handler() = std::move(h);
    return previous;
}

void warn(const std::string& message) {
    std::lock_guard lock(handler_mutex());
    if (handler())
        handler()(message);
}

}  // namespace rfsic
