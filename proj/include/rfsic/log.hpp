#pragma once

#include <functional>
#include <string>

namespace rfsic {

using WarningHandler = std::function<void(const std::string&)>;

// Installs a process-wide sink for warnings; returns the previous one.
// The default handler prints "warning: <msg>" to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

}  // namespace rfsic
