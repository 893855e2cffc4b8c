#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace proxyzoo::log {

using Sink = std::function<void(std::string_view level, std::string_view message)>;

/// Replace the process-wide sink. Passing an empty function restores stderr output.
void set_sink(Sink sink);

void warn(std::string_view message);
void info(std::string_view message);

}  // namespace proxyzoo::log
