#pragma once

#include <string_view>

namespace mixann::log {

enum class Level { Quiet = 0, Warning = 1, Info = 2 };

void set_level(Level level);
Level level();

void warning(std::string_view message);
void info(std::string_view message);

}  // namespace mixann::log
