#include "mixann/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace mixann::log {

namespace {
std::atomic<Level> g_level{Level::Warning};
std::mutex g_mutex;
}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void warning(std::string_view message) {
  if (g_level.load() < Level::Warning) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "warning: " << message << '\n';
}

void info(std::string_view message) {
  if (g_level.load() < Level::Info) return;
  std::lock_guard lock(g_mutex);
  std::cerr << message << '\n';
}

}  // namespace mixann::log
