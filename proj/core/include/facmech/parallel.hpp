#pragma once

#include <cstdlib>
#include <string>
#include <thread>

namespace facmech {

// Number of worker threads to use for parallel sections. Controlled by the
// FM_THREADS environment variable; defaults to the hardware concurrency.
inline unsigned thread_budget() {
  if (const char* raw = std::getenv("FM_THREADS")) {
    try {
      int parsed = std::stoi(raw);
      if (parsed >= 1) return static_cast<unsigned>(parsed);
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

}  // namespace facmech
