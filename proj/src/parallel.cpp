#include "kboot/parallel.hpp"

#include <cstdlib>
#include <string>

namespace kboot {

int worker_count() {
  if (const char* env = std::getenv("KBOOT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
      // fall through to hardware default on malformed values
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

}  // namespace kboot
