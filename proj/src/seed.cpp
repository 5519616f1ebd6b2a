#include "nswiener/seed.hpp"

#include <cstdlib>
#include <string>

namespace nswiener {

std::uint64_t power_iteration_seed() {
  static const std::uint64_t seed = [] {
    if (const char* env = std::getenv("NSWIENER_SEED")) {
      try {
        return static_cast<std::uint64_t>(std::stoull(std::string(env)));
      } catch (...) {
        // fall through to the default on unparsable values
      }
    }
    return std::uint64_t{0x5EEDF00Dull};
  }();
  return seed;
}

}  // namespace nswiener
