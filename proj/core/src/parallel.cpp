#include "cavity/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "cavity/errors.hpp"

namespace cavity {

std::size_t thread_count() {
  if (const char* env = std::getenv("CAVITY_THREADS")) {
    const std::string_view text(env);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
      throw ConfigError("CAVITY_THREADS must be a positive integer, got '" +
                        std::string(text) + "'");
    }
    return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace cavity
