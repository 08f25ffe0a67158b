#include "morgreed/parallel.hpp"

#include <cstdlib>
#include <string>

namespace morgreed {

std::size_t threads_from_env() {
  const char* value = std::getenv("MORGREED_THREADS");
  if (value == nullptr) return 1;
  try {
    const long parsed = std::stol(value);
    return parsed > 0 ? static_cast<std::size_t>(parsed) : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace morgreed
