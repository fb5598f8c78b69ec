#include "gtda/types.hpp"

#include <cstdio>

namespace gtda {

void warn(const std::string& message) {
  std::fprintf(stderr, "[gtda] warning: %s\n", message.c_str());
}

}  // namespace gtda
