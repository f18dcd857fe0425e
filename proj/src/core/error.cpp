#include "kd/core/error.hpp"

namespace kd {

const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::dimension: return "dimension";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::io: return "io";
    case ErrorCategory::stage: return "stage";
    case ErrorCategory::registry: return "registry";
  }
  return "unknown";
}

}  // namespace kd
