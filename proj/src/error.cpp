#include "altspin/error.hpp"

namespace altspin {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Capability: return "capability";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace altspin
