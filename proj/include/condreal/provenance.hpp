#pragma once

#include <string>

namespace condreal {

// How a derived object was constructed, for cross-process serialization:
// re-running the (pure) construction on the serialized source rebinds the
// emitted native components.
struct Provenance {
  std::string direction;    // cond-to-tz | tz-to-cond | unif-to-tz | tz-to-unif
  std::string source_text;  // serialized source object
};

}  // namespace condreal
