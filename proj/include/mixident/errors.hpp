#pragma once

#include <stdexcept>
#include <string>

namespace mixident {

/// Violation of a domain invariant (bad measure, sign-split failure, shape
/// mismatch, ...). The CLI maps these to exit code 65.
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file or unparsable value. The CLI maps these to exit 64.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mixident
