#pragma once

#include <stdexcept>
#include <string>

namespace cascade_lab {

/// Input that cannot be interpreted at all: unparsable documents, malformed
/// tensor keys, unknown schema versions. CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a domain constraint or precondition.
/// CLI maps this to exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cascade_lab
