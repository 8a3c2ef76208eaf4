#pragma once

#include <stdexcept>
#include <string>

namespace kahler {

/// Invalid arguments: out-of-range indices, degrees, dimensions.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computed object violates an identity it is required to satisfy.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested problem size exceeds the memory/time guards.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kahler
