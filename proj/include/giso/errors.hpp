#ifndef GISO_ERRORS_HPP
#define GISO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace giso {

// Malformed input or a violated precondition.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A configured node, depth or enumeration cap was hit. The computation was
// abandoned; no partial answer is returned.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A self-check failed. Indicates a bug, never a property of the input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace giso

#endif
