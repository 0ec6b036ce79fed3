#pragma once

#include <stdexcept>
#include <string>

namespace hml {

/// Enumeration or compute budget exceeded. CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}
