#pragma once

#include <stdexcept>
#include <string>

namespace pypal {

/// Base for configuration, content and I/O failures. Parse and runtime
/// errors in student code are returned as data, never thrown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pypal
