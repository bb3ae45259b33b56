#pragma once

#include <stdexcept>
#include <string>

namespace chanalloc {

// Bad argument or configuration value.
class InvalidParameter : public std::invalid_argument {
 public:
  explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// Exhaustive search would exceed its configured cap.
class TooLarge : public std::length_error {
 public:
  explicit TooLarge(const std::string& what) : std::length_error(what) {}
};

// A valid configuration that the selected engine cannot run.
class UnsupportedConfiguration : public std::logic_error {
 public:
  explicit UnsupportedConfiguration(const std::string& what) : std::logic_error(what) {}
};

// Operation not allowed in the current protocol state.
class InvalidState : public std::logic_error {
 public:
  explicit InvalidState(const std::string& what) : std::logic_error(what) {}
};

}  // namespace chanalloc
