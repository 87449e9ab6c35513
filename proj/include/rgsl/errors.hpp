#pragma once

#include <stdexcept>
#include <string>

namespace rgsl {

// Bad inputs: shape mismatches, violated invariants, out-of-range settings.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values produced during computation (divergence, overflow).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Missing or unreadable files, unparseable file contents.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rgsl
