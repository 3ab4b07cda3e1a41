#pragma once

#include <stdexcept>
#include <string>

namespace quench {

// Parameter outside its documented domain (CLI exit code 2).
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Requested accuracy not reachable at the given cutoff (CLI exit code 3).
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// File read/write failure (CLI exit code 4).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace quench
