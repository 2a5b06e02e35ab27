#pragma once

#include <stdexcept>
#include <string>

namespace capforge {

/// Broad failure classes. The CLI maps each one to its own exit code.
enum class ErrorKind {
  validation,   ///< malformed or out-of-contract input
  convergence,  ///< a numerical procedure failed to converge or resolve
  obstruction,  ///< the data cannot come from any cap development
  io,           ///< file or format problems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(ErrorKind::convergence, what) {}
};

class ObstructionError : public Error {
 public:
  explicit ObstructionError(const std::string& what) : Error(ErrorKind::obstruction, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace capforge
