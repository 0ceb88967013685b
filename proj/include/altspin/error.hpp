#pragma once

#include <stdexcept>
#include <string>

namespace altspin {

enum class ErrorKind {
  Parameter,
  Capability,
  Convergence,
  Dimension,
  Io,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the Lanczos driver; carries the smallest residual it reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(ErrorKind::Convergence, what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

[[noreturn]] inline void throw_parameter(const std::string& msg) { throw Error(ErrorKind::Parameter, msg); }
[[noreturn]] inline void throw_capability(const std::string& msg) { throw Error(ErrorKind::Capability, msg); }
[[noreturn]] inline void throw_dimension(const std::string& msg) { throw Error(ErrorKind::Dimension, msg); }
[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorKind::Config, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorKind::Io, msg); }

}  // namespace altspin
