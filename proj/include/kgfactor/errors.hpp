#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgfactor {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, packet, potential or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Two fields (or a field and a potential table) do not share a layout.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A time/space march produced non-finite values.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step, const std::string& what)
      : Error("diverged at step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Field energy sits in frequency bins where Ebar is not real.
class EvanescentContentError : public Error {
 public:
  using Error::Error;
};

/// A validity ratio whose denominators all vanish.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

/// Raised by the harness when --enforce-validity is set and a ratio breaches its threshold.
class ValidityAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace kgfactor
