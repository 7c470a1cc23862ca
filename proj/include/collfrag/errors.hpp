#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace collfrag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-positive size, out-of-order interval bounds and similar argument errors.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A closed-form integral of the daughter law diverges for the requested
// exponent (e.g. the number of fragments of a non-integrable law).
class DivergentMomentError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& what)
      : Error(format(key, line, what)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, std::size_t line,
                            const std::string& what) {
    std::string msg;
    if (line > 0) msg += "line " + std::to_string(line) + ": ";
    if (!key.empty()) msg += "'" + key + "': ";
    return msg + what;
  }

  std::string key_;
  std::size_t line_;
};

// Step size collapsed below the floor; typically a blow-up or shattering
// front the explicit integrator cannot follow.
class StiffnessError : public Error {
 public:
  StiffnessError(double time, const std::string& what)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ContractionError : public Error {
 public:
  ContractionError(double residual, const std::string& what)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace collfrag
