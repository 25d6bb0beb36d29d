#pragma once

#include <stdexcept>
#include <iomanip>
#include <sstream>
#include <string>

namespace tlstat {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid distribution or weight parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a function (u outside [0,1], trim point outside I, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Trimming proportions violate 0 < alpha < 1 - beta < 1 or 0 <= k < n - m <= n.
class TrimError : public Error {
 public:
  using Error::Error;
};

// Vector lengths disagree with the trimming specification.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (e.g. unsorted sample).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration cannot be run (degenerate sigma, missing moments, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved_tolerance)
      : Error(what + " (achieved tolerance " + format_tolerance(achieved_tolerance) + ")"),
        achieved_tolerance_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  static std::string format_tolerance(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
  }

  double achieved_tolerance_;
};

}  // namespace tlstat
