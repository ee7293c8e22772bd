#pragma once

#include <stdexcept>
#include <string>

namespace sfkit {

// Every failure raised by the library derives from Error. The CLI maps the
// category onto its exit code.
enum class ErrorKind { structural, domain, convergence, precision };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Shape or dimension mismatch between operands.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error(ErrorKind::structural, what) {}
};

/// Input outside the operation's domain (non-Hermitian, non-unitary, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// Iterative refinement or quadrature exhausted its budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(ErrorKind::convergence, what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// A rank or dimension decision fell into a numerical dead zone.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, double value)
      : Error(ErrorKind::precision, what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::domain: return "domain";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::precision: return "precision";
  }
  return "unknown";
}

}  // namespace sfkit
