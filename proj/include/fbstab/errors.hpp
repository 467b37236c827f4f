#pragma once

#include <stdexcept>
#include <string>

namespace fbstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad order, empty grid, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A filter violates one of the low-pass / high-pass axioms.
///
/// Carries the name of the violated axiom and the measured value so callers
/// (the CLI in particular) can report exactly what failed.
class AxiomViolation : public Error {
 public:
  AxiomViolation(std::string axiom, double measured, double tolerance);

  const std::string& axiom() const noexcept { return axiom_; }
  double measured() const noexcept { return measured_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  std::string axiom_;
  double measured_;
  double tolerance_;
};

}  // namespace fbstab
