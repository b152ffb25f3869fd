#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exospin {

/// Base of every model or numeric failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (bad index, non-positive mass, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference probe found a kink in phi or theta.
class NonSmoothPoint : public Error {
 public:
  using Error::Error;
};

/// A bilinear that must be real came out with a significant imaginary part.
class NonRealResult : public Error {
 public:
  using Error::Error;
};

/// Heaviside selection requested exactly on the interface.
class IndeterminateAtInterface : public Error {
 public:
  using Error::Error;
};

/// A deformation value left (0, 1].
class DeformationOutOfRange : public Error {
 public:
  DeformationOutOfRange(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Sigma-model field left the hemisphere chart |Phi|^2 < 1 - eps.
class ChartViolation : public Error {
 public:
  ChartViolation(const std::string& what, long step) : Error(what), step_(step) {}
  /// Evolution step at which the violation happened, -1 outside evolution.
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Cochain input that fails the cocycle condition.
class NotACocycle : public Error {
 public:
  using Error::Error;
};

}  // namespace exospin
