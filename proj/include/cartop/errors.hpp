#pragma once

#include <stdexcept>
#include <string>

namespace cartop {

/// Operand shapes that cannot be combined (unequal dims, bad factorization).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric invariant of an input or result does not hold.
///
/// `invariant()` names the violated property (e.g. "hermiticity") and
/// `measured()` carries the offending norm or value, so the CLI can report
/// both without parsing the message.
class InvariantError : public std::domain_error {
 public:
  InvariantError(std::string invariant, double measured, const std::string& what)
      : std::domain_error(what), invariant_(std::move(invariant)), measured_(measured) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double measured() const noexcept { return measured_; }

 private:
  std::string invariant_;
  double measured_;
};

/// The operator is not normal, so no direct joint measurement of its
/// Cartesian parts exists.
class NonNormalError : public std::domain_error {
 public:
  NonNormalError(double commutator_norm, const std::string& what)
      : std::domain_error(what), commutator_norm_(commutator_norm) {}

  double commutator_norm() const noexcept { return commutator_norm_; }

 private:
  double commutator_norm_;
};

/// Two routes that must agree mathematically produced different verdicts.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cartop
