#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlelim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed polynomial or model text. `position` is a 0-based byte offset.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownVariable : public Error {
 public:
  explicit UnknownVariable(const std::string& name)
      : Error("unknown variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DivisionFailure : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class NonPrincipal : public Error {
 public:
  using Error::Error;
};

class ZeroIdeal : public Error {
 public:
  using Error::Error;
};

class NonHomogeneousInvariant : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class StructureViolation : public Error {
 public:
  using Error::Error;
};

class AssumptionA1Violated : public Error {
 public:
  using Error::Error;
};

class NotGeneralZeroDimensional : public Error {
 public:
  using Error::Error;
};

// Failures caused by an unlucky random sample. Callers resample.
class Degeneracy : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Degeneracy {
 public:
  using Degeneracy::Degeneracy;
};

class DegreeDrop : public Degeneracy {
 public:
  using Degeneracy::Degeneracy;
};

class UnexpectedMultiplicity : public Degeneracy {
 public:
  using Degeneracy::Degeneracy;
};

class InconsistentDegrees : public Degeneracy {
 public:
  using Degeneracy::Degeneracy;
};

class InconsistentStructure : public Degeneracy {
 public:
  using Degeneracy::Degeneracy;
};

class DivideByZero : public Degeneracy {
 public:
  using Degeneracy::Degeneracy;
};

class VerificationFailed : public Degeneracy {
 public:
  using Degeneracy::Degeneracy;
};

}  // namespace mlelim
