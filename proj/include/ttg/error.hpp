#pragma once

#include <stdexcept>
#include <string>

namespace ttg {

enum class ErrorKind {
  Schema,
  DuplicateName,
  DegreeOutOfWindow,
  NoTensorStructure,
  NotAnIdeal,
  NotInLattice,
  TooManyOrbits,
  TopologyAxiomFailure,
  NotStabilized,
  RankBoundExceeded,
  NotCommutative,
  DimensionTooLarge,
  NotAChainMap,
  UnsupportedRing,
  NotFunctorial,
  InvalidEquivalence,
  Arithmetic,
  Unsupported,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ttg
