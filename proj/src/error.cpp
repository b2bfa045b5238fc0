#include "ttg/error.hpp"

namespace ttg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::DegreeOutOfWindow: return "DegreeOutOfWindow";
    case ErrorKind::NoTensorStructure: return "NoTensorStructure";
    case ErrorKind::NotAnIdeal: return "NotAnIdeal";
    case ErrorKind::NotInLattice: return "NotInLattice";
    case ErrorKind::TooManyOrbits: return "TooManyOrbits";
    case ErrorKind::TopologyAxiomFailure: return "TopologyAxiomFailure";
    case ErrorKind::NotStabilized: return "NotStabilized";
    case ErrorKind::RankBoundExceeded: return "RankBoundExceeded";
    case ErrorKind::NotCommutative: return "NotCommutative";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NotAChainMap: return "NotAChainMap";
    case ErrorKind::UnsupportedRing: return "UnsupportedRing";
    case ErrorKind::NotFunctorial: return "NotFunctorial";
    case ErrorKind::InvalidEquivalence: return "InvalidEquivalence";
    case ErrorKind::Arithmetic: return "ArithmeticError";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Error";
}

}  // namespace ttg
