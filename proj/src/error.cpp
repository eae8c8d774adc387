#include "fraclap/error.hpp"

namespace fraclap {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::OrderOutOfRange: return "OrderOutOfRange";
    case Errc::MeshTooCoarse: return "MeshTooCoarse";
    case Errc::BadParams: return "BadParams";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::Unbounded: return "Unbounded";
    case Errc::OutsideDomain: return "OutsideDomain";
    case Errc::QuadratureBreakdown: return "QuadratureBreakdown";
    case Errc::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::FactorizationFailure: return "FactorizationFailure";
    case Errc::DeflationLoss: return "DeflationLoss";
    case Errc::SolveFailure: return "SolveFailure";
    case Errc::GeometryFailure: return "GeometryFailure";
    case Errc::BadExponents: return "BadExponents";
    case Errc::MaxIterExceeded: return "MaxIterExceeded";
    case Errc::PathCollapse: return "PathCollapse";
    case Errc::BoundaryMinimizer: return "BoundaryMinimizer";
    case Errc::SingularJacobian: return "SingularJacobian";
    case Errc::Diverged: return "Diverged";
    case Errc::InsufficientSolutions: return "InsufficientSolutions";
    case Errc::NotCritical: return "NotCritical";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::DimTooLarge: return "DimTooLarge";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::BadValue: return "BadValue";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) noexcept {
  switch (code) {
    case Errc::OrderOutOfRange:
    case Errc::MeshTooCoarse:
    case Errc::BadParams:
    case Errc::GridTooSmall:
    case Errc::OutsideDomain:
    case Errc::BadExponents:
    case Errc::VersionMismatch:
    case Errc::ChecksumMismatch:
    case Errc::DimTooLarge:
    case Errc::UnknownKey:
    case Errc::BadValue:
    case Errc::Io:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace fraclap
