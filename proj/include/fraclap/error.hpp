#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fraclap {

enum class Errc {
  OrderOutOfRange,
  MeshTooCoarse,
  BadParams,
  GridTooSmall,
  Unbounded,
  OutsideDomain,
  QuadratureBreakdown,
  NonFiniteIntegrand,
  NoConvergence,
  FactorizationFailure,
  DeflationLoss,
  SolveFailure,
  GeometryFailure,
  BadExponents,
  MaxIterExceeded,
  PathCollapse,
  BoundaryMinimizer,
  SingularJacobian,
  Diverged,
  InsufficientSolutions,
  NotCritical,
  VersionMismatch,
  ChecksumMismatch,
  DimTooLarge,
  UnknownKey,
  BadValue,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

/// True for errors caused by bad input rather than by a solver giving up.
bool is_validation_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fraclap
