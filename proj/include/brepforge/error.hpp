#pragma once

#include <stdexcept>
#include <string>

namespace brepforge {

enum class ErrorKind {
  InvalidFootprint,
  MustCleanFirst,
  Collision,
  Conflict,
  OffsetTooLarge,
  ProductionInfeasible,
  GrowthFailed,
  InconsistentPlan,
  UnreachableRoom,
  InvalidExtrusion,
  BooleanFailure,
  MergeConflict,
  AssemblyInconsistency,
  EmptyMesh,
  AlreadyDefect,
  Io,
  Parse,
  Join,
  Config,
  EmptyDataset,
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

}  // namespace brepforge
