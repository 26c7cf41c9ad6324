#include "brepforge/error.hpp"

namespace brepforge {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidFootprint: return "invalid-footprint";
    case ErrorKind::MustCleanFirst: return "must-clean-first";
    case ErrorKind::Collision: return "collision";
    case ErrorKind::Conflict: return "conflict";
    case ErrorKind::OffsetTooLarge: return "offset-too-large";
    case ErrorKind::ProductionInfeasible: return "production-infeasible";
    case ErrorKind::GrowthFailed: return "growth-failed";
    case ErrorKind::InconsistentPlan: return "inconsistent-plan";
    case ErrorKind::UnreachableRoom: return "unreachable-room";
    case ErrorKind::InvalidExtrusion: return "invalid-extrusion";
    case ErrorKind::BooleanFailure: return "boolean-failure";
    case ErrorKind::MergeConflict: return "merge-conflict";
    case ErrorKind::AssemblyInconsistency: return "assembly-inconsistency";
    case ErrorKind::EmptyMesh: return "empty-mesh";
    case ErrorKind::AlreadyDefect: return "already-defect";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Join: return "join";
    case ErrorKind::Config: return "config";
    case ErrorKind::EmptyDataset: return "empty-dataset";
  }
  return "unknown";
}

}  // namespace brepforge
