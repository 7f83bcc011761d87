#include "treehedge/errors.hpp"

namespace treehedge {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::OrphanNode: return "OrphanNode";
        case ErrorCode::LeafBeforeHorizon: return "LeafBeforeHorizon";
        case ErrorCode::ProbabilityNotNormalized: return "ProbabilityNotNormalized";
        case ErrorCode::NonPositiveProbability: return "NonPositiveProbability";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::NegativeCost: return "NegativeCost";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::UnboundedBelow: return "UnboundedBelow";
        case ErrorCode::CycleArbitrage: return "CycleArbitrage";
        case ErrorCode::NotMarketCone: return "NotMarketCone";
        case ErrorCode::IterationLimit: return "IterationLimit";
        case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
        case ErrorCode::InfeasibleClaim: return "InfeasibleClaim";
        case ErrorCode::NotTwoAsset: return "NotTwoAsset";
        case ErrorCode::ZeroFirstComponent: return "ZeroFirstComponent";
        case ErrorCode::OutsideDualCone: return "OutsideDualCone";
        case ErrorCode::NotInQ: return "NotInQ";
        case ErrorCode::NotApproximateMartingaleMeasure:
            return "NotApproximateMartingaleMeasure";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::MissingNode: return "MissingNode";
        case ErrorCode::ValidationError: return "ValidationError";
    }
    return "UnknownError";
}

bool is_validation_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::IterationLimit:
        case ErrorCode::NumericalBreakdown:
        case ErrorCode::InfeasibleClaim:
        case ErrorCode::UnboundedBelow:
        case ErrorCode::EnumerationCapExceeded:
            return false;
        default:
            return true;
    }
}

}  // namespace treehedge
