#pragma once

#include <stdexcept>
#include <string>

namespace treehedge {

// Every failure the library reports deliberately. Codes group into two
// families: bad input data (rejected during validation) and solver-side
// conditions (limits, degeneracy, unbounded programs).
enum class ErrorCode {
    // tree
    OrphanNode,
    LeafBeforeHorizon,
    ProbabilityNotNormalized,
    NonPositiveProbability,
    UnknownNode,
    EnumerationCapExceeded,
    // cones
    NonPositivePrice,
    NegativeCost,
    DimensionMismatch,
    UnboundedBelow,
    CycleArbitrage,
    NotMarketCone,
    // lp
    IterationLimit,
    NumericalBreakdown,
    // pricing
    InfeasibleClaim,
    // two-asset dual representations
    NotTwoAsset,
    ZeroFirstComponent,
    OutsideDualCone,
    NotInQ,
    NotApproximateMartingaleMeasure,
    // io
    SchemaError,
    MissingNode,
    ValidationError,
};

const char* error_code_name(ErrorCode code);

// true if the condition is a defect in the input data (CLI exit code 2),
// false if it arose inside a solver (CLI exit code 3).
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace treehedge
