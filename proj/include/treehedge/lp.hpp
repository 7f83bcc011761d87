#pragma once

#include <optional>
#include <vector>

#include "treehedge/errors.hpp"
#include "treehedge/scalar.hpp"

namespace treehedge::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, Equal, GreaterEq };

/// Per-variable bounds. Default is x >= 0. A missing lower bound together
/// with a missing upper bound means the variable is free.
template <class S>
struct VarBound {
    std::optional<S> lower = S(0);
    std::optional<S> upper = std::nullopt;
};

template <class S>
struct LpRow {
    std::vector<S> coeffs;
    Relation rel = Relation::LessEq;
    S rhs = S(0);
};

/// Dense linear program. Row coefficient vectors must all have size
/// num_vars(); `bounds` may be shorter and is padded with the default.
template <class S>
struct LpProblem {
    Sense sense = Sense::Minimize;
    std::vector<S> objective;
    std::vector<LpRow<S>> rows;
    std::vector<VarBound<S>> bounds;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Result of a solve. Exactly one of the three payload groups is meaningful:
///  - Optimal:    value, solution, row_duals (and the duality identity below)
///  - Infeasible: farkas_user (user-row multipliers certifying a contradiction)
///  - Unbounded:  feasible_point + ray (improving feasible direction)
///
/// Duality identity (Minimize): value = sum_i row_duals[i]*rhs[i]
///   + sum_j max(rc_j,0)*lower_j + sum_j min(rc_j,0)*upper_j
/// with rc = objective - A^T * row_duals; for Maximize the same identity
/// holds with min/max swapped. verify_optimal() checks it.
template <class S>
struct LpOutcome {
    LpStatus status = LpStatus::Optimal;
    S value = S(0);
    std::vector<S> solution;
    std::vector<S> row_duals;
    std::vector<S> farkas_user;
    std::vector<S> farkas_bounds;  // multipliers attached to finite upper bounds
    std::vector<S> feasible_point;
    std::vector<S> ray;
    long pivots = 0;
};

struct SolveOptions {
    double feas_tol = 1e-9;   // float mode: feasibility / pricing dead zone
    double pivot_tol = 1e-9;  // float mode: smallest usable pivot magnitude
    long max_pivots = 0;      // 0 -> 10 * (rows + cols)^2
    bool dantzig = false;     // opt-in most-negative pricing; Bland is default
};

/// Two-phase dense simplex with Bland's anti-cycling rule. Throws
/// Error(IterationLimit) or Error(NumericalBreakdown) (float mode only).
template <class S>
LpOutcome<S> solve_lp(const LpProblem<S>& problem, const SolveOptions& options = {});

/// Checks primal feasibility of the reported solution, complementary
/// slackness of the reported duals, and the duality identity. Exact for
/// Rational; within `tol` for double.
template <class S>
bool verify_optimal(const LpProblem<S>& problem, const LpOutcome<S>& outcome,
                    double tol = 1e-7);

/// Checks that the Farkas multipliers aggregate the rows (and active upper
/// bounds) into an inequality no nonnegative-orthant point can satisfy.
template <class S>
bool verify_infeasible(const LpProblem<S>& problem, const LpOutcome<S>& outcome,
                       double tol = 1e-7);

/// Checks that feasible_point is feasible and that moving along `ray` keeps
/// every constraint satisfied while improving the objective without bound.
template <class S>
bool verify_unbounded(const LpProblem<S>& problem, const LpOutcome<S>& outcome,
                      double tol = 1e-7);

}  // namespace treehedge::lp
