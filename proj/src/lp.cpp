#include "treehedge/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <utility>

#include "treehedge/kernels.hpp"

namespace treehedge::lp {

namespace {

// ---------------------------------------------------------------------------
// Canonical form: minimize ccan.x  s.t.  arows x (rel) brhs, x >= 0, brhs >= 0.
// Bounded/free user variables are shifted, flipped or split into nonnegative
// canonical columns; finite upper bounds become appended rows.
// ---------------------------------------------------------------------------

template <class S>
struct VarMap {
    int col = -1;        // primary canonical column
    int neg_col = -1;    // second column of a free split (enters with -1)
    int factor = 1;      // +1 (shift) or -1 (flipped upper-bound-only var)
    S offset = S(0);     // x_user = offset + factor * x[col] (- x[neg_col])
};

template <class S>
struct Canonical {
    int n_struct = 0;
    std::vector<S> ccan;                 // size n_struct, always a Minimize cost
    std::vector<std::vector<S>> arows;   // coefficients over structural columns
    std::vector<S> brhs;                 // >= 0
    std::vector<Relation> rel;           // post-negation relation
    std::vector<bool> negated;
    std::vector<int> row_origin;         // user row index, or -1 - var for bound rows
    std::vector<VarMap<S>> vmap;
    bool maximize = false;
};

template <class S>
void validate_problem(const LpProblem<S>& p) {
    const int n = p.num_vars();
    for (const auto& row : p.rows) {
        if (static_cast<int>(row.coeffs.size()) != n)
            fail(ErrorCode::DimensionMismatch, "LP row width does not match variable count");
    }
    if (static_cast<int>(p.bounds.size()) > n)
        fail(ErrorCode::DimensionMismatch, "more bounds than variables");
    if constexpr (!is_exact_scalar_v<S>) {
        auto finite = [](const S& v) { return std::isfinite(v); };
        for (const S& c : p.objective)
            if (!finite(c)) fail(ErrorCode::ValidationError, "non-finite objective coefficient");
        for (const auto& row : p.rows) {
            if (!finite(row.rhs)) fail(ErrorCode::ValidationError, "non-finite rhs");
            for (const S& c : row.coeffs)
                if (!finite(c)) fail(ErrorCode::ValidationError, "non-finite row coefficient");
        }
    }
}

template <class S>
Canonical<S> canonicalize(const LpProblem<S>& p) {
    const int n = p.num_vars();
    Canonical<S> c;
    c.maximize = p.sense == Sense::Maximize;
    c.vmap.resize(n);

    std::vector<VarBound<S>> bounds = p.bounds;
    bounds.resize(n);

    // columns
    for (int j = 0; j < n; ++j) {
        const auto& b = bounds[j];
        VarMap<S>& m = c.vmap[j];
        if (b.lower.has_value()) {
            m.col = c.n_struct++;
            m.factor = 1;
            m.offset = *b.lower;
        } else if (b.upper.has_value()) {
            m.col = c.n_struct++;
            m.factor = -1;
            m.offset = *b.upper;
        } else {
            m.col = c.n_struct++;
            m.neg_col = c.n_struct++;
            m.factor = 1;
            m.offset = S(0);
        }
    }

    c.ccan.assign(c.n_struct, S(0));
    for (int j = 0; j < n; ++j) {
        const VarMap<S>& m = c.vmap[j];
        S cost = p.objective[j];
        if (c.maximize) cost = -cost;
        c.ccan[m.col] += S(m.factor) * cost;
        if (m.neg_col >= 0) c.ccan[m.neg_col] -= cost;
    }

    auto push_row = [&](const std::vector<S>& user_coeffs, Relation rel, S rhs, int origin) {
        std::vector<S> row(c.n_struct, S(0));
        for (int j = 0; j < n; ++j) {
            const S& a = user_coeffs[j];
            if (fuzzy_sign(a, 0.0) == 0) continue;
            const VarMap<S>& m = c.vmap[j];
            row[m.col] += S(m.factor) * a;
            if (m.neg_col >= 0) row[m.neg_col] -= a;
            rhs -= a * m.offset;
        }
        bool neg = fuzzy_sign(rhs, 0.0) < 0 ||
                   (fuzzy_sign(rhs, 0.0) == 0 && rel == Relation::GreaterEq);
        if (neg) {
            for (S& v : row) v = -v;
            rhs = -rhs;
            if (rel == Relation::LessEq)
                rel = Relation::GreaterEq;
            else if (rel == Relation::GreaterEq)
                rel = Relation::LessEq;
        }
        c.arows.push_back(std::move(row));
        c.brhs.push_back(std::move(rhs));
        c.rel.push_back(rel);
        c.negated.push_back(neg);
        c.row_origin.push_back(origin);
    };

    for (int i = 0; i < p.num_rows(); ++i)
        push_row(p.rows[i].coeffs, p.rows[i].rel, p.rows[i].rhs, i);

    // finite upper bound on a lower-bounded variable: x' <= upper - lower
    for (int j = 0; j < n; ++j) {
        const auto& b = bounds[j];
        if (b.lower.has_value() && b.upper.has_value()) {
            std::vector<S> unit(n, S(0));
            unit[j] = S(1);
            push_row(unit, Relation::LessEq, *b.upper, -1 - j);
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Tableau simplex
// ---------------------------------------------------------------------------

enum class ColKind { Structural, Slack, Artificial };

template <class S>
class Simplex {
  public:
    Simplex(const Canonical<S>& canon, const SolveOptions& opt)
        : canon_(canon), opt_(opt), m_(static_cast<int>(canon.arows.size())) {
        build();
    }

    // Runs both phases. Fills `status` plus the canonical-level payloads the
    // caller maps back to user space.
    LpStatus run() {
        if (has_artificial_) {
            set_costs(true);
            LpStatus st = iterate(true);
            assert(st == LpStatus::Optimal);
            (void)st;
            if (fuzzy_sign(objective_value(true), opt_.feas_tol) > 0) {
                extract_duals(true, farkas_);
                return LpStatus::Infeasible;
            }
            purge_artificials();
        }
        set_costs(false);
        LpStatus st = iterate(false);
        if (st == LpStatus::Optimal) {
            extract_duals(false, duals_);
            check_float_feasibility();
        }
        return st;
    }

    std::vector<S> structural_values() const {
        std::vector<S> x(canon_.n_struct, S(0));
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] >= canon_.n_struct) continue;
            S v = rhs_[i];
            if constexpr (!is_exact_scalar_v<S>) {
                if (v < 0 && v >= -opt_.feas_tol * 100) v = 0;
            }
            x[basis_[i]] = v;
        }
        return x;
    }

    std::vector<S> structural_ray() const {
        std::vector<S> d(canon_.n_struct, S(0));
        if (ray_col_ >= 0 && ray_col_ < canon_.n_struct) d[ray_col_] = S(1);
        for (int i = 0; i < m_; ++i) {
            if (!active_[i] || basis_[i] >= canon_.n_struct) continue;
            d[basis_[i]] = -tab_[i][ray_col_];
        }
        return d;
    }

    const std::vector<S>& duals() const { return duals_; }
    const std::vector<S>& farkas() const { return farkas_; }
    long pivots() const { return pivots_; }

  private:
    void build() {
        slack_col_.assign(m_, -1);
        int width = canon_.n_struct;
        for (int i = 0; i < m_; ++i)
            if (canon_.rel[i] != Relation::Equal) slack_col_[i] = width++;
        art_col_.assign(m_, -1);
        for (int i = 0; i < m_; ++i) {
            // a +1 slack provides a ready basis column; everything else needs
            // an artificial
            if (canon_.rel[i] != Relation::LessEq) art_col_[i] = width++;
        }
        width_ = width;
        has_artificial_ = false;
        kind_.assign(width_, ColKind::Structural);
        tab_.assign(m_, std::vector<S>(width_, S(0)));
        rhs_ = canon_.brhs;
        basis_.assign(m_, -1);
        active_.assign(m_, true);
        banned_.assign(width_, false);
        id_col_.assign(m_, -1);
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < canon_.n_struct; ++j) tab_[i][j] = canon_.arows[i][j];
            if (slack_col_[i] >= 0) {
                kind_[slack_col_[i]] = ColKind::Slack;
                tab_[i][slack_col_[i]] = canon_.rel[i] == Relation::LessEq ? S(1) : S(-1);
            }
            if (art_col_[i] >= 0) {
                kind_[art_col_[i]] = ColKind::Artificial;
                tab_[i][art_col_[i]] = S(1);
                basis_[i] = art_col_[i];
                id_col_[i] = art_col_[i];
                has_artificial_ = true;
            } else {
                basis_[i] = slack_col_[i];
                id_col_[i] = slack_col_[i];
            }
        }
        long cap = opt_.max_pivots;
        if (cap <= 0) {
            long dim = static_cast<long>(m_) + static_cast<long>(width_);
            cap = 10 * dim * dim;
        }
        pivot_cap_ = cap;
    }

    S cost_of(int col, bool phase1) const {
        if (phase1) return kind_[col] == ColKind::Artificial ? S(1) : S(0);
        if (col < canon_.n_struct) return canon_.ccan[col];
        return S(0);
    }

    // Rebuilds the reduced-cost row from scratch; done at each phase start.
    void set_costs(bool phase1) {
        phase1_ = phase1;
        reduced_.assign(width_, S(0));
        for (int j = 0; j < width_; ++j) reduced_[j] = cost_of(j, phase1);
        for (int i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            S cb = cost_of(basis_[i], phase1);
            if (fuzzy_sign(cb, 0.0) == 0) continue;
            axpy_row(reduced_, tab_[i], -cb);
        }
    }

    S objective_value(bool phase1) const {
        S v = S(0);
        for (int i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            S cb = cost_of(basis_[i], phase1);
            if (fuzzy_sign(cb, 0.0) != 0) v += cb * rhs_[i];
        }
        return v;
    }

    bool eligible(int col) const {
        if (banned_[col]) return false;
        if (!phase1_ && kind_[col] == ColKind::Artificial) return false;
        return true;
    }

    int pick_entering() const {
        const double tol = opt_.feas_tol;
        if (opt_.dantzig && degenerate_streak_ <= 2L * (m_ + width_)) {
            int best = -1;
            for (int j = 0; j < width_; ++j) {
                if (!eligible(j)) continue;
                if (fuzzy_sign(reduced_[j], tol) < 0 &&
                    (best < 0 || reduced_[j] < reduced_[best]))
                    best = j;
            }
            return best;
        }
        for (int j = 0; j < width_; ++j)
            if (eligible(j) && fuzzy_sign(reduced_[j], tol) < 0) return j;
        return -1;
    }

    // Bland ratio test; ties broken on the smallest basis column index.
    int pick_leaving(int enter) const {
        int leave = -1;
        S best_ratio = S(0);
        bool tiny_pivot_seen = false;
        for (int i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            const S& piv = tab_[i][enter];
            if constexpr (is_exact_scalar_v<S>) {
                if (sgn(piv) <= 0) continue;
            } else {
                if (piv <= 0) continue;
                if (piv <= opt_.pivot_tol) {
                    tiny_pivot_seen = true;
                    continue;
                }
            }
            S ratio = rhs_[i] / piv;
            if constexpr (is_exact_scalar_v<S>) {
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            } else {
                // ties on the ratio go to the largest pivot to limit drift
                if (leave < 0 || ratio < best_ratio - opt_.feas_tol) {
                    leave = i;
                    best_ratio = ratio;
                } else if (ratio <= best_ratio + opt_.feas_tol &&
                           piv > tab_[leave][enter]) {
                    leave = i;
                    if (ratio < best_ratio) best_ratio = ratio;
                }
            }
        }
        if constexpr (!is_exact_scalar_v<S>) {
            if (leave < 0 && tiny_pivot_seen)
                fail(ErrorCode::NumericalBreakdown,
                     "all blocking pivots below pivot tolerance; rerun in rational mode");
        }
        return leave;
    }

    void pivot(int enter, int leave) {
        if (++pivots_ > pivot_cap_)
            fail(ErrorCode::IterationLimit, "simplex pivot limit exceeded");
        if (fuzzy_sign(rhs_[leave], 0.0) == 0)
            ++degenerate_streak_;
        else
            degenerate_streak_ = 0;

        std::vector<S>& prow = tab_[leave];
        S piv = prow[enter];
        if (fuzzy_sign(piv, 0.0) != 0 && piv != S(1)) {
            S inv = S(1) / piv;
            scale_row(prow, inv);
            rhs_[leave] *= inv;
        }
        prow[enter] = S(1);
        for (int i = 0; i < m_; ++i) {
            if (i == leave) continue;
            S f = tab_[i][enter];
            if (fuzzy_sign(f, 0.0) == 0) continue;
            axpy_row(tab_[i], prow, -f);
            tab_[i][enter] = S(0);
            rhs_[i] -= f * rhs_[leave];
        }
        {
            S f = reduced_[enter];
            if (fuzzy_sign(f, 0.0) != 0) {
                axpy_row(reduced_, prow, -f);
                reduced_[enter] = S(0);
            }
        }
        if (phase1_ && kind_[basis_[leave]] == ColKind::Artificial)
            banned_[basis_[leave]] = true;
        basis_[leave] = enter;
    }

    LpStatus iterate(bool phase1) {
        phase1_ = phase1;
        degenerate_streak_ = 0;
        for (;;) {
            int enter = pick_entering();
            if (enter < 0) return LpStatus::Optimal;
            int leave = pick_leaving(enter);
            if (leave < 0) {
                if (phase1)
                    fail(ErrorCode::NumericalBreakdown,
                         "phase-1 objective unbounded; inconsistent tableau");
                ray_col_ = enter;
                return LpStatus::Unbounded;
            }
            pivot(enter, leave);
        }
    }

    // Between phases: drive basic artificials out or retire redundant rows.
    void purge_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (!active_[i] || kind_[basis_[i]] != ColKind::Artificial) continue;
            int col = -1;
            for (int j = 0; j < width_ && col < 0; ++j) {
                if (kind_[j] == ColKind::Artificial) continue;
                if constexpr (is_exact_scalar_v<S>) {
                    if (sgn(tab_[i][j]) != 0) col = j;
                } else {
                    if (std::fabs(tab_[i][j]) > opt_.pivot_tol) col = j;
                }
            }
            if (col >= 0) {
                pivot(col, i);
            } else {
                active_[i] = false;  // redundant equation
            }
        }
    }

    // y_i = cost(id column) - reduced[id column]; the initial identity column
    // of every row stores B^-1 in its slot.
    void extract_duals(bool phase1, std::vector<S>& out) const {
        out.assign(m_, S(0));
        for (int i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            int k = id_col_[i];
            out[i] = cost_of(k, phase1) - reduced_[k];
        }
    }

    void check_float_feasibility() const {
        if constexpr (!is_exact_scalar_v<S>) {
            for (int i = 0; i < m_; ++i) {
                if (!active_[i]) continue;
                if (rhs_[i] < -opt_.feas_tol * 100)
                    fail(ErrorCode::NumericalBreakdown,
                         "basic solution drifted infeasible; rerun in rational mode");
            }
        }
    }

    static void axpy_row(std::vector<S>& dst, const std::vector<S>& src, const S& factor) {
        if constexpr (is_exact_scalar_v<S>) {
            const std::size_t n = dst.size();
            for (std::size_t j = 0; j < n; ++j) {
                if (sgn(src[j]) != 0) dst[j] += factor * src[j];
            }
        } else {
            kernels::axpy(factor, src.data(), dst.data(), dst.size());
        }
    }

    static void scale_row(std::vector<S>& row, const S& factor) {
        if constexpr (is_exact_scalar_v<S>) {
            for (S& v : row)
                if (sgn(v) != 0) v *= factor;
        } else {
            kernels::scale(factor, row.data(), row.size());
        }
    }

    const Canonical<S>& canon_;
    SolveOptions opt_;
    int m_ = 0;
    int width_ = 0;
    bool has_artificial_ = false;
    bool phase1_ = false;
    std::vector<std::vector<S>> tab_;
    std::vector<S> rhs_;
    std::vector<S> reduced_;
    std::vector<int> basis_;
    std::vector<int> slack_col_;
    std::vector<int> art_col_;
    std::vector<int> id_col_;
    std::vector<ColKind> kind_;
    std::vector<bool> active_;
    std::vector<bool> banned_;
    std::vector<S> duals_;
    std::vector<S> farkas_;
    long pivots_ = 0;
    long pivot_cap_ = 0;
    long degenerate_streak_ = 0;
    int ray_col_ = -1;
};

template <class S>
std::vector<S> map_solution(const Canonical<S>& canon, const std::vector<S>& xs) {
    std::vector<S> x(canon.vmap.size(), S(0));
    for (std::size_t j = 0; j < canon.vmap.size(); ++j) {
        const auto& m = canon.vmap[j];
        x[j] = m.offset + S(m.factor) * xs[m.col];
        if (m.neg_col >= 0) x[j] -= xs[m.neg_col];
    }
    return x;
}

template <class S>
std::vector<S> map_ray(const Canonical<S>& canon, const std::vector<S>& ds) {
    std::vector<S> d(canon.vmap.size(), S(0));
    for (std::size_t j = 0; j < canon.vmap.size(); ++j) {
        const auto& m = canon.vmap[j];
        d[j] = S(m.factor) * ds[m.col];
        if (m.neg_col >= 0) d[j] -= ds[m.neg_col];
    }
    return d;
}

template <class S>
S eval_objective(const LpProblem<S>& p, const std::vector<S>& x) {
    S v = S(0);
    for (int j = 0; j < p.num_vars(); ++j) v += p.objective[j] * x[j];
    return v;
}

// user-row multipliers out of canonical ones: negated rows flip sign, a
// maximization flips the whole vector.
template <class S>
void split_canonical_multipliers(const Canonical<S>& canon, const std::vector<S>& ycan,
                                 bool flip_sense, std::vector<S>& user,
                                 std::vector<S>& bound_part, int num_user_rows,
                                 int num_vars) {
    user.assign(num_user_rows, S(0));
    bound_part.assign(num_vars, S(0));
    for (std::size_t i = 0; i < ycan.size(); ++i) {
        S y = ycan[i];
        if (canon.negated[i]) y = -y;
        if (flip_sense) y = -y;
        int origin = canon.row_origin[i];
        if (origin >= 0)
            user[origin] = y;
        else
            bound_part[-1 - origin] = y;
    }
}

}  // namespace

template <class S>
LpOutcome<S> solve_lp(const LpProblem<S>& problem, const SolveOptions& options) {
    validate_problem(problem);
    Canonical<S> canon = canonicalize(problem);
    Simplex<S> simplex(canon, options);
    LpOutcome<S> out;
    out.status = simplex.run();
    out.pivots = simplex.pivots();
    const bool maximize = problem.sense == Sense::Maximize;
    switch (out.status) {
        case LpStatus::Optimal: {
            out.solution = map_solution(canon, simplex.structural_values());
            out.value = eval_objective(problem, out.solution);
            std::vector<S> dummy;
            split_canonical_multipliers(canon, simplex.duals(), maximize, out.row_duals,
                                        dummy, problem.num_rows(), problem.num_vars());
            break;
        }
        case LpStatus::Infeasible: {
            split_canonical_multipliers(canon, simplex.farkas(), false, out.farkas_user,
                                        out.farkas_bounds, problem.num_rows(),
                                        problem.num_vars());
            break;
        }
        case LpStatus::Unbounded: {
            out.feasible_point = map_solution(canon, simplex.structural_values());
            out.ray = map_ray(canon, simplex.structural_ray());
            break;
        }
    }
    return out;
}

namespace {

template <class S>
bool nearly(const S& a, const S& b, double tol) {
    if constexpr (is_exact_scalar_v<S>) {
        return a == b;
    } else {
        double scale = 1.0 + std::max(std::fabs(a), std::fabs(b));
        return std::fabs(a - b) <= tol * scale;
    }
}

template <class S>
bool row_satisfied(const LpRow<S>& row, const std::vector<S>& x, double tol) {
    S lhs = S(0);
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
    switch (row.rel) {
        case Relation::LessEq:
            return fuzzy_sign(lhs - row.rhs, tol * (1.0 + scalar_to_double(scalar_abs(row.rhs)))) <= 0;
        case Relation::Equal:
            return nearly(lhs, row.rhs, tol);
        case Relation::GreaterEq:
            return fuzzy_sign(row.rhs - lhs, tol * (1.0 + scalar_to_double(scalar_abs(row.rhs)))) <= 0;
    }
    return false;
}

template <class S>
bool point_feasible(const LpProblem<S>& p, const std::vector<S>& x, double tol) {
    if (static_cast<int>(x.size()) != p.num_vars()) return false;
    for (const auto& row : p.rows)
        if (!row_satisfied(row, x, tol)) return false;
    std::vector<VarBound<S>> bounds = p.bounds;
    bounds.resize(p.num_vars());
    for (int j = 0; j < p.num_vars(); ++j) {
        if (bounds[j].lower && fuzzy_sign(*bounds[j].lower - x[j], tol) > 0) return false;
        if (bounds[j].upper && fuzzy_sign(x[j] - *bounds[j].upper, tol) > 0) return false;
    }
    return true;
}

}  // namespace

template <class S>
bool verify_optimal(const LpProblem<S>& problem, const LpOutcome<S>& outcome, double tol) {
    if (outcome.status != LpStatus::Optimal) return false;
    if (!point_feasible(problem, outcome.solution, tol)) return false;
    if (static_cast<int>(outcome.row_duals.size()) != problem.num_rows()) return false;

    // complementary slackness on rows
    for (int i = 0; i < problem.num_rows(); ++i) {
        if (problem.rows[i].rel == Relation::Equal) continue;
        S lhs = S(0);
        for (int j = 0; j < problem.num_vars(); ++j)
            lhs += problem.rows[i].coeffs[j] * outcome.solution[j];
        S slack = problem.rows[i].rhs - lhs;
        S prod = slack * outcome.row_duals[i];
        if (!nearly(prod, S(0), tol)) return false;
    }

    // duality identity with reduced costs folded against the active bounds
    std::vector<S> rc = problem.objective;
    for (int i = 0; i < problem.num_rows(); ++i) {
        const S& y = outcome.row_duals[i];
        if (fuzzy_sign(y, 0.0) == 0) continue;
        for (int j = 0; j < problem.num_vars(); ++j)
            rc[j] -= y * problem.rows[i].coeffs[j];
    }
    std::vector<VarBound<S>> bounds = problem.bounds;
    bounds.resize(problem.num_vars());
    const bool maximize = problem.sense == Sense::Maximize;
    S dual_value = S(0);
    for (int i = 0; i < problem.num_rows(); ++i)
        dual_value += outcome.row_duals[i] * problem.rows[i].rhs;
    for (int j = 0; j < problem.num_vars(); ++j) {
        int s = fuzzy_sign(rc[j], tol);
        if (s == 0) continue;
        bool wants_lower = maximize ? s < 0 : s > 0;
        if (wants_lower) {
            if (!bounds[j].lower) return false;
            dual_value += rc[j] * *bounds[j].lower;
        } else {
            if (!bounds[j].upper) return false;
            dual_value += rc[j] * *bounds[j].upper;
        }
    }
    return nearly(outcome.value, dual_value, tol);
}

template <class S>
bool verify_infeasible(const LpProblem<S>& problem, const LpOutcome<S>& outcome, double tol) {
    if (outcome.status != LpStatus::Infeasible) return false;
    if (static_cast<int>(outcome.farkas_user.size()) != problem.num_rows()) return false;
    Canonical<S> canon = canonicalize(problem);

    // reassemble canonical multipliers
    std::vector<S> ycan(canon.arows.size(), S(0));
    for (std::size_t i = 0; i < canon.arows.size(); ++i) {
        int origin = canon.row_origin[i];
        S y = origin >= 0 ? outcome.farkas_user[origin] : outcome.farkas_bounds[-1 - origin];
        if (canon.negated[i]) y = -y;
        ycan[i] = y;
    }

    // y.A <= 0 over structural columns, sign-feasible against the slacks,
    // and y.b > 0: no nonnegative x can satisfy the aggregated system.
    for (int j = 0; j < canon.n_struct; ++j) {
        S dot = S(0);
        for (std::size_t i = 0; i < canon.arows.size(); ++i)
            dot += ycan[i] * canon.arows[i][j];
        if (fuzzy_sign(dot, tol) > 0) return false;
    }
    for (std::size_t i = 0; i < canon.arows.size(); ++i) {
        if (canon.rel[i] == Relation::LessEq && fuzzy_sign(ycan[i], tol) > 0) return false;
        if (canon.rel[i] == Relation::GreaterEq && fuzzy_sign(-ycan[i], tol) > 0) return false;
    }
    S rhs_combo = S(0);
    for (std::size_t i = 0; i < canon.arows.size(); ++i) rhs_combo += ycan[i] * canon.brhs[i];
    return fuzzy_sign(rhs_combo, tol) > 0;
}

template <class S>
bool verify_unbounded(const LpProblem<S>& problem, const LpOutcome<S>& outcome, double tol) {
    if (outcome.status != LpStatus::Unbounded) return false;
    if (!point_feasible(problem, outcome.feasible_point, tol)) return false;
    if (static_cast<int>(outcome.ray.size()) != problem.num_vars()) return false;

    for (const auto& row : problem.rows) {
        S delta = S(0);
        for (int j = 0; j < problem.num_vars(); ++j) delta += row.coeffs[j] * outcome.ray[j];
        int s = fuzzy_sign(delta, tol);
        if (row.rel == Relation::LessEq && s > 0) return false;
        if (row.rel == Relation::GreaterEq && s < 0) return false;
        if (row.rel == Relation::Equal && s != 0) return false;
    }
    std::vector<VarBound<S>> bounds = problem.bounds;
    bounds.resize(problem.num_vars());
    for (int j = 0; j < problem.num_vars(); ++j) {
        int s = fuzzy_sign(outcome.ray[j], tol);
        if (bounds[j].lower && s < 0) return false;
        if (bounds[j].upper && s > 0) return false;
    }
    S drift = S(0);
    for (int j = 0; j < problem.num_vars(); ++j)
        drift += problem.objective[j] * outcome.ray[j];
    int s = fuzzy_sign(drift, tol);
    return problem.sense == Sense::Minimize ? s < 0 : s > 0;
}

template LpOutcome<Rational> solve_lp(const LpProblem<Rational>&, const SolveOptions&);
template LpOutcome<double> solve_lp(const LpProblem<double>&, const SolveOptions&);
template bool verify_optimal(const LpProblem<Rational>&, const LpOutcome<Rational>&, double);
template bool verify_optimal(const LpProblem<double>&, const LpOutcome<double>&, double);
template bool verify_infeasible(const LpProblem<Rational>&, const LpOutcome<Rational>&, double);
template bool verify_infeasible(const LpProblem<double>&, const LpOutcome<double>&, double);
template bool verify_unbounded(const LpProblem<Rational>&, const LpOutcome<Rational>&, double);
template bool verify_unbounded(const LpProblem<double>&, const LpOutcome<double>&, double);

}  // namespace treehedge::lp
