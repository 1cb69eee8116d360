#pragma once

#include <vector>

namespace disclosure::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/**
 * Dense two-phase primal simplex:
 *
 *   maximize  c·x   subject to   A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0,
 *
 * with all entries of b_ub and b_eq required nonnegative (true for every
 * program this library builds).  Slacks provide the initial basis for the
 * inequality rows; artificials cover the equality rows and are driven out
 * in phase 1.  Dantzig pricing with a Bland's-rule fallback against cycling.
 */
LpResult solve_lp(const std::vector<double>& c,
                  const std::vector<std::vector<double>>& a_ub,
                  const std::vector<double>& b_ub,
                  const std::vector<std::vector<double>>& a_eq,
                  const std::vector<double>& b_eq);

}  // namespace disclosure::lp
