#pragma once

#include <vector>

#include "milp.hpp"

namespace cexplain {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpOptions {
    double pivot_tol = 1e-9;
    double price_tol = 1e-9;
    double phase1_tol = 1e-7;   // residual infeasibility treated as zero
    long iteration_limit = 200000;
    int stall_before_bland = 500;  // non-improving pivots before Bland's rule
};

struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;
    std::vector<double> x;  // structural values, aligned with p.vars
    long iterations = 0;
};

// Two-phase primal simplex over the bounded-variable form. Rows are
// normalised to <= and =, the starting basis is slacks where the all-lower
// point satisfies the row and artificials elsewhere. Dantzig pricing, with
// Bland's rule while the objective stalls. `lower`/`upper` override the
// problem's bounds per column; integrality marks are ignored. Lower bounds
// must be finite.
LpResult solve_lp(const MilpProblem& p, const std::vector<double>& lower,
                  const std::vector<double>& upper, const LpOptions& opt = {});

}  // namespace cexplain
