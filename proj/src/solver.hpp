#pragma once

#include <vector>

#include "milp.hpp"
#include "simplex.hpp"

namespace cexplain {

enum class MilpStatus { Optimal, Infeasible, NodeLimit, TimeLimit };

struct SolverConfig {
    double integrality_tol = 1e-6;
    double feasibility_tol = 1e-7;
    long node_limit = 1000000;
    double time_limit_seconds = 3600.0;
    LpOptions lp;
    // Known feasible point, full x vector. Checked before use; an invalid
    // vector is ignored.
    std::vector<double> initial_incumbent;
};

struct MilpSolution {
    MilpStatus status = MilpStatus::Infeasible;
    bool has_solution = false;
    double objective = 0.0;
    std::vector<double> x;
    double best_bound = 0.0;
    long nodes = 0;
    long lp_iterations = 0;
};

// Best-first branch and bound. Nodes are ordered by parent relaxation bound,
// ties resolved first-in first-out; branching picks the integral column
// whose relaxation value is most fractional, ties to the lowest column.
// Every relaxation is solved from a cold start. When the objective is an
// integer combination of integral columns, node bounds are rounded up before
// pruning. Integral relaxation points are completed by re-solving with the
// integral columns fixed, and the completed point is checked against the
// untouched problem before it becomes the incumbent. Deterministic for a
// fixed problem and configuration.
MilpSolution solve_milp(const MilpProblem& p, const SolverConfig& cfg = {});

}  // namespace cexplain
