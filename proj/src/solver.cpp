#include "solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

namespace cexplain {

namespace {

struct Node {
    std::shared_ptr<Node> parent;
    int col = -1;  // bound change against the parent; -1 at the root
    double lo = 0.0, up = 0.0;
    double bound = 0.0;
    long seq = 0;
};

using NodePtr = std::shared_ptr<Node>;

struct NodeOrder {
    bool operator()(const NodePtr& a, const NodePtr& b) const {
        if (a->bound != b->bound) return a->bound > b->bound;
        return a->seq > b->seq;  // min-heap: lowest bound, then oldest
    }
};

// Bounds at a node: original bounds with the leaf-most change per column
// applied (branching only ever tightens).
void materialize(const MilpProblem& p, const Node* n, std::vector<double>& lo,
                 std::vector<double>& up) {
    lo.resize(p.vars.size());
    up.resize(p.vars.size());
    for (std::size_t j = 0; j < p.vars.size(); ++j) {
        lo[j] = p.vars[j].lower;
        up[j] = p.vars[j].upper;
    }
    std::vector<char> seen(p.vars.size(), 0);
    for (const Node* c = n; c && c->col >= 0; c = c->parent.get()) {
        if (seen[c->col]) continue;
        seen[c->col] = 1;
        lo[c->col] = c->lo;
        up[c->col] = c->up;
    }
}

}  // namespace

MilpSolution solve_milp(const MilpProblem& p, const SolverConfig& cfg) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    MilpSolution res;
    std::vector<int> int_cols;
    for (int j = 0; j < p.num_vars(); ++j)
        if (p.vars[j].integral) int_cols.push_back(j);

    // Ceil strengthening applies when the objective is an integer
    // combination of integral columns only.
    bool integer_objective = true;
    for (int j = 0; j < p.num_vars(); ++j) {
        const double c = j < (int)p.objective.size() ? p.objective[j] : 0.0;
        if (c == 0.0) continue;
        if (!p.vars[j].integral || c != std::floor(c)) {
            integer_objective = false;
            break;
        }
    }
    auto strengthen = [&](double bound) {
        return integer_objective ? std::ceil(bound - 1e-6) : bound;
    };

    bool have_inc = false;
    double inc_obj = 0.0;
    std::vector<double> inc_x;
    auto try_incumbent = [&](const std::vector<double>& x, double obj) {
        if (have_inc && obj >= inc_obj - 1e-9) return;
        if (!satisfies(p, x, cfg.feasibility_tol)) return;
        for (int j : int_cols) {
            const double r = std::round(x[j]);
            if (std::abs(x[j] - r) > cfg.integrality_tol) return;
        }
        have_inc = true;
        inc_obj = obj;
        inc_x = x;
    };
    if (!cfg.initial_incumbent.empty() &&
        cfg.initial_incumbent.size() == p.vars.size()) {
        double obj = 0.0;
        for (int j = 0; j < p.num_vars() && j < (int)p.objective.size(); ++j)
            obj += p.objective[j] * cfg.initial_incumbent[j];
        try_incumbent(cfg.initial_incumbent, obj);
    }

    std::priority_queue<NodePtr, std::vector<NodePtr>, NodeOrder> open;
    long seq = 0;
    auto root = std::make_shared<Node>();
    root->bound = -1e100;
    root->seq = seq++;
    open.push(root);

    std::vector<double> lo, up;
    double open_bound_floor = 1e100;  // lowest bound among pruned-open work
    auto finish_limit = [&](MilpStatus st) {
        res.status = st;
        res.has_solution = have_inc;
        if (have_inc) {
            res.objective = inc_obj;
            res.x = inc_x;
        }
        double b = open.empty() ? open_bound_floor
                                : std::min(open.top()->bound, open_bound_floor);
        if (have_inc) b = std::min(b, inc_obj);
        res.best_bound = b <= -1e99 ? -1e100 : b;
        return res;
    };

    while (!open.empty()) {
        if (res.nodes >= cfg.node_limit)
            return finish_limit(MilpStatus::NodeLimit);
        if (elapsed() > cfg.time_limit_seconds)
            return finish_limit(MilpStatus::TimeLimit);

        NodePtr node = open.top();
        open.pop();
        if (have_inc && strengthen(node->bound) >= inc_obj - 1e-9) continue;

        materialize(p, node.get(), lo, up);
        ++res.nodes;
        LpResult lp = solve_lp(p, lo, up, cfg.lp);
        res.lp_iterations += lp.iterations;
        if (lp.status == LpStatus::Infeasible) continue;
        if (lp.status != LpStatus::Optimal)
            throw std::runtime_error(
                lp.status == LpStatus::IterationLimit
                    ? "simplex iteration limit reached"
                    : "relaxation reported unbounded");
        if (have_inc && strengthen(lp.objective) >= inc_obj - 1e-9) continue;

        int branch_col = -1;
        double branch_score = cfg.integrality_tol;
        for (int j : int_cols) {
            const double f = lp.x[j] - std::floor(lp.x[j]);
            const double score = std::min(f, 1.0 - f);
            if (score > branch_score) {
                branch_score = score;
                branch_col = j;
            }
        }

        if (branch_col < 0) {
            // Integral relaxation. Fix the integral columns to their rounded
            // values and re-solve for exact continuous values.
            std::vector<double> flo = lo, fup = up;
            for (int j : int_cols) {
                double v = std::round(lp.x[j]);
                v = std::clamp(v, lo[j], up[j]);
                flo[j] = fup[j] = v;
            }
            LpResult fixed = solve_lp(p, flo, fup, cfg.lp);
            res.lp_iterations += fixed.iterations;
            if (fixed.status == LpStatus::Optimal) {
                try_incumbent(fixed.x, fixed.objective);
                continue;
            }
            // The rounding was not actually feasible; halve the domain of
            // the first still-free integral column so the subtree shrinks.
            int split = -1;
            for (int j : int_cols)
                if (up[j] - lo[j] > 0.5) {
                    split = j;
                    break;
                }
            if (split < 0) continue;
            const double mid = std::floor((lo[split] + up[split]) / 2.0);
            auto left = std::make_shared<Node>();
            left->parent = node;
            left->col = split;
            left->lo = lo[split];
            left->up = mid;
            left->bound = lp.objective;
            left->seq = seq++;
            open.push(left);
            auto right = std::make_shared<Node>();
            right->parent = node;
            right->col = split;
            right->lo = mid + 1.0;
            right->up = up[split];
            right->bound = lp.objective;
            right->seq = seq++;
            open.push(right);
            continue;
        }

        const double xv = lp.x[branch_col];
        auto left = std::make_shared<Node>();
        left->parent = node;
        left->col = branch_col;
        left->lo = lo[branch_col];
        left->up = std::floor(xv);
        left->bound = lp.objective;
        left->seq = seq++;
        open.push(left);
        auto right = std::make_shared<Node>();
        right->parent = node;
        right->col = branch_col;
        right->lo = std::ceil(xv);
        right->up = up[branch_col];
        right->bound = lp.objective;
        right->seq = seq++;
        open.push(right);
    }

    if (have_inc) {
        res.status = MilpStatus::Optimal;
        res.has_solution = true;
        res.objective = inc_obj;
        res.x = inc_x;
        res.best_bound = inc_obj;
    } else {
        res.status = MilpStatus::Infeasible;
    }
    return res;
}

}  // namespace cexplain
