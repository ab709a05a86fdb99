#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cexplain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tableau {
    int m = 0;      // rows
    int n = 0;      // total columns: structural + slack + artificial
    int nstruct = 0;
    std::vector<double> t;      // m x n, row-major; equals B^-1 A throughout
    std::vector<double> xb;     // basic values
    std::vector<int> basis;     // row -> column
    std::vector<double> lo, up; // per column
    std::vector<char> at_upper; // nonbasic columns only
    std::vector<char> in_basis;
    std::vector<double> d;      // reduced costs for the current phase
    double obj = 0.0;

    double* row(int i) { return &t[(std::size_t)i * n]; }
    const double* row(int i) const { return &t[(std::size_t)i * n]; }

    double value(int j) const {
        return at_upper[j] ? up[j] : lo[j];  // nonbasic columns
    }
};

// Reduced costs and objective for the given per-column costs, from scratch.
void price_all(Tableau& tb, const std::vector<double>& cost) {
    tb.d = cost;
    for (int i = 0; i < tb.m; ++i) {
        const double cb = cost[tb.basis[i]];
        if (cb == 0.0) continue;
        const double* r = tb.row(i);
        for (int j = 0; j < tb.n; ++j) tb.d[j] -= cb * r[j];
    }
    tb.obj = 0.0;
    for (int i = 0; i < tb.m; ++i) tb.obj += cost[tb.basis[i]] * tb.xb[i];
    for (int j = 0; j < tb.n; ++j)
        if (!tb.in_basis[j] && cost[j] != 0.0) tb.obj += cost[j] * tb.value(j);
}

enum class StepKind { Pivot, Flip, NoEntering, Unbounded };

// One simplex step. Entering column picked by Dantzig pricing unless `bland`.
StepKind step(Tableau& tb, const LpOptions& opt, bool bland) {
    int enter = -1;
    double best_score = opt.price_tol;
    for (int j = 0; j < tb.n; ++j) {
        if (tb.in_basis[j]) continue;
        if (tb.up[j] - tb.lo[j] <= 1e-12) continue;  // fixed
        const double dj = tb.d[j];
        const bool eligible =
            (!tb.at_upper[j] && dj < -opt.price_tol) ||
            (tb.at_upper[j] && dj > opt.price_tol);
        if (!eligible) continue;
        if (bland) {
            enter = j;
            break;
        }
        const double score = std::abs(dj);
        if (score > best_score) {
            best_score = score;
            enter = j;
        }
    }
    if (enter < 0) return StepKind::NoEntering;

    const double dir = tb.at_upper[enter] ? -1.0 : 1.0;
    double limit = tb.up[enter] - tb.lo[enter];  // bound-flip distance
    int leave = -1;
    for (int i = 0; i < tb.m; ++i) {
        const double alpha = dir * tb.row(i)[enter];
        double cap;
        if (alpha > opt.pivot_tol) {
            const double lo = tb.lo[tb.basis[i]];
            cap = (tb.xb[i] - lo) / alpha;
        } else if (alpha < -opt.pivot_tol) {
            const double hi = tb.up[tb.basis[i]];
            if (std::isinf(hi)) continue;
            cap = (hi - tb.xb[i]) / (-alpha);
        } else {
            continue;
        }
        if (cap < 0.0) cap = 0.0;
        if (cap < limit - 1e-12 ||
            (leave >= 0 && cap <= limit + 1e-12 &&
             tb.basis[i] < tb.basis[leave])) {
            limit = cap;
            leave = i;
        }
    }
    if (std::isinf(limit)) return StepKind::Unbounded;

    const double delta = dir * limit;
    if (leave < 0) {
        // Entering column travels to its other bound; basis unchanged.
        for (int i = 0; i < tb.m; ++i) tb.xb[i] -= delta * tb.row(i)[enter];
        tb.obj += tb.d[enter] * delta;
        tb.at_upper[enter] = !tb.at_upper[enter];
        return StepKind::Flip;
    }

    const double enter_value = tb.value(enter) + delta;
    for (int i = 0; i < tb.m; ++i)
        if (i != leave) tb.xb[i] -= delta * tb.row(i)[enter];

    const int out = tb.basis[leave];
    const double alpha_leave = dir * tb.row(leave)[enter];
    tb.at_upper[out] = alpha_leave < 0.0;  // hit its upper bound
    tb.in_basis[out] = 0;
    tb.in_basis[enter] = 1;
    tb.basis[leave] = enter;
    tb.xb[leave] = enter_value;

    double* prow = tb.row(leave);
    const double piv = prow[enter];
    const double inv = 1.0 / piv;
    for (int j = 0; j < tb.n; ++j) prow[j] *= inv;
    prow[enter] = 1.0;
    for (int i = 0; i < tb.m; ++i) {
        if (i == leave) continue;
        double* r = tb.row(i);
        const double f = r[enter];
        if (std::abs(f) <= 1e-14) {
            r[enter] = 0.0;
            continue;
        }
        for (int j = 0; j < tb.n; ++j) r[j] -= f * prow[j];
        r[enter] = 0.0;
    }
    {
        const double f = tb.d[enter];
        if (f != 0.0) {
            for (int j = 0; j < tb.n; ++j) tb.d[j] -= f * prow[j];
            tb.d[enter] = 0.0;
        }
        tb.obj += f * delta;
    }
    return StepKind::Pivot;
}

// Runs pivots until no entering column remains. Returns false on iteration
// exhaustion, sets *unbounded on an unbounded ray.
bool run_phase(Tableau& tb, const LpOptions& opt, long& iters,
               bool* unbounded) {
    *unbounded = false;
    int stall = 0;
    bool bland = false;
    double last_obj = tb.obj;
    while (iters < opt.iteration_limit) {
        const StepKind k = step(tb, opt, bland);
        if (k == StepKind::NoEntering) return true;
        if (k == StepKind::Unbounded) {
            *unbounded = true;
            return true;
        }
        ++iters;
        if (tb.obj < last_obj - 1e-12) {
            last_obj = tb.obj;
            stall = 0;
            bland = false;
        } else if (++stall > opt.stall_before_bland) {
            bland = true;
        }
    }
    return false;
}

}  // namespace

LpResult solve_lp(const MilpProblem& p, const std::vector<double>& lower,
                  const std::vector<double>& upper, const LpOptions& opt) {
    const int ns = p.num_vars();
    if ((int)lower.size() != ns || (int)upper.size() != ns)
        throw std::invalid_argument("bound vectors must cover every column");
    LpResult res;
    for (int j = 0; j < ns; ++j) {
        if (std::isinf(lower[j]))
            throw std::invalid_argument("free variables are not supported");
        if (lower[j] > upper[j] + 1e-9) {
            res.status = LpStatus::Infeasible;
            return res;
        }
    }

    const int m = p.num_rows();
    // Normalised rows: every >= row flips to <=; then a slack per inequality
    // and an artificial wherever the all-lower point violates the row.
    // Branch-and-bound solves thousands of programs of one shape back to
    // back; thread-local buffers keep the tableau storage alive between
    // calls instead of faulting fresh pages in every node.
    thread_local std::vector<int> slack_col, art_col;
    thread_local std::vector<double> scale, resid;
    slack_col.assign(m, -1);
    art_col.assign(m, -1);
    scale.assign(m, 1.0);
    resid.assign(m, 0.0);
    int n = ns;
    for (int i = 0; i < m; ++i) {
        const MilpRow& row = p.rows[i];
        if (row.sense == RowSense::GreaterEq) scale[i] = -1.0;
        double r = row.rhs * scale[i];
        for (const auto& [col, c] : row.terms) r -= scale[i] * c * lower[col];
        resid[i] = r;
        if (row.sense != RowSense::Equal) slack_col[i] = n++;
        const bool need_art =
            row.sense == RowSense::Equal ? true : (r < 0.0);
        if (need_art) art_col[i] = n++;
    }

    thread_local Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.nstruct = ns;
    tb.t.assign((std::size_t)m * n, 0.0);
    tb.xb.assign(m, 0.0);
    tb.basis.assign(m, -1);
    tb.lo.assign(n, 0.0);
    tb.up.assign(n, kInf);
    tb.at_upper.assign(n, 0);
    tb.in_basis.assign(n, 0);
    for (int j = 0; j < ns; ++j) {
        tb.lo[j] = lower[j];
        tb.up[j] = std::max(lower[j], upper[j]);
    }

    for (int i = 0; i < m; ++i) {
        double* r = tb.row(i);
        // Rows needing an artificial are rescaled so the artificial's basic
        // value |resid| enters with a +1 unit column.
        const double flip = (art_col[i] >= 0 && resid[i] < 0.0) ? -1.0 : 1.0;
        const double sc = scale[i] * flip;
        for (const auto& [col, c] : p.rows[i].terms) r[col] = sc * c;
        if (slack_col[i] >= 0) r[slack_col[i]] = flip;
        if (art_col[i] >= 0) {
            r[art_col[i]] = 1.0;
            tb.basis[i] = art_col[i];
            tb.xb[i] = std::abs(resid[i]);
        } else {
            tb.basis[i] = slack_col[i];
            tb.xb[i] = resid[i];
        }
        tb.in_basis[tb.basis[i]] = 1;
    }
    // Shift to the all-lower starting point: columns sit at their bounds, so
    // basic values already absorb the lower-bound offsets via resid.

    bool have_art = false;
    thread_local std::vector<double> cost;
    cost.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (art_col[i] >= 0) {
            cost[art_col[i]] = 1.0;
            have_art = true;
        }

    bool unbounded = false;
    if (have_art) {
        price_all(tb, cost);
        if (!run_phase(tb, opt, res.iterations, &unbounded)) {
            res.status = LpStatus::IterationLimit;
            return res;
        }
        if (unbounded) {
            // Phase 1 is bounded below by zero; a ray means numerics failed.
            res.status = LpStatus::Unbounded;
            return res;
        }
        if (tb.obj > opt.phase1_tol) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        for (int i = 0; i < m; ++i)
            if (art_col[i] >= 0) tb.lo[art_col[i]] = tb.up[art_col[i]] = 0.0;
    }

    std::fill(cost.begin(), cost.end(), 0.0);
    for (int j = 0; j < ns && j < (int)p.objective.size(); ++j)
        cost[j] = p.objective[j];
    price_all(tb, cost);
    if (!run_phase(tb, opt, res.iterations, &unbounded)) {
        res.status = LpStatus::IterationLimit;
        return res;
    }
    if (unbounded) {
        res.status = LpStatus::Unbounded;
        return res;
    }

    res.x.assign(ns, 0.0);
    for (int j = 0; j < ns; ++j)
        if (!tb.in_basis[j]) res.x[j] = tb.value(j);
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] < ns) res.x[tb.basis[i]] = tb.xb[i];
    for (int j = 0; j < ns; ++j)
        res.x[j] = std::clamp(res.x[j], lower[j], std::max(lower[j], upper[j]));
    res.objective = 0.0;
    for (int j = 0; j < ns && j < (int)p.objective.size(); ++j)
        res.objective += p.objective[j] * res.x[j];
    res.status = LpStatus::Optimal;
    return res;
}

}  // namespace cexplain
