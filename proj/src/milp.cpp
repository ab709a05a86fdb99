#include "milp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cexplain {

namespace {

std::string state_ref(const Mdp& m, int s) {
    return m.state_names[s] + " (" + std::to_string(s) + ")";
}

// Shared scaffolding for both encodings: p and theta columns, bounds, and
// the threshold / target / Bellman / selection rows.
struct Scaffold {
    MilpBuildResult out;
    std::vector<char> is_target;
    std::vector<double> pmax;
};

Scaffold build_scaffold(const Mdp& m, const ReachabilityRequirement& req,
                        const std::vector<double>* max_probs) {
    Scaffold sc;
    sc.is_target = req.resolve_targets(m);
    sc.pmax = max_probs ? *max_probs : max_reach_probability(m, req);
    MilpProblem& p = sc.out.problem;

    for (int s = 0; s < m.num_states; ++s) {
        MilpVariable v;
        v.name = "p_" + std::to_string(s);
        v.lower = 0.0;
        v.upper = std::min(1.0, sc.pmax[s] + 1e-9);
        sc.out.p_col.push_back((int)p.vars.size());
        p.vars.push_back(std::move(v));
    }
    for (int s = 0; s < m.num_states; ++s) {
        if (sc.is_target[s]) continue;
        for (const auto& ch : m.choices[s]) {
            MilpVariable v;
            v.name = "t_" + std::to_string(s) + "_" + std::to_string(ch.action);
            v.integral = true;
            sc.out.theta_col[{s, ch.action}] = (int)p.vars.size();
            p.vars.push_back(std::move(v));
        }
    }
    return sc;
}

void add_core_rows(const Mdp& m, Scaffold& sc, double threshold_rhs) {
    MilpProblem& p = sc.out.problem;

    MilpRow threshold;
    threshold.terms.push_back({sc.out.p_col[m.initial], 1.0});
    threshold.sense = RowSense::GreaterEq;
    threshold.rhs = threshold_rhs;
    p.rows.push_back(std::move(threshold));

    for (int s = 0; s < m.num_states; ++s) {
        if (!sc.is_target[s]) continue;
        MilpRow eq;
        eq.terms.push_back({sc.out.p_col[s], 1.0});
        eq.sense = RowSense::Equal;
        eq.rhs = 1.0;
        p.rows.push_back(std::move(eq));
    }

    for (int s = 0; s < m.num_states; ++s) {
        if (sc.is_target[s]) continue;
        for (const auto& ch : m.choices[s]) {
            const int tcol = sc.out.theta_col.at({s, ch.action});
            MilpRow row;
            const bool pure_loop =
                ch.transitions.size() == 1 && ch.transitions[0].target == s;
            if (pure_loop) {
                // Selecting a pure self-loop pins the state's probability to
                // zero; the ordinary Bellman row would leave it free.
                row.terms.push_back({sc.out.p_col[s], 1.0});
                row.terms.push_back({tcol, 1.0});
            } else {
                std::map<int, double> coeff;
                coeff[sc.out.p_col[s]] = 1.0;
                for (const auto& tr : ch.transitions)
                    coeff[sc.out.p_col[tr.target]] -= tr.prob;
                coeff[tcol] += 1.0;
                for (const auto& [col, c] : coeff)
                    if (c != 0.0) row.terms.push_back({col, c});
            }
            row.sense = RowSense::LessEq;
            row.rhs = 1.0;
            p.rows.push_back(std::move(row));
        }
    }

    for (int s = 0; s < m.num_states; ++s) {
        if (sc.is_target[s]) continue;
        MilpRow sel;
        sel.terms.push_back({sc.out.p_col[s], 1.0});
        for (const auto& ch : m.choices[s])
            sel.terms.push_back({sc.out.theta_col.at({s, ch.action}), -1.0});
        std::sort(sel.terms.begin(), sel.terms.end());
        sel.sense = RowSense::LessEq;
        sel.rhs = 0.0;
        p.rows.push_back(std::move(sel));
    }
}

}  // namespace

int MilpProblem::num_integral() const {
    int n = 0;
    for (const auto& v : vars) n += v.integral ? 1 : 0;
    return n;
}

double row_activity(const MilpRow& row, const std::vector<double>& x) {
    double a = 0.0;
    for (const auto& [col, c] : row.terms) a += c * x[col];
    return a;
}

bool satisfies(const MilpProblem& p, const std::vector<double>& x, double tol) {
    if (x.size() != p.vars.size()) return false;
    for (std::size_t i = 0; i < p.vars.size(); ++i) {
        if (x[i] < p.vars[i].lower - tol) return false;
        if (x[i] > p.vars[i].upper + tol) return false;
    }
    for (const auto& row : p.rows) {
        const double a = row_activity(row, x);
        switch (row.sense) {
            case RowSense::LessEq:
                if (a > row.rhs + tol) return false;
                break;
            case RowSense::GreaterEq:
                if (a < row.rhs - tol) return false;
                break;
            case RowSense::Equal:
                if (std::abs(a - row.rhs) > tol) return false;
                break;
        }
    }
    return true;
}

std::vector<int> entered_target_states(const Mdp& m,
                                       const ReachabilityRequirement& req) {
    const std::vector<char> is_target = req.resolve_targets(m);
    const std::vector<char> reach = reachable_states(m, is_target);
    std::vector<char> entered(m.num_states, 0);
    for (int s = 0; s < m.num_states; ++s) {
        if (!reach[s] || is_target[s]) continue;
        for (const auto& ch : m.choices[s])
            for (const auto& tr : ch.transitions)
                if (tr.prob > 0.0 && is_target[tr.target])
                    entered[tr.target] = 1;
    }
    std::vector<int> out;
    for (int s = 0; s < m.num_states; ++s)
        if (entered[s]) out.push_back(s);
    return out;
}

MilpBuildResult build_explanation_milp(
    const Mdp& m, const ReachabilityRequirement& req,
    const std::vector<CandidateSentence>& candidates,
    const ExplanationMilpOptions& opt) {
    if (opt.describe_targets && opt.terminal_action < 0)
        throw std::invalid_argument(
            "describe_targets requires a terminal action");
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].index != (int)i)
            throw std::invalid_argument(
                "candidate list must keep enumeration order");

    Scaffold sc = build_scaffold(m, req, opt.max_probs);
    MilpProblem& p = sc.out.problem;

    for (const auto& c : candidates) {
        MilpVariable v;
        v.name = "mu_" + std::to_string(c.index);
        v.integral = true;
        sc.out.mu_col.push_back((int)p.vars.size());
        p.vars.push_back(std::move(v));
    }
    p.objective.assign(p.vars.size(), 0.0);
    for (int col : sc.out.mu_col) p.objective[col] = 1.0;

    add_core_rows(m, sc, req.lambda + opt.epsilon);

    for (int s = 0; s < m.num_states; ++s) {
        if (sc.is_target[s]) continue;
        for (const auto& ch : m.choices[s]) {
            MilpRow row;
            row.terms.push_back({sc.out.theta_col.at({s, ch.action}), 1.0});
            int covered = 0;
            for (const auto& c : candidates) {
                if (!candidate_covers(c, m, s, ch.action)) continue;
                row.terms.push_back({sc.out.mu_col[c.index], -1.0});
                ++covered;
            }
            if (covered == 0)
                sc.out.diagnostics.push_back(
                    "no sentence covers state " + state_ref(m, s) +
                    " action " + m.action_names[ch.action] +
                    "; the pair cannot be selected");
            row.sense = RowSense::LessEq;
            row.rhs = 0.0;
            p.rows.push_back(std::move(row));
        }
    }

    if (opt.describe_targets) {
        sc.out.entered_targets = entered_target_states(m, req);
        for (int t : sc.out.entered_targets) {
            MilpRow cover;
            for (const auto& c : candidates)
                if (c.action == opt.terminal_action && props_hold(m, t, c.props))
                    cover.terms.push_back({sc.out.mu_col[c.index], 1.0});
            if (cover.terms.empty())
                throw std::runtime_error(
                    "no sentence with the terminal action can describe "
                    "target state " + state_ref(m, t));
            cover.sense = RowSense::GreaterEq;
            cover.rhs = 1.0;
            p.rows.push_back(std::move(cover));
        }
    }
    return std::move(sc.out);
}

MilpBuildResult build_minimal_state_milp(const Mdp& m,
                                         const ReachabilityRequirement& req,
                                         const BaselineMilpOptions& opt) {
    Scaffold sc = build_scaffold(m, req, opt.max_probs);
    MilpProblem& p = sc.out.problem;

    for (int s = 0; s < m.num_states; ++s) {
        MilpVariable v;
        v.name = "x_" + std::to_string(s);
        v.integral = true;
        sc.out.x_col.push_back((int)p.vars.size());
        p.vars.push_back(std::move(v));
    }
    p.objective.assign(p.vars.size(), 0.0);
    for (int col : sc.out.x_col) p.objective[col] = 1.0;

    add_core_rows(m, sc, req.lambda + opt.epsilon);

    for (int s = 0; s < m.num_states; ++s) {
        MilpRow couple;
        couple.terms.push_back({sc.out.p_col[s], 1.0});
        couple.terms.push_back({sc.out.x_col[s], -1.0});
        couple.sense = RowSense::LessEq;
        couple.rhs = 0.0;
        p.rows.push_back(std::move(couple));
    }
    return std::move(sc.out);
}

}  // namespace cexplain
