#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mdp.hpp"
#include "templates.hpp"

namespace cexplain {

// Mixed-integer linear program, always minimising. Rows keep their terms
// sorted by column. Variables marked integral are binaries here (bounds
// within [0, 1]).
struct MilpVariable {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    bool integral = false;
};

enum class RowSense { LessEq, GreaterEq, Equal };

struct MilpRow {
    std::vector<std::pair<int, double>> terms;  // (column, coefficient)
    RowSense sense = RowSense::LessEq;
    double rhs = 0.0;
};

struct MilpProblem {
    std::vector<MilpVariable> vars;
    std::vector<MilpRow> rows;
    std::vector<double> objective;  // aligned with vars

    int num_vars() const { return (int)vars.size(); }
    int num_rows() const { return (int)rows.size(); }
    int num_integral() const;
};

double row_activity(const MilpRow& row, const std::vector<double>& x);

// Feasibility of a point against rows and bounds, within tol per row.
bool satisfies(const MilpProblem& p, const std::vector<double>& x, double tol);

// Columns of the built program. p_col covers every state; theta_col covers
// enabled actions of non-target states; mu_col (explanation encoding) is
// parallel to the candidate list; x_col (state-minimal encoding) covers every
// state. Unused maps stay empty.
struct MilpBuildResult {
    MilpProblem problem;
    std::vector<int> p_col;
    std::map<std::pair<int, int>, int> theta_col;
    std::vector<int> mu_col;
    std::vector<int> x_col;
    std::vector<int> entered_targets;
    std::vector<std::string> diagnostics;
};

struct ExplanationMilpOptions {
    double epsilon = 1e-6;        // violation margin on the initial state
    bool describe_targets = true;
    int terminal_action = -1;     // action id used by target sentences
    const std::vector<double>* max_probs = nullptr;  // reuse if already known
};

// Target states owning a transition from some non-target state reachable
// from the initial state. Ascending ids.
std::vector<int> entered_target_states(const Mdp& m,
                                       const ReachabilityRequirement& req);

// Sentence-minimal encoding. Continuous p_s per state, binary t_<s>_<a> per
// enabled action of non-target states, binary mu_<i> per candidate.
// Objective: sum of mu. Rows in order: initial-state threshold, target
// equalities, Bellman rows per (state, action), selection rows per state,
// coverage rows per (state, action), then one cover row per entered target.
// A pure self-loop Bellman row degenerates to p_s + t_<s>_<a> <= 1; p_s is
// capped at Pr^max(s) + 1e-9. Both shifts cut strategies whose probability
// the Bellman rows alone fail to pin down. Pairs no candidate can describe
// get t_<s>_<a> <= 0 and a diagnostic; an entered target no candidate can
// describe is an error.
MilpBuildResult build_explanation_milp(
    const Mdp& m, const ReachabilityRequirement& req,
    const std::vector<CandidateSentence>& candidates,
    const ExplanationMilpOptions& opt = {});

struct BaselineMilpOptions {
    double epsilon = 1e-6;
    const std::vector<double>* max_probs = nullptr;
};

// State-minimal encoding used as the comparison baseline: same p and t
// variables and Bellman/selection rows, plus binary x_<s> per state with
// coupling p_s <= x_s. Objective: sum of x. No sentence variables.
MilpBuildResult build_minimal_state_milp(const Mdp& m,
                                         const ReachabilityRequirement& req,
                                         const BaselineMilpOptions& opt = {});

}  // namespace cexplain
