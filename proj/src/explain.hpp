#pragma once

#include <string>
#include <vector>

#include "mdp.hpp"
#include "milp.hpp"
#include "templates.hpp"

namespace cexplain {

// Critical subsystem with its witness strategy and the chosen sentence set.
// `members` is sorted ascending and always contains the initial state;
// `sigma` covers exactly the non-target members; `selected` holds candidate
// indices of the sentence set, ascending.
struct Counterexample {
    std::vector<int> members;
    Strategy sigma;
    std::vector<int> selected;
    double mu_probability = 0.0;        // p value of the initial state
    double verified_probability = 0.0;  // independent re-evaluation
};

struct ExtractOptions {
    double membership_tol = 1e-6;  // aligned with solver integrality default
    double epsilon = 1e-6;         // violation margin the program was built with
};

// Reads a counterexample off a solver point. Members are the states with
// p above membership_tol (target states carry p=1 and are always in); each
// non-target member takes a theta=1 action, preferring the best one-step
// backup against the solver's p values, ties to the lowest action id.
// verified_probability comes from an independent linear solve restricted to
// the members. Throws when a non-target member has no selected action, when
// the verified value falls more than 1e-6 below the solver's initial-state
// probability, or when it falls below lambda + epsilon - 1e-8.
Counterexample extract_counterexample(const Mdp& m,
                                      const ReachabilityRequirement& req,
                                      const MilpBuildResult& build,
                                      const std::vector<double>& x,
                                      const ExtractOptions& opt = {});

// One line of the final explanation. Non-target sentences come first in
// subsystem visit order, then target sentences. A synthesized sentence
// describes a target but was not part of the optimised set (it appears only
// when the program ran without target covers).
struct ExplanationSentence {
    int candidate = -1;
    int state = -1;
    bool is_target = false;
    bool synthesized = false;
};

// Breadth-first walk from the initial state along the witness strategy,
// successors in ascending state order. Each non-target member designates the
// lowest-index selected sentence matching its state and chosen action; a
// sentence is emitted when first designated. Encountered targets are
// appended afterwards with their lowest-index matching terminal sentence,
// synthesizing one if the set has none. terminal_action < 0 skips target
// sentences.
std::vector<ExplanationSentence> order_sentences(
    const Mdp& m, const ReachabilityRequirement& req,
    const Counterexample& cex, const std::vector<CandidateSentence>& candidates,
    int terminal_action);

struct CheckResult {
    bool ok = true;
    std::vector<std::string> reasons;
};

// Soundness: every listed sentence describes at least one member, non-target
// sentences through the member's chosen action, target sentences through a
// target member and the terminal action.
CheckResult check_sound(const Mdp& m, const ReachabilityRequirement& req,
                        const Counterexample& cex,
                        const std::vector<CandidateSentence>& candidates,
                        const std::vector<ExplanationSentence>& ordered,
                        int terminal_action);

// Completeness: every non-target member designates exactly one sentence, and
// the listed non-target sentences are exactly the designated ones.
CheckResult check_complete(const Mdp& m, const ReachabilityRequirement& req,
                           const Counterexample& cex,
                           const std::vector<CandidateSentence>& candidates,
                           const std::vector<ExplanationSentence>& ordered);

// Per-state action lists a candidate set permits: action ids of enabled
// actions of non-target states that some sentence in `set` describes.
// Sorted ascending, empty for targets.
std::vector<std::vector<int>> covered_actions(
    const Mdp& m, const ReachabilityRequirement& req,
    const std::vector<CandidateSentence>& candidates,
    const std::vector<int>& set);

// Optimal positional behaviour over an action restriction. `values` holds
// the best reachability probability per state when only the allowed actions
// may be used and mass moving to a state without one is lost; `sigma` is a
// strategy attaining those values, defined for every non-target state with
// an allowed action. Policy iteration with exact linear-solve evaluation;
// deterministic (initial choice and ties go to the lowest action id).
struct RestrictedPolicy {
    std::vector<double> values;
    Strategy sigma;
};

RestrictedPolicy restricted_policy(const Mdp& m,
                                   const ReachabilityRequirement& req,
                                   const std::vector<std::vector<int>>& allowed);

// Best restricted reachability value of the initial state when only the
// actions described by `set` (candidate indices) may be used. Least
// fixpoint; states left without a permitted action contribute zero.
double restricted_set_value(const Mdp& m, const ReachabilityRequirement& req,
                            const std::vector<CandidateSentence>& candidates,
                            const std::vector<int>& set);

struct BruteForceResult {
    bool feasible = false;
    int min_sentences = 0;
    std::vector<int> best_set;  // candidate indices, ascending
};

// Reference optimum by subset enumeration, smallest size first and
// lexicographic within a size. A set is feasible when its permitted actions
// admit a strategy with restricted reachability above lambda + epsilon from
// the initial state, and, with describe_targets, every entered target is
// described by a terminal sentence of the set. Exponential; test-sized
// models only.
BruteForceResult brute_force_min_explanation(
    const Mdp& m, const ReachabilityRequirement& req,
    const std::vector<CandidateSentence>& candidates, double epsilon,
    bool describe_targets, int terminal_action);

}  // namespace cexplain
