#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cexplain {

// Transition probabilities are plain binary64 throughout; distributions must
// sum to 1 within kProbSumTol.
inline constexpr double kProbSumTol = 1e-9;

struct Transition {
    int target = -1;
    double prob = 0.0;
};

// One enabled action of a state together with its distribution.
// Transitions are kept sorted by target id and contain no duplicates.
struct ActionChoice {
    int action = -1;
    std::vector<Transition> transitions;
};

// MDP with dense integer ids for states, actions and propositions.
// Name tables run parallel to the id spaces. Per-state enabled actions are
// sorted by action id; labels are sorted proposition ids.
struct Mdp {
    int num_states = 0;
    int initial = -1;
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<std::string> prop_names;
    std::vector<std::vector<ActionChoice>> choices;  // indexed by state
    std::vector<std::vector<int>> labels;            // indexed by state

    int num_actions() const { return (int)action_names.size(); }
    int num_props() const { return (int)prop_names.size(); }
    const ActionChoice* find_choice(int state, int action) const;
    bool has_label(int state, int prop) const;
    int action_id(const std::string& name) const;  // -1 when absent
    int prop_id(const std::string& name) const;    // -1 when absent
};

// Reachability requirement Pr(eventually T) <= lambda; a violation is a
// strategy whose reachability probability exceeds lambda. Targets come either
// from a proposition or from an explicit state list.
struct ReachabilityRequirement {
    std::optional<int> target_prop;
    std::vector<int> target_states;
    double lambda = 0.0;

    // Resolves the target set against a model; flags indexed by state.
    std::vector<char> resolve_targets(const Mdp& m) const;

    static ReachabilityRequirement for_prop(int prop, double lambda);
    static ReachabilityRequirement for_states(std::vector<int> states, double lambda);
};

// Positional strategy: state -> chosen action id. Partial maps are allowed;
// operations state which states need a choice.
using Strategy = std::map<int, int>;

struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
    std::string joined() const;
};

// Structural validation: distribution sums, probability ranges, id ranges,
// duplicate successors, sorted-order invariants. When a requirement is given,
// also checks that targets resolve non-empty, lambda is within [0,1], and
// every non-target state reachable from the initial state has an enabled
// action.
ValidationReport validate_mdp(const Mdp& m,
                              const ReachabilityRequirement* req = nullptr);

struct ValueIterationConfig {
    double tolerance = 1e-10;
    long max_iterations = 1000000;
};

// Maximal reachability probabilities Pr^max(s |= eventually T) for every
// state, via value iteration from the zero vector (least fixpoint). Iterates
// are monotonically non-decreasing. Throws on non-convergence, reporting the
// last residual.
std::vector<double> max_reach_probability(const Mdp& m,
                                          const ReachabilityRequirement& req,
                                          const ValueIterationConfig& cfg = {});

// Reachability probabilities under a fixed strategy, restricted to a state
// set: probability mass leaving `restrict` is lost to an implicit absorbing
// non-target sink (no renormalisation). States outside `restrict` get 0.
// Every non-target state in `restrict` must have a strategy choice among its
// enabled actions. Solves the linear system directly for models up to 2000
// states, otherwise iterates to residual < 1e-12.
std::vector<double> reach_probability_under_strategy(
    const Mdp& m, const Strategy& sigma, const ReachabilityRequirement& req,
    const std::vector<int>& restrict_states);

// Greedy argmax strategy read off a value vector: for every non-target state
// with enabled actions, the lowest action id attaining the best one-step
// backup.
Strategy argmax_strategy(const Mdp& m, const ReachabilityRequirement& req,
                         const std::vector<double>& values);

struct InducedSubsystem {
    Mdp mdp;
    std::vector<int> to_original;  // subsystem state -> original state id
    int sink = -1;                 // sink state id in the subsystem
};

// Sub-MDP over `members` plus a fresh absorbing sink. Non-target members with
// a strategy choice keep only that action; other members keep all enabled
// actions. Mass leaving `members` is redirected to the sink. The initial
// state must be a member.
InducedSubsystem induced_subsystem(const Mdp& m, const Strategy& sigma,
                                   const std::vector<int>& members);

// Forward reachability over all enabled actions; expansion stops at target
// states (paths are cut at the first target hit).
std::vector<char> reachable_states(const Mdp& m,
                                   const std::vector<char>& is_target);

}  // namespace cexplain
