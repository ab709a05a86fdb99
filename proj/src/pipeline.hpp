#pragma once

#include <string>
#include <vector>

#include "explain.hpp"
#include "milp.hpp"
#include "solver.hpp"
#include "templates.hpp"

namespace cexplain {

// Requirement from command-line style arguments: `target` names either a
// proposition or a comma-separated list of states. Throws
// std::invalid_argument when it names neither.
ReachabilityRequirement parse_requirement(const Mdp& m,
                                          const std::string& target,
                                          double lambda);

// Terminal-action lookup: an explicit name must exist; an empty name means
// "stop" when the model has it, otherwise -1 (no target sentences).
int resolve_terminal_action(const Mdp& m, const std::string& name);

struct PipelineOptions {
    double epsilon = 1e-6;
    int max_conjunction = 1;
    bool describe_targets = true;  // dropped when no terminal action resolves
    std::string terminal_action;   // empty: "stop" when the model has it
    int cut_round_cap = 256;       // re-solves after spurious optima
    SolverConfig solver;
};

struct CheckReport {
    std::string requirement;
    double lambda = 0.0;
    double max_probability = 0.0;
    bool violated = false;
    double seconds = 0.0;
};

// Validates the model against the requirement and computes the maximal
// reachability probability of the initial state. Throws std::runtime_error
// on validation failures.
CheckReport run_check(const Mdp& m, const ReachabilityRequirement& req);

struct ExplainReport {
    std::string requirement;
    double lambda = 0.0;
    double epsilon = 0.0;
    double max_probability = 0.0;
    bool violated = false;
    bool describe_targets = false;
    int terminal_action = -1;
    long long candidate_count = 0;
    int num_continuous = 0;
    int num_theta = 0;
    int num_mu = 0;
    int num_rows = 0;
    std::vector<std::string> diagnostics;
    MilpStatus status = MilpStatus::Infeasible;
    bool has_solution = false;
    double objective = 0.0;
    double best_bound = 0.0;
    long nodes = 0;
    long lp_iterations = 0;
    int cut_rounds = 0;
    double seconds = 0.0;  // machine report only
    Counterexample cex;
    std::vector<double> member_values;  // certificate values, aligned with members
    std::vector<ExplanationSentence> ordered;
    std::vector<std::string> rendered;  // aligned with `ordered`
    CheckResult sound;
    CheckResult complete;
};

// Full pipeline: verification gate, sentence enumeration, MILP build and
// solve, certificate extraction, ordering and checking. Every solved
// sentence set is re-evaluated with the same restricted value iteration the
// brute-force oracle uses; a set that cannot truly clear lambda + epsilon
// (an end-component artifact of the inequality system) is excluded with an
// exact no-good row and the program is re-solved. The reported certificate
// is rebuilt from the policy-iteration optimum of the accepted set, so the
// verified probability is the exact restricted optimum.
ExplainReport run_explain(const Mdp& m, const Vocabulary& v,
                          const ReachabilityRequirement& req,
                          const PipelineOptions& opt = {});

struct BaselineReport {
    std::string requirement;
    double lambda = 0.0;
    double epsilon = 0.0;
    double max_probability = 0.0;
    bool violated = false;
    int num_continuous = 0;
    int num_binary = 0;
    int num_rows = 0;
    MilpStatus status = MilpStatus::Infeasible;
    bool has_solution = false;
    double objective = 0.0;  // number of member states
    double best_bound = 0.0;
    long nodes = 0;
    long lp_iterations = 0;
    int cut_rounds = 0;
    double seconds = 0.0;
    Counterexample cex;  // selected stays empty
    std::vector<double> member_values;
};

// State-minimal comparison pipeline with the same verify-and-cut loop over
// member-state sets.
BaselineReport run_baseline(const Mdp& m, const ReachabilityRequirement& req,
                            const PipelineOptions& opt = {});

// LP text of the chosen encoding exactly as built; `explanation` false picks
// the state-minimal baseline.
std::string export_encoding_lp(const Mdp& m, const ReachabilityRequirement& req,
                               bool explanation, const PipelineOptions& opt);

// Text reports carry no timings and are byte-stable for fixed inputs;
// machine reports are key=value lines including stats and wall-clock
// seconds. `digest` tags the input model (empty renders as "-").
std::string render_check_report(const CheckReport& r, bool machine,
                                const std::string& digest);
std::string render_explain_report(const Mdp& m, const ExplainReport& r,
                                  bool machine, const std::string& digest);
std::string render_baseline_report(const Mdp& m, const BaselineReport& r,
                                   bool machine, const std::string& digest);

// 64-bit FNV-1a over the raw bytes, rendered as 16 hex digits.
std::string fnv1a_digest(const std::string& bytes);

struct SeriesRow {
    int n = 0;
    int states = 0;
    long long transitions = 0;
    int binary_vars = 0;
    int real_vars = 0;  // p columns not fixed by the target equalities
    int cex_states = 0;
    int sentences = 0;
    double seconds = 0.0;
    std::string status;
};

// One explain-pipeline run on the default warehouse layout of side n.
SeriesRow run_series_row(int n, double lambda, const PipelineOptions& opt);

// Tab-separated table, one header line then one line per row.
std::string render_series(const std::vector<SeriesRow>& rows);

}  // namespace cexplain
