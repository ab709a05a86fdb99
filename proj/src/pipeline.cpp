#include "pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>

#include "lp_format.hpp"
#include "warehouse.hpp"

namespace cexplain {

namespace {

std::string fmt_num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Integer-valued objectives print without a decimal point.
std::string fmt_count(double v) {
    const long long r = std::llround(v);
    if (std::fabs(v - (double)r) < 1e-6) return std::to_string(r);
    return fmt_num(v);
}

std::string fmt_fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
}

const char* status_name(MilpStatus s) {
    switch (s) {
        case MilpStatus::Optimal: return "optimal";
        case MilpStatus::Infeasible: return "infeasible";
        case MilpStatus::NodeLimit: return "node-limit";
        case MilpStatus::TimeLimit: return "time-limit";
    }
    return "unknown";
}

std::string describe_requirement(const Mdp& m,
                                 const ReachabilityRequirement& req) {
    std::string t;
    if (req.target_prop) {
        t = m.prop_names[*req.target_prop];
    } else {
        t = "{";
        for (std::size_t i = 0; i < req.target_states.size(); ++i) {
            if (i) t += ", ";
            t += m.state_names[req.target_states[i]];
        }
        t += "}";
    }
    return "Pr(eventually " + t + ") <= " + fmt_num(req.lambda);
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

void require_valid(const Mdp& m, const ReachabilityRequirement& req) {
    const ValidationReport rep = validate_mdp(m, &req);
    if (!rep.ok()) throw std::runtime_error("invalid model: " + rep.joined());
}

// Clamped copy of a value vector written into the p columns; exact linear
// solves can sit a hair above the Pr^max + 1e-9 caps derived from value
// iteration.
void write_p(const MilpProblem& prob, const std::vector<int>& p_col,
             const std::vector<double>& values, std::vector<double>& x) {
    for (std::size_t s = 0; s < values.size(); ++s) {
        const double cap = prob.vars[p_col[s]].upper;
        x[p_col[s]] = values[s] < cap ? values[s] : cap;
    }
}

// Excludes exactly one 0/1 assignment of the given binary columns:
// sum of chosen minus sum of unchosen <= chosen - 1. Any other assignment
// keeps a slack of at least one.
MilpRow exact_point_cut(const std::vector<int>& cols,
                        const std::vector<char>& chosen) {
    MilpRow row;
    double count = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        row.terms.push_back({cols[i], chosen[i] ? 1.0 : -1.0});
        if (chosen[i]) count += 1.0;
    }
    std::sort(row.terms.begin(), row.terms.end());
    row.sense = RowSense::LessEq;
    row.rhs = count - 1.0;
    return row;
}

}  // namespace

ReachabilityRequirement parse_requirement(const Mdp& m,
                                          const std::string& target,
                                          double lambda) {
    if (target.empty())
        throw std::invalid_argument("no target given");
    const int prop = m.prop_id(target);
    if (prop >= 0) return ReachabilityRequirement::for_prop(prop, lambda);
    std::vector<int> states;
    std::size_t pos = 0;
    while (pos <= target.size()) {
        std::size_t comma = target.find(',', pos);
        if (comma == std::string::npos) comma = target.size();
        std::string name = target.substr(pos, comma - pos);
        const std::size_t b = name.find_first_not_of(" \t");
        const std::size_t e = name.find_last_not_of(" \t");
        name = b == std::string::npos ? std::string()
                                      : name.substr(b, e - b + 1);
        if (!name.empty()) {
            int id = -1;
            for (int s = 0; s < m.num_states; ++s)
                if (m.state_names[s] == name) {
                    id = s;
                    break;
                }
            if (id < 0)
                throw std::invalid_argument(
                    "target '" + target +
                    "' names neither a proposition nor states (unknown '" +
                    name + "')");
            states.push_back(id);
        }
        pos = comma + 1;
    }
    if (states.empty())
        throw std::invalid_argument("target '" + target + "' names no states");
    return ReachabilityRequirement::for_states(std::move(states), lambda);
}

int resolve_terminal_action(const Mdp& m, const std::string& name) {
    if (!name.empty()) {
        const int a = m.action_id(name);
        if (a < 0)
            throw std::invalid_argument("unknown terminal action '" + name +
                                        "'");
        return a;
    }
    return m.action_id("stop");
}

CheckReport run_check(const Mdp& m, const ReachabilityRequirement& req) {
    const auto start = std::chrono::steady_clock::now();
    require_valid(m, req);
    CheckReport rep;
    rep.requirement = describe_requirement(m, req);
    rep.lambda = req.lambda;
    rep.max_probability = max_reach_probability(m, req)[m.initial];
    rep.violated = rep.max_probability > req.lambda;
    rep.seconds = seconds_since(start);
    return rep;
}

ExplainReport run_explain(const Mdp& m, const Vocabulary& v,
                          const ReachabilityRequirement& req,
                          const PipelineOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    require_valid(m, req);
    const ValidationReport vrep = validate_vocabulary(v, m);
    if (!vrep.ok())
        throw std::runtime_error("invalid vocabulary: " + vrep.joined());

    ExplainReport rep;
    rep.requirement = describe_requirement(m, req);
    rep.lambda = req.lambda;
    rep.epsilon = opt.epsilon;

    const std::vector<double> pmax = max_reach_probability(m, req);
    rep.max_probability = pmax[m.initial];
    rep.violated = rep.max_probability > req.lambda;
    if (!rep.violated) {
        rep.seconds = seconds_since(start);
        return rep;
    }

    const std::vector<CandidateSentence> candidates =
        enumerate_candidates(m, opt.max_conjunction);
    rep.candidate_count = (long long)candidates.size();
    const int terminal = resolve_terminal_action(m, opt.terminal_action);
    rep.terminal_action = terminal;
    rep.describe_targets = opt.describe_targets && terminal >= 0;

    ExplanationMilpOptions mopt;
    mopt.epsilon = opt.epsilon;
    mopt.describe_targets = rep.describe_targets;
    mopt.terminal_action = terminal;
    mopt.max_probs = &pmax;
    const MilpBuildResult build =
        build_explanation_milp(m, req, candidates, mopt);
    rep.diagnostics = build.diagnostics;
    rep.num_continuous = m.num_states;
    rep.num_theta = (int)build.theta_col.size();
    rep.num_mu = (int)build.mu_col.size();
    rep.num_rows = build.problem.num_rows();

    MilpProblem work = build.problem;
    const std::vector<char> is_target = req.resolve_targets(m);

    // Two rows any integral solution satisfies: the initial state needs a
    // selected action and a sentence covering one of its pairs. They
    // tighten the root relaxation without moving the optimum.
    if (!is_target[m.initial]) {
        MilpRow sel;
        for (const auto& ch : m.choices[m.initial])
            sel.terms.push_back(
                {build.theta_col.at({m.initial, ch.action}), 1.0});
        std::sort(sel.terms.begin(), sel.terms.end());
        sel.sense = RowSense::GreaterEq;
        sel.rhs = 1.0;
        if (!sel.terms.empty()) work.rows.push_back(sel);

        std::set<int> cover_cols;
        for (const auto& ch : m.choices[m.initial])
            for (const auto& c : candidates)
                if (candidate_covers(c, m, m.initial, ch.action))
                    cover_cols.insert(build.mu_col[c.index]);
        if (!cover_cols.empty()) {
            MilpRow cov;
            for (int col : cover_cols) cov.terms.push_back({col, 1.0});
            cov.sense = RowSense::GreaterEq;
            cov.rhs = 1.0;
            work.rows.push_back(cov);
        }
    }

    SolverConfig cfg = opt.solver;
    {
        // Greedy incumbent: the best policy the whole vocabulary permits,
        // its pairs covered by a greedy set cover. One sentence usually
        // describes many pairs, and a small starting set lets the search
        // prune from the root instead of grinding the bound upward.
        std::vector<int> all(candidates.size());
        std::iota(all.begin(), all.end(), 0);
        const auto allowed = covered_actions(m, req, candidates, all);
        const RestrictedPolicy pol = restricted_policy(m, req, allowed);
        if (pol.values[m.initial] >= req.lambda + opt.epsilon) {
            std::vector<double> inc(work.num_vars(), 0.0);
            write_p(work, build.p_col, pol.values, inc);
            std::vector<std::pair<int, int>> pairs;
            for (const auto& [s, a] : pol.sigma) {
                if (pol.values[s] <= 0.0) continue;
                inc[build.theta_col.at({s, a})] = 1.0;
                pairs.emplace_back(s, a);
            }
            if (rep.describe_targets)
                for (int t : build.entered_targets)
                    pairs.emplace_back(t, terminal);
            const auto covers = [&](int c, std::size_t i) {
                return candidate_covers(candidates[c], m, pairs[i].first,
                                        pairs[i].second);
            };
            std::vector<char> covered(pairs.size(), 0);
            std::vector<int> chosen;
            std::size_t open_pairs = pairs.size();
            while (open_pairs > 0) {
                int best = -1;
                int best_hits = 0;
                for (const auto& c : candidates) {
                    int hits = 0;
                    for (std::size_t i = 0; i < pairs.size(); ++i)
                        if (!covered[i] && covers(c.index, i)) ++hits;
                    if (hits > best_hits) {
                        best_hits = hits;
                        best = c.index;
                    }
                }
                if (best < 0) break;  // a pair no sentence describes
                chosen.push_back(best);
                for (std::size_t i = 0; i < pairs.size(); ++i)
                    if (!covered[i] && covers(best, i)) {
                        covered[i] = 1;
                        --open_pairs;
                    }
            }
            if (open_pairs == 0) {
                // Later picks can absorb everything an early pick covered.
                std::vector<int> cnt(pairs.size(), 0);
                for (int c : chosen)
                    for (std::size_t i = 0; i < pairs.size(); ++i)
                        if (covers(c, i)) ++cnt[i];
                std::sort(chosen.begin(), chosen.end());
                for (int c : chosen) {
                    bool needed = false;
                    for (std::size_t i = 0; i < pairs.size() && !needed; ++i)
                        if (covers(c, i) && cnt[i] == 1) needed = true;
                    if (needed) {
                        inc[build.mu_col[c]] = 1.0;
                        continue;
                    }
                    for (std::size_t i = 0; i < pairs.size(); ++i)
                        if (covers(c, i)) --cnt[i];
                }
                cfg.initial_incumbent = std::move(inc);
            }
        }
    }

    MilpSolution sol;
    std::vector<int> sel;
    bool certified = false;
    for (int round = 0;; ++round) {
        sol = solve_milp(work, cfg);
        rep.nodes += sol.nodes;
        rep.lp_iterations += sol.lp_iterations;
        rep.status = sol.status;
        if (!sol.has_solution) break;
        sel.clear();
        for (std::size_t i = 0; i < build.mu_col.size(); ++i)
            if (sol.x[build.mu_col[i]] > 0.5) sel.push_back((int)i);
        const double vset = restricted_set_value(m, req, candidates, sel);
        if (vset >= req.lambda + opt.epsilon) {
            certified = true;
            break;
        }
        // The inequality system accepted a sentence set whose actions only
        // reach the targets through an end component; the set cannot really
        // clear the threshold. Exclude exactly this assignment and re-solve.
        if (sol.status != MilpStatus::Optimal) break;
        if (round >= opt.cut_round_cap)
            throw std::runtime_error(
                "cut rounds exhausted before reaching a verified optimum");
        std::vector<char> chosen(build.mu_col.size(), 0);
        for (int c : sel) chosen[c] = 1;
        work.rows.push_back(exact_point_cut(build.mu_col, chosen));
        ++rep.cut_rounds;
    }
    rep.num_rows = work.num_rows();

    if (!sol.has_solution && sol.status == MilpStatus::Infeasible) {
        std::string msg =
            "no explanation exists: no describable strategy exceeds lambda + "
            "epsilon";
        for (const auto& d : rep.diagnostics) msg += "\n  " + d;
        throw std::runtime_error(msg);
    }
    rep.has_solution = sol.has_solution && certified;
    rep.objective = sol.objective;
    rep.best_bound = sol.best_bound;
    if (rep.has_solution) {
        // Canonical certificate: exact optimum of the accepted set, so the
        // reported subsystem and probabilities match the independent
        // re-evaluation bit for bit.
        const auto allowed = covered_actions(m, req, candidates, sel);
        const RestrictedPolicy pol = restricted_policy(m, req, allowed);
        std::vector<double> xstar(work.num_vars(), 0.0);
        write_p(work, build.p_col, pol.values, xstar);
        for (const auto& [s, a] : pol.sigma)
            if (pol.values[s] > 0.0) xstar[build.theta_col.at({s, a})] = 1.0;
        for (int c : sel) xstar[build.mu_col[c]] = 1.0;
        if (!satisfies(build.problem, xstar, 1e-7))
            throw std::runtime_error(
                "internal: canonical certificate violates the program");
        ExtractOptions eopt;
        eopt.membership_tol = 0.0;
        eopt.epsilon = opt.epsilon;
        rep.cex = extract_counterexample(m, req, build, xstar, eopt);
        for (int s : rep.cex.members) rep.member_values.push_back(pol.values[s]);
        const int order_terminal = rep.describe_targets ? terminal : -1;
        rep.ordered =
            order_sentences(m, req, rep.cex, candidates, order_terminal);
        for (const auto& line : rep.ordered)
            rep.rendered.push_back(instantiate(candidates[line.candidate], v));
        rep.sound =
            check_sound(m, req, rep.cex, candidates, rep.ordered, order_terminal);
        rep.complete = check_complete(m, req, rep.cex, candidates, rep.ordered);
    }
    rep.seconds = seconds_since(start);
    return rep;
}

BaselineReport run_baseline(const Mdp& m, const ReachabilityRequirement& req,
                            const PipelineOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    require_valid(m, req);

    BaselineReport rep;
    rep.requirement = describe_requirement(m, req);
    rep.lambda = req.lambda;
    rep.epsilon = opt.epsilon;

    const std::vector<double> pmax = max_reach_probability(m, req);
    rep.max_probability = pmax[m.initial];
    rep.violated = rep.max_probability > req.lambda;
    if (!rep.violated) {
        rep.seconds = seconds_since(start);
        return rep;
    }

    BaselineMilpOptions mopt;
    mopt.epsilon = opt.epsilon;
    mopt.max_probs = &pmax;
    const MilpBuildResult build = build_minimal_state_milp(m, req, mopt);
    rep.num_continuous = m.num_states;
    rep.num_binary = build.problem.num_integral();
    rep.num_rows = build.problem.num_rows();

    MilpProblem work = build.problem;
    const std::vector<char> is_target = req.resolve_targets(m);
    if (!is_target[m.initial]) {
        MilpRow sel;
        for (const auto& ch : m.choices[m.initial])
            sel.terms.push_back(
                {build.theta_col.at({m.initial, ch.action}), 1.0});
        std::sort(sel.terms.begin(), sel.terms.end());
        sel.sense = RowSense::GreaterEq;
        sel.rhs = 1.0;
        if (!sel.terms.empty()) work.rows.push_back(sel);
        MilpRow xinit;
        xinit.terms.push_back({build.x_col[m.initial], 1.0});
        xinit.sense = RowSense::GreaterEq;
        xinit.rhs = 1.0;
        work.rows.push_back(xinit);
    }

    // Allowed actions when the members are exactly `mask`: non-target
    // members keep everything, everyone else loses all actions.
    const auto allowed_for = [&](const std::vector<char>& mask) {
        std::vector<std::vector<int>> allowed(m.num_states);
        for (int s = 0; s < m.num_states; ++s) {
            if (!mask[s] || is_target[s]) continue;
            for (const auto& ch : m.choices[s])
                allowed[s].push_back(ch.action);
        }
        return allowed;
    };

    SolverConfig cfg = opt.solver;
    {
        std::vector<char> all(m.num_states, 1);
        const RestrictedPolicy pol = restricted_policy(m, req, allowed_for(all));
        if (pol.values[m.initial] >= req.lambda + opt.epsilon) {
            std::vector<double> inc(work.num_vars(), 0.0);
            write_p(work, build.p_col, pol.values, inc);
            for (const auto& [s, a] : pol.sigma)
                if (pol.values[s] > 0.0) inc[build.theta_col.at({s, a})] = 1.0;
            for (int s = 0; s < m.num_states; ++s)
                if (pol.values[s] > 0.0) inc[build.x_col[s]] = 1.0;
            cfg.initial_incumbent = std::move(inc);
        }
    }

    MilpSolution sol;
    std::vector<char> mask(m.num_states, 0);
    RestrictedPolicy pol;
    bool certified = false;
    for (int round = 0;; ++round) {
        sol = solve_milp(work, cfg);
        rep.nodes += sol.nodes;
        rep.lp_iterations += sol.lp_iterations;
        rep.status = sol.status;
        if (!sol.has_solution) break;
        for (int s = 0; s < m.num_states; ++s)
            mask[s] = sol.x[build.x_col[s]] > 0.5 ? 1 : 0;
        pol = restricted_policy(m, req, allowed_for(mask));
        if (pol.values[m.initial] >= req.lambda + opt.epsilon) {
            certified = true;
            break;
        }
        if (sol.status != MilpStatus::Optimal) break;
        if (round >= opt.cut_round_cap)
            throw std::runtime_error(
                "cut rounds exhausted before reaching a verified optimum");
        work.rows.push_back(exact_point_cut(build.x_col, mask));
        ++rep.cut_rounds;
    }
    rep.num_rows = work.num_rows();

    if (!sol.has_solution && sol.status == MilpStatus::Infeasible)
        throw std::runtime_error(
            "no subsystem exists: no strategy exceeds lambda + epsilon");
    rep.has_solution = sol.has_solution && certified;
    rep.objective = sol.objective;
    rep.best_bound = sol.best_bound;
    if (rep.has_solution) {
        std::vector<double> xstar(work.num_vars(), 0.0);
        write_p(work, build.p_col, pol.values, xstar);
        for (const auto& [s, a] : pol.sigma)
            if (pol.values[s] > 0.0) xstar[build.theta_col.at({s, a})] = 1.0;
        for (int s = 0; s < m.num_states; ++s)
            if (mask[s]) xstar[build.x_col[s]] = 1.0;
        if (!satisfies(build.problem, xstar, 1e-7))
            throw std::runtime_error(
                "internal: canonical certificate violates the program");
        Counterexample cex;
        for (int s = 0; s < m.num_states; ++s)
            if (mask[s]) cex.members.push_back(s);
        cex.sigma = pol.sigma;
        cex.mu_probability = pol.values[m.initial];
        cex.verified_probability =
            reach_probability_under_strategy(m, cex.sigma, req,
                                             cex.members)[m.initial];
        if (cex.verified_probability < req.lambda + opt.epsilon - 1e-8)
            throw std::runtime_error(
                "internal: verified probability fell below the threshold");
        for (int s : cex.members) rep.member_values.push_back(pol.values[s]);
        rep.cex = std::move(cex);
    }
    rep.seconds = seconds_since(start);
    return rep;
}

std::string export_encoding_lp(const Mdp& m, const ReachabilityRequirement& req,
                               bool explanation, const PipelineOptions& opt) {
    require_valid(m, req);
    const std::vector<double> pmax = max_reach_probability(m, req);
    if (explanation) {
        const std::vector<CandidateSentence> candidates =
            enumerate_candidates(m, opt.max_conjunction);
        const int terminal = resolve_terminal_action(m, opt.terminal_action);
        ExplanationMilpOptions mopt;
        mopt.epsilon = opt.epsilon;
        mopt.describe_targets = opt.describe_targets && terminal >= 0;
        mopt.terminal_action = terminal;
        mopt.max_probs = &pmax;
        return export_lp(build_explanation_milp(m, req, candidates, mopt).problem);
    }
    BaselineMilpOptions mopt;
    mopt.epsilon = opt.epsilon;
    mopt.max_probs = &pmax;
    return export_lp(build_minimal_state_milp(m, req, mopt).problem);
}

namespace {

void kv(std::string& out, const std::string& key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
}

std::string digest_or_dash(const std::string& digest) {
    return digest.empty() ? std::string("-") : digest;
}

std::string name_list(const Mdp& m, const std::vector<int>& states,
                      const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i) out += sep;
        out += m.state_names[states[i]];
    }
    return out;
}

std::string sigma_list(const Mdp& m, const Strategy& sigma, const char* sep) {
    std::string out;
    bool first = true;
    for (const auto& [s, a] : sigma) {
        if (!first) out += sep;
        first = false;
        out += m.state_names[s] + ":" + m.action_names[a];
    }
    return out;
}

std::string value_list(const Mdp& m, const std::vector<int>& members,
                       const std::vector<double>& values, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) out += sep;
        out += m.state_names[members[i]] + ":" + fmt_num(values[i]);
    }
    return out;
}

}  // namespace

std::string render_check_report(const CheckReport& r, bool machine,
                                const std::string& digest) {
    std::string out;
    if (machine) {
        kv(out, "report", "check");
        kv(out, "model_digest", digest_or_dash(digest));
        kv(out, "requirement", r.requirement);
        kv(out, "lambda", fmt_num(r.lambda));
        kv(out, "max_probability", fmt_num(r.max_probability));
        kv(out, "violated", r.violated ? "1" : "0");
        kv(out, "seconds", fmt_fixed3(r.seconds));
        return out;
    }
    out += "requirement: " + r.requirement + "\n";
    out += "max probability: " + fmt_num(r.max_probability) + "\n";
    out += std::string("verdict: ") + (r.violated ? "violated" : "holds") + "\n";
    return out;
}

std::string render_explain_report(const Mdp& m, const ExplainReport& r,
                                  bool machine, const std::string& digest) {
    std::string out;
    if (machine) {
        kv(out, "report", "explain");
        kv(out, "model_digest", digest_or_dash(digest));
        kv(out, "requirement", r.requirement);
        kv(out, "lambda", fmt_num(r.lambda));
        kv(out, "epsilon", fmt_num(r.epsilon));
        kv(out, "max_probability", fmt_num(r.max_probability));
        kv(out, "violated", r.violated ? "1" : "0");
        if (r.violated) {
            kv(out, "describe_targets", r.describe_targets ? "1" : "0");
            kv(out, "terminal_action",
               r.terminal_action >= 0 ? m.action_names[r.terminal_action] : "-");
            kv(out, "candidates", std::to_string(r.candidate_count));
            kv(out, "continuous_vars", std::to_string(r.num_continuous));
            kv(out, "theta_vars", std::to_string(r.num_theta));
            kv(out, "mu_vars", std::to_string(r.num_mu));
            kv(out, "rows", std::to_string(r.num_rows));
            kv(out, "status", status_name(r.status));
            kv(out, "has_solution", r.has_solution ? "1" : "0");
            kv(out, "nodes", std::to_string(r.nodes));
            kv(out, "lp_iterations", std::to_string(r.lp_iterations));
            kv(out, "cut_rounds", std::to_string(r.cut_rounds));
            if (r.has_solution) {
                kv(out, "objective", fmt_count(r.objective));
                kv(out, "best_bound", fmt_num(r.best_bound));
                kv(out, "selected_sentences",
                   std::to_string(r.cex.selected.size()));
                kv(out, "listed_sentences", std::to_string(r.ordered.size()));
                kv(out, "members", name_list(m, r.cex.members, ","));
                kv(out, "sigma", sigma_list(m, r.cex.sigma, ","));
                kv(out, "p", value_list(m, r.cex.members, r.member_values, ","));
                kv(out, "initial_probability", fmt_num(r.cex.mu_probability));
                kv(out, "verified_probability",
                   fmt_num(r.cex.verified_probability));
                kv(out, "sound", r.sound.ok ? "1" : "0");
                kv(out, "complete", r.complete.ok ? "1" : "0");
                for (std::size_t i = 0; i < r.ordered.size(); ++i) {
                    const auto& line = r.ordered[i];
                    kv(out, "sentence." + std::to_string(i + 1),
                       "candidate:" + std::to_string(line.candidate) +
                           " state:" + m.state_names[line.state] +
                           " target:" + (line.is_target ? "1" : "0") +
                           " synthesized:" + (line.synthesized ? "1" : "0") +
                           " text:" + r.rendered[i]);
                }
            }
            kv(out, "diagnostics", std::to_string(r.diagnostics.size()));
            for (std::size_t i = 0; i < r.diagnostics.size(); ++i)
                kv(out, "diagnostic." + std::to_string(i + 1), r.diagnostics[i]);
        }
        kv(out, "seconds", fmt_fixed3(r.seconds));
        return out;
    }

    if (!r.violated) {
        out += "no counterexample: the requirement holds\n";
        out += "requirement: " + r.requirement + "\n";
        out += "max probability: " + fmt_num(r.max_probability) + "\n";
        return out;
    }
    if (!r.has_solution) {
        out += "counterexample search stopped at the ";
        out += status_name(r.status);
        out += "\n";
        out += "requirement: " + r.requirement + "\n";
        out += "max probability: " + fmt_num(r.max_probability) + "\n";
        out += "epsilon: " + fmt_num(r.epsilon) + "\n";
        out += "best bound: " + fmt_num(r.best_bound) + "\n";
        return out;
    }
    out += "explanation\n";
    out += "===========\n";
    for (std::size_t i = 0; i < r.rendered.size(); ++i) {
        char head[16];
        std::snprintf(head, sizeof head, "%3zu. ", i + 1);
        out += head;
        out += r.rendered[i];
        out += "\n";
    }
    if (r.rendered.empty()) out += "(no sentences)\n";
    out += "\n";
    out += "requirement: " + r.requirement + "\n";
    out += "max probability: " + fmt_num(r.max_probability) + "\n";
    out += "epsilon: " + fmt_num(r.epsilon) + "\n";
    out += std::string("status: ") + status_name(r.status) + "\n";
    out += "selected sentences: " + std::to_string(r.cex.selected.size()) + "\n";
    out += "listed sentences: " + std::to_string(r.ordered.size()) + "\n";
    out += "members (" + std::to_string(r.cex.members.size()) +
           "): " + name_list(m, r.cex.members, " ") + "\n";
    out += "strategy: " + sigma_list(m, r.cex.sigma, " ") + "\n";
    out += "p: " + value_list(m, r.cex.members, r.member_values, " ") + "\n";
    out += "initial probability: " + fmt_num(r.cex.mu_probability) + "\n";
    out += "verified probability: " + fmt_num(r.cex.verified_probability) + "\n";
    out += std::string("sound: ") + (r.sound.ok ? "yes" : "no") + "\n";
    out += std::string("complete: ") + (r.complete.ok ? "yes" : "no") + "\n";
    if (!r.diagnostics.empty())
        out += "notes: " + std::to_string(r.diagnostics.size()) + "\n";
    return out;
}

std::string render_baseline_report(const Mdp& m, const BaselineReport& r,
                                   bool machine, const std::string& digest) {
    std::string out;
    if (machine) {
        kv(out, "report", "baseline");
        kv(out, "model_digest", digest_or_dash(digest));
        kv(out, "requirement", r.requirement);
        kv(out, "lambda", fmt_num(r.lambda));
        kv(out, "epsilon", fmt_num(r.epsilon));
        kv(out, "max_probability", fmt_num(r.max_probability));
        kv(out, "violated", r.violated ? "1" : "0");
        if (r.violated) {
            kv(out, "continuous_vars", std::to_string(r.num_continuous));
            kv(out, "binary_vars", std::to_string(r.num_binary));
            kv(out, "rows", std::to_string(r.num_rows));
            kv(out, "status", status_name(r.status));
            kv(out, "has_solution", r.has_solution ? "1" : "0");
            kv(out, "nodes", std::to_string(r.nodes));
            kv(out, "lp_iterations", std::to_string(r.lp_iterations));
            kv(out, "cut_rounds", std::to_string(r.cut_rounds));
            if (r.has_solution) {
                kv(out, "objective", fmt_count(r.objective));
                kv(out, "best_bound", fmt_num(r.best_bound));
                kv(out, "members", name_list(m, r.cex.members, ","));
                kv(out, "sigma", sigma_list(m, r.cex.sigma, ","));
                kv(out, "p", value_list(m, r.cex.members, r.member_values, ","));
                kv(out, "initial_probability", fmt_num(r.cex.mu_probability));
                kv(out, "verified_probability",
                   fmt_num(r.cex.verified_probability));
            }
        }
        kv(out, "seconds", fmt_fixed3(r.seconds));
        return out;
    }
    if (!r.violated) {
        out += "no counterexample: the requirement holds\n";
        out += "requirement: " + r.requirement + "\n";
        out += "max probability: " + fmt_num(r.max_probability) + "\n";
        return out;
    }
    if (!r.has_solution) {
        out += "subsystem search stopped at the ";
        out += status_name(r.status);
        out += "\n";
        out += "requirement: " + r.requirement + "\n";
        out += "max probability: " + fmt_num(r.max_probability) + "\n";
        out += "epsilon: " + fmt_num(r.epsilon) + "\n";
        out += "best bound: " + fmt_num(r.best_bound) + "\n";
        return out;
    }
    out += "state-minimal subsystem\n";
    out += "=======================\n";
    out += "requirement: " + r.requirement + "\n";
    out += "max probability: " + fmt_num(r.max_probability) + "\n";
    out += "epsilon: " + fmt_num(r.epsilon) + "\n";
    out += std::string("status: ") + status_name(r.status) + "\n";
    out += "states: " + fmt_count(r.objective) + "\n";
    out += "members (" + std::to_string(r.cex.members.size()) +
           "): " + name_list(m, r.cex.members, " ") + "\n";
    out += "strategy: " + sigma_list(m, r.cex.sigma, " ") + "\n";
    out += "p: " + value_list(m, r.cex.members, r.member_values, " ") + "\n";
    out += "initial probability: " + fmt_num(r.cex.mu_probability) + "\n";
    out += "verified probability: " + fmt_num(r.cex.verified_probability) + "\n";
    return out;
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return std::string(buf);
}

SeriesRow run_series_row(int n, double lambda, const PipelineOptions& opt) {
    SeriesRow row;
    row.n = n;
    const WarehouseInstance wh = generate_warehouse(default_layout(n));
    row.states = wh.mdp.num_states;
    for (const auto& state_choices : wh.mdp.choices)
        for (const auto& ch : state_choices)
            row.transitions += (long long)ch.transitions.size();
    const ReachabilityRequirement req =
        ReachabilityRequirement::for_prop(wh.target_prop, lambda);
    PipelineOptions po = opt;
    po.terminal_action = wh.mdp.action_names[wh.terminal_action];
    try {
        const ExplainReport er = run_explain(wh.mdp, wh.vocab, req, po);
        row.binary_vars = er.num_theta + er.num_mu;
        const std::vector<char> is_target = req.resolve_targets(wh.mdp);
        int targets = 0;
        for (char t : is_target) targets += t ? 1 : 0;
        row.real_vars = er.num_continuous - targets;
        row.seconds = er.seconds;
        if (!er.violated) {
            row.status = "holds";
        } else {
            row.status = status_name(er.status);
            if (er.has_solution) {
                row.cex_states = (int)er.cex.members.size();
                row.sentences = (int)er.ordered.size();
            }
        }
    } catch (const std::exception&) {
        row.status = "error";
    }
    return row;
}

std::string render_series(const std::vector<SeriesRow>& rows) {
    std::string out =
        "n\tstates\ttransitions\tbinary_vars\treal_vars\tcex_states\t"
        "sentences\tseconds\tstatus\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "\t" + std::to_string(r.states) + "\t" +
               std::to_string(r.transitions) + "\t" +
               std::to_string(r.binary_vars) + "\t" +
               std::to_string(r.real_vars) + "\t" +
               std::to_string(r.cex_states) + "\t" +
               std::to_string(r.sentences) + "\t" + fmt_fixed3(r.seconds) +
               "\t" + r.status + "\n";
    }
    return out;
}

}  // namespace cexplain
