#include "explain.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

namespace cexplain {

namespace {

std::string state_ref(const Mdp& m, int s) {
    return m.state_names[s] + " (" + std::to_string(s) + ")";
}

}  // namespace

Counterexample extract_counterexample(const Mdp& m,
                                      const ReachabilityRequirement& req,
                                      const MilpBuildResult& build,
                                      const std::vector<double>& x,
                                      const ExtractOptions& opt) {
    if ((int)x.size() != build.problem.num_vars())
        throw std::invalid_argument("solution size does not match the program");
    const std::vector<char> is_target = req.resolve_targets(m);

    Counterexample cex;
    for (std::size_t i = 0; i < build.mu_col.size(); ++i)
        if (x[build.mu_col[i]] > 0.5) cex.selected.push_back((int)i);
    cex.mu_probability = x[build.p_col[m.initial]];

    for (int s = 0; s < m.num_states; ++s)
        if (x[build.p_col[s]] > opt.membership_tol) cex.members.push_back(s);
    if (!std::binary_search(cex.members.begin(), cex.members.end(), m.initial))
        throw std::runtime_error("initial state fell out of the subsystem");

    std::vector<std::vector<int>> sel_actions(m.num_states);
    for (const auto& [key, col] : build.theta_col)
        if (x[col] > 0.5) sel_actions[key.first].push_back(key.second);

    for (int s : cex.members) {
        if (is_target[s]) continue;
        if (sel_actions[s].empty())
            throw std::runtime_error("member " + state_ref(m, s) +
                                     " has no selected action");
        // Action ids arrive ascending from the map, so the first best backup
        // is also the lowest id among ties.
        double best = -1.0;
        int pick = -1;
        for (int a : sel_actions[s]) {
            const ActionChoice* ch = m.find_choice(s, a);
            double sum = 0.0;
            for (const auto& tr : ch->transitions)
                sum += tr.prob * x[build.p_col[tr.target]];
            if (sum > best + 1e-12) {
                best = sum;
                pick = a;
            }
        }
        cex.sigma[s] = pick;
    }

    const std::vector<double> vals =
        reach_probability_under_strategy(m, cex.sigma, req, cex.members);
    cex.verified_probability = vals[m.initial];

    if (cex.verified_probability < cex.mu_probability - 1e-6)
        throw std::runtime_error(
            "verified probability falls short of the solver probability");
    if (cex.verified_probability < req.lambda + opt.epsilon - 1e-8)
        throw std::runtime_error(
            "verified probability falls below the violation threshold");
    return cex;
}

std::vector<ExplanationSentence> order_sentences(
    const Mdp& m, const ReachabilityRequirement& req,
    const Counterexample& cex, const std::vector<CandidateSentence>& candidates,
    int terminal_action) {
    const std::vector<char> is_target = req.resolve_targets(m);
    std::vector<char> member(m.num_states, 0);
    for (int s : cex.members) member[s] = 1;

    auto designated = [&](int s) {
        const int a = cex.sigma.at(s);
        for (int c : cex.selected)
            if (candidate_covers(candidates[c], m, s, a)) return c;
        return -1;
    };

    std::vector<ExplanationSentence> out;
    std::set<int> emitted;
    std::vector<int> targets_seen;
    std::vector<char> visited(m.num_states, 0);
    std::queue<int> q;
    if (!member[m.initial])
        throw std::runtime_error("initial state is not a member");
    visited[m.initial] = 1;
    q.push(m.initial);
    while (!q.empty()) {
        const int s = q.front();
        q.pop();
        if (is_target[s]) {
            targets_seen.push_back(s);
            continue;
        }
        const int d = designated(s);
        if (d < 0)
            throw std::runtime_error("no selected sentence describes " +
                                     state_ref(m, s) + " under action " +
                                     m.action_names[cex.sigma.at(s)]);
        if (emitted.insert(d).second) out.push_back({d, s, false, false});
        const ActionChoice* ch = m.find_choice(s, cex.sigma.at(s));
        if (!ch) continue;
        for (const auto& tr : ch->transitions) {
            if (tr.prob <= 0.0 || !member[tr.target] || visited[tr.target])
                continue;
            visited[tr.target] = 1;
            q.push(tr.target);
        }
    }

    if (terminal_action >= 0) {
        for (int t : targets_seen) {
            int found = -1;
            for (int c : cex.selected) {
                const CandidateSentence& cand = candidates[c];
                if (cand.action == terminal_action &&
                    props_hold(m, t, cand.props)) {
                    found = c;
                    break;
                }
            }
            bool synthesized = false;
            if (found < 0) {
                for (const auto& cand : candidates) {
                    if (cand.action == terminal_action &&
                        props_hold(m, t, cand.props)) {
                        found = cand.index;
                        synthesized = true;
                        break;
                    }
                }
            }
            if (found < 0) continue;
            if (emitted.insert(found).second)
                out.push_back({found, t, true, synthesized});
        }
    }
    return out;
}

CheckResult check_sound(const Mdp& m, const ReachabilityRequirement& req,
                        const Counterexample& cex,
                        const std::vector<CandidateSentence>& candidates,
                        const std::vector<ExplanationSentence>& ordered,
                        int terminal_action) {
    const std::vector<char> is_target = req.resolve_targets(m);
    CheckResult res;
    for (const auto& line : ordered) {
        const CandidateSentence& cand = candidates[line.candidate];
        bool matched = false;
        if (line.is_target) {
            if (cand.action != terminal_action) {
                res.reasons.push_back("target sentence " +
                                      std::to_string(cand.index) +
                                      " does not use the terminal action");
                continue;
            }
            for (int s : cex.members)
                if (is_target[s] && props_hold(m, s, cand.props)) {
                    matched = true;
                    break;
                }
        } else {
            for (int s : cex.members) {
                if (is_target[s]) continue;
                const auto it = cex.sigma.find(s);
                if (it == cex.sigma.end()) continue;
                if (candidate_covers(cand, m, s, it->second)) {
                    matched = true;
                    break;
                }
            }
        }
        if (!matched)
            res.reasons.push_back("sentence " + std::to_string(cand.index) +
                                  " describes no member of the subsystem");
    }
    res.ok = res.reasons.empty();
    return res;
}

CheckResult check_complete(const Mdp& m, const ReachabilityRequirement& req,
                           const Counterexample& cex,
                           const std::vector<CandidateSentence>& candidates,
                           const std::vector<ExplanationSentence>& ordered) {
    const std::vector<char> is_target = req.resolve_targets(m);
    CheckResult res;
    std::set<int> designated;
    for (int s : cex.members) {
        if (is_target[s]) continue;
        const auto it = cex.sigma.find(s);
        if (it == cex.sigma.end()) {
            res.reasons.push_back("member " + state_ref(m, s) +
                                  " has no chosen action");
            continue;
        }
        int d = -1;
        for (int c : cex.selected)
            if (candidate_covers(candidates[c], m, s, it->second)) {
                d = c;
                break;
            }
        if (d < 0)
            res.reasons.push_back("member " + state_ref(m, s) +
                                  " has no designated sentence");
        else
            designated.insert(d);
    }
    std::set<int> listed;
    for (const auto& line : ordered)
        if (!line.is_target) listed.insert(line.candidate);
    for (int c : listed)
        if (!designated.count(c))
            res.reasons.push_back("sentence " + std::to_string(c) +
                                  " is listed but designated by no member");
    for (int c : designated)
        if (!listed.count(c))
            res.reasons.push_back("designated sentence " + std::to_string(c) +
                                  " is missing from the explanation");
    res.ok = res.reasons.empty();
    return res;
}

std::vector<std::vector<int>> covered_actions(
    const Mdp& m, const ReachabilityRequirement& req,
    const std::vector<CandidateSentence>& candidates,
    const std::vector<int>& set) {
    const std::vector<char> is_target = req.resolve_targets(m);
    std::vector<std::vector<int>> allowed(m.num_states);
    for (int s = 0; s < m.num_states; ++s) {
        if (is_target[s]) continue;
        for (const auto& ch : m.choices[s])
            for (int c : set)
                if (candidate_covers(candidates[c], m, s, ch.action)) {
                    allowed[s].push_back(ch.action);
                    break;
                }
    }
    return allowed;
}

RestrictedPolicy restricted_policy(
    const Mdp& m, const ReachabilityRequirement& req,
    const std::vector<std::vector<int>>& allowed) {
    if ((int)allowed.size() != m.num_states)
        throw std::invalid_argument("allowed list size does not match");
    const std::vector<char> is_target = req.resolve_targets(m);

    RestrictedPolicy pol;
    std::vector<int> restrict_states;
    for (int s = 0; s < m.num_states; ++s) {
        if (is_target[s]) {
            restrict_states.push_back(s);
            continue;
        }
        if (allowed[s].empty()) continue;
        for (int a : allowed[s])
            if (!m.find_choice(s, a))
                throw std::invalid_argument(
                    "allowed action " + std::to_string(a) +
                    " is not enabled at " + state_ref(m, s));
        pol.sigma[s] = allowed[s].front();
        restrict_states.push_back(s);
    }

    pol.values.assign(m.num_states, 0.0);
    for (int round = 0; round < 512; ++round) {
        pol.values = reach_probability_under_strategy(m, pol.sigma, req,
                                                      restrict_states);
        bool improved = false;
        for (auto& [s, chosen] : pol.sigma) {
            double best = pol.values[s];
            int pick = chosen;
            for (int a : allowed[s]) {
                const ActionChoice* ch = m.find_choice(s, a);
                double sum = 0.0;
                for (const auto& tr : ch->transitions)
                    sum += tr.prob * pol.values[tr.target];
                if (sum > best + 1e-12) {
                    best = sum;
                    pick = a;
                }
            }
            if (pick != chosen) {
                chosen = pick;
                improved = true;
            }
        }
        if (!improved) return pol;
    }
    // A stalled improvement loop still leaves a valid certificate; the
    // values belong to the current strategy.
    pol.values =
        reach_probability_under_strategy(m, pol.sigma, req, restrict_states);
    return pol;
}

double restricted_set_value(const Mdp& m, const ReachabilityRequirement& req,
                            const std::vector<CandidateSentence>& candidates,
                            const std::vector<int>& set) {
    const std::vector<char> is_target = req.resolve_targets(m);
    const std::vector<std::vector<int>> allowed =
        covered_actions(m, req, candidates, set);
    std::vector<double> v(m.num_states, 0.0);
    for (int s = 0; s < m.num_states; ++s)
        if (is_target[s]) v[s] = 1.0;
    for (long it = 0; it < 1000000; ++it) {
        double delta = 0.0;
        for (int s = 0; s < m.num_states; ++s) {
            if (is_target[s]) continue;
            double best = 0.0;
            for (int a : allowed[s]) {
                const ActionChoice* ch = m.find_choice(s, a);
                double sum = 0.0;
                for (const auto& tr : ch->transitions)
                    sum += tr.prob * v[tr.target];
                best = std::max(best, sum);
            }
            if (best > v[s]) {
                delta = std::max(delta, best - v[s]);
                v[s] = best;
            }
        }
        if (delta < 1e-12) return v[m.initial];
    }
    throw std::runtime_error("restricted value iteration did not converge");
}

BruteForceResult brute_force_min_explanation(
    const Mdp& m, const ReachabilityRequirement& req,
    const std::vector<CandidateSentence>& candidates, double epsilon,
    bool describe_targets, int terminal_action) {
    if (describe_targets && terminal_action < 0)
        throw std::invalid_argument(
            "describe_targets requires a terminal action");
    if (candidates.size() > 20)
        throw std::invalid_argument(
            "the candidate list is too large for subset enumeration");
    const double threshold = req.lambda + epsilon;
    const std::vector<int> entered =
        describe_targets ? entered_target_states(m, req) : std::vector<int>();

    const int n = (int)candidates.size();
    BruteForceResult res;
    auto feasible = [&](const std::vector<int>& set) {
        for (int t : entered) {
            bool covered = false;
            for (int c : set)
                if (candidates[c].action == terminal_action &&
                    props_hold(m, t, candidates[c].props)) {
                    covered = true;
                    break;
                }
            if (!covered) return false;
        }
        return restricted_set_value(m, req, candidates, set) >= threshold;
    };

    for (int k = 0; k <= n; ++k) {
        // Lexicographically first combination of size k, then successors.
        std::vector<int> combo(k);
        for (int i = 0; i < k; ++i) combo[i] = i;
        while (true) {
            if (feasible(combo)) {
                res.feasible = true;
                res.min_sentences = k;
                res.best_set = combo;
                return res;
            }
            int i = k - 1;
            while (i >= 0 && combo[i] == n - k + i) --i;
            if (i < 0) break;
            ++combo[i];
            for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
        }
    }
    return res;
}

}  // namespace cexplain
