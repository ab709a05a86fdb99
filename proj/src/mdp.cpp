#include "mdp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace cexplain {

const ActionChoice* Mdp::find_choice(int state, int action) const {
    if (state < 0 || state >= num_states) return nullptr;
    for (const auto& ch : choices[state])
        if (ch.action == action) return &ch;
    return nullptr;
}

bool Mdp::has_label(int state, int prop) const {
    const auto& ls = labels[state];
    return std::binary_search(ls.begin(), ls.end(), prop);
}

int Mdp::action_id(const std::string& name) const {
    for (int i = 0; i < (int)action_names.size(); ++i)
        if (action_names[i] == name) return i;
    return -1;
}

int Mdp::prop_id(const std::string& name) const {
    for (int i = 0; i < (int)prop_names.size(); ++i)
        if (prop_names[i] == name) return i;
    return -1;
}

std::vector<char> ReachabilityRequirement::resolve_targets(const Mdp& m) const {
    std::vector<char> flags(m.num_states, 0);
    if (target_prop) {
        if (*target_prop < 0 || *target_prop >= m.num_props())
            throw std::runtime_error("target proposition id out of range: " +
                                     std::to_string(*target_prop));
        for (int s = 0; s < m.num_states; ++s)
            if (m.has_label(s, *target_prop)) flags[s] = 1;
    }
    for (int s : target_states) {
        if (s < 0 || s >= m.num_states)
            throw std::runtime_error("target state id out of range: " + std::to_string(s));
        flags[s] = 1;
    }
    return flags;
}

ReachabilityRequirement ReachabilityRequirement::for_prop(int prop, double lambda) {
    ReachabilityRequirement r;
    r.target_prop = prop;
    r.lambda = lambda;
    return r;
}

ReachabilityRequirement ReachabilityRequirement::for_states(std::vector<int> states,
                                                            double lambda) {
    ReachabilityRequirement r;
    r.target_states = std::move(states);
    r.lambda = lambda;
    return r;
}

std::string ValidationReport::joined() const {
    std::ostringstream os;
    for (size_t i = 0; i < problems.size(); ++i) {
        if (i) os << "; ";
        os << problems[i];
    }
    return os.str();
}

static std::string state_ref(const Mdp& m, int s) {
    if (s >= 0 && s < (int)m.state_names.size() && !m.state_names[s].empty())
        return m.state_names[s] + " (" + std::to_string(s) + ")";
    return "state " + std::to_string(s);
}

ValidationReport validate_mdp(const Mdp& m, const ReachabilityRequirement* req) {
    ValidationReport rep;
    auto bad = [&rep](const std::string& msg) { rep.problems.push_back(msg); };

    if (m.num_states <= 0) bad("model has no states");
    if ((int)m.choices.size() != m.num_states) bad("choices table size mismatch");
    if ((int)m.labels.size() != m.num_states) bad("labels table size mismatch");
    if ((int)m.state_names.size() != m.num_states) bad("state name table size mismatch");
    if (!rep.ok()) return rep;

    if (m.initial < 0 || m.initial >= m.num_states)
        bad("initial state out of range: " + std::to_string(m.initial));

    for (int s = 0; s < m.num_states; ++s) {
        int prev_action = -1;
        for (const auto& ch : m.choices[s]) {
            if (ch.action < 0 || ch.action >= m.num_actions())
                bad(state_ref(m, s) + ": action id out of range " + std::to_string(ch.action));
            if (ch.action <= prev_action)
                bad(state_ref(m, s) + ": enabled actions not strictly sorted");
            prev_action = ch.action;
            double sum = 0.0;
            int prev_target = -1;
            if (ch.transitions.empty())
                bad(state_ref(m, s) + ", action " + std::to_string(ch.action) +
                    ": empty distribution");
            for (const auto& t : ch.transitions) {
                if (t.target < 0 || t.target >= m.num_states)
                    bad(state_ref(m, s) + ": successor out of range " +
                        std::to_string(t.target));
                if (t.target <= prev_target)
                    bad(state_ref(m, s) + ", action " + std::to_string(ch.action) +
                        ": successors not strictly sorted (duplicate successor?)");
                prev_target = t.target;
                if (!(t.prob > 0.0) || t.prob > 1.0 + kProbSumTol)
                    bad(state_ref(m, s) + ", action " + std::to_string(ch.action) +
                        ": probability outside (0,1]: " + std::to_string(t.prob));
                sum += t.prob;
            }
            if (std::fabs(sum - 1.0) > kProbSumTol)
                bad(state_ref(m, s) + ", action " + std::to_string(ch.action) +
                    ": distribution sums to " + std::to_string(sum));
        }
        for (size_t i = 0; i < m.labels[s].size(); ++i) {
            int p = m.labels[s][i];
            if (p < 0 || p >= m.num_props())
                bad(state_ref(m, s) + ": proposition id out of range " + std::to_string(p));
            if (i > 0 && p <= m.labels[s][i - 1])
                bad(state_ref(m, s) + ": labels not strictly sorted");
        }
    }

    if (req && rep.ok()) {
        if (req->lambda < 0.0 || req->lambda > 1.0)
            bad("lambda outside [0,1]: " + std::to_string(req->lambda));
        std::vector<char> targets;
        try {
            targets = req->resolve_targets(m);
        } catch (const std::exception& e) {
            bad(e.what());
            return rep;
        }
        if (std::count(targets.begin(), targets.end(), 1) == 0)
            bad("requirement resolves to an empty target set");
        std::vector<char> reach = reachable_states(m, targets);
        for (int s = 0; s < m.num_states; ++s)
            if (reach[s] && !targets[s] && m.choices[s].empty())
                bad(state_ref(m, s) + ": reachable non-target state with no enabled action");
    }
    return rep;
}

std::vector<char> reachable_states(const Mdp& m, const std::vector<char>& is_target) {
    std::vector<char> seen(m.num_states, 0);
    if (m.initial < 0 || m.initial >= m.num_states) return seen;
    std::deque<int> frontier{m.initial};
    seen[m.initial] = 1;
    while (!frontier.empty()) {
        int s = frontier.front();
        frontier.pop_front();
        if (is_target[s]) continue;  // paths end at the first target hit
        for (const auto& ch : m.choices[s])
            for (const auto& t : ch.transitions)
                if (!seen[t.target]) {
                    seen[t.target] = 1;
                    frontier.push_back(t.target);
                }
    }
    return seen;
}

std::vector<double> max_reach_probability(const Mdp& m,
                                          const ReachabilityRequirement& req,
                                          const ValueIterationConfig& cfg) {
    std::vector<char> targets = req.resolve_targets(m);
    std::vector<double> v(m.num_states, 0.0);
    for (int s = 0; s < m.num_states; ++s)
        if (targets[s]) v[s] = 1.0;

    std::vector<double> next(v);
    double residual = 0.0;
    for (long it = 0; it < cfg.max_iterations; ++it) {
        residual = 0.0;
        for (int s = 0; s < m.num_states; ++s) {
            if (targets[s]) continue;
            double best = 0.0;
            for (const auto& ch : m.choices[s]) {
                double sum = 0.0;
                for (const auto& t : ch.transitions) sum += t.prob * v[t.target];
                if (sum > best) best = sum;
            }
            next[s] = best;
            double d = best - v[s];  // monotone from below, d >= 0
            if (d > residual) residual = d;
        }
        v.swap(next);
        if (residual < cfg.tolerance) return v;
    }
    throw std::runtime_error("value iteration did not converge within " +
                             std::to_string(cfg.max_iterations) +
                             " iterations (last residual " + std::to_string(residual) + ")");
}

// Dense Gaussian elimination with partial pivoting; a is n x (n+1).
static std::vector<double> solve_dense(std::vector<std::vector<double>>& a) {
    int n = (int)a.size();
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-14)
            throw std::runtime_error("singular linear system in strategy evaluation");
        std::swap(a[col], a[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

std::vector<double> reach_probability_under_strategy(
    const Mdp& m, const Strategy& sigma, const ReachabilityRequirement& req,
    const std::vector<int>& restrict_states) {
    std::vector<char> targets = req.resolve_targets(m);
    std::vector<char> in(m.num_states, 0);
    for (int s : restrict_states) {
        if (s < 0 || s >= m.num_states)
            throw std::runtime_error("restrict set contains out-of-range state " +
                                     std::to_string(s));
        in[s] = 1;
    }

    std::vector<char> candidate(m.num_states, 0);
    for (int s = 0; s < m.num_states; ++s) {
        if (!in[s] || targets[s]) continue;
        auto it = sigma.find(s);
        if (it == sigma.end())
            throw std::runtime_error("strategy undefined at " + state_ref(m, s));
        if (!m.find_choice(s, it->second))
            throw std::runtime_error("strategy picks a disabled action at " + state_ref(m, s));
        candidate[s] = 1;
    }

    // States that cannot reach a restricted target under sigma have value 0
    // exactly; keeping them in the linear system would make it singular when
    // sigma loops inside the restriction.
    std::vector<char> can_reach(m.num_states, 0);
    for (int s = 0; s < m.num_states; ++s)
        if (in[s] && targets[s]) can_reach[s] = 1;
    for (bool grew = true; grew;) {
        grew = false;
        for (int s = 0; s < m.num_states; ++s) {
            if (!candidate[s] || can_reach[s]) continue;
            const ActionChoice* ch = m.find_choice(s, sigma.at(s));
            for (const auto& t : ch->transitions)
                if (t.prob > 0.0 && can_reach[t.target]) {
                    can_reach[s] = 1;
                    grew = true;
                    break;
                }
        }
    }

    // Unknowns: non-target states inside the restriction that can reach.
    std::vector<int> unknowns;
    std::vector<int> index(m.num_states, -1);
    for (int s = 0; s < m.num_states; ++s) {
        if (!candidate[s] || !can_reach[s]) continue;
        index[s] = (int)unknowns.size();
        unknowns.push_back(s);
    }

    int n = (int)unknowns.size();
    std::vector<double> result(m.num_states, 0.0);
    for (int s = 0; s < m.num_states; ++s)
        if (in[s] && targets[s]) result[s] = 1.0;
    if (n == 0) return result;

    if (m.num_states <= 2000) {
        // v = P v + b restricted to the unknowns; mass leaving the
        // restriction is dropped (absorbing non-target sink).
        std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
        for (int i = 0; i < n; ++i) {
            int s = unknowns[i];
            const ActionChoice* ch = m.find_choice(s, sigma.at(s));
            a[i][i] = 1.0;
            for (const auto& t : ch->transitions) {
                if (!in[t.target]) continue;
                if (targets[t.target])
                    a[i][n] += t.prob;
                else if (index[t.target] >= 0)
                    a[i][index[t.target]] -= t.prob;
            }
        }
        std::vector<double> x = solve_dense(a);
        for (int i = 0; i < n; ++i) result[unknowns[i]] = std::min(1.0, std::max(0.0, x[i]));
        return result;
    }

    // Large models: fixpoint iteration to a tight residual.
    std::vector<double> v(n, 0.0), nv(n, 0.0);
    for (long it = 0; it < 10000000; ++it) {
        double residual = 0.0;
        for (int i = 0; i < n; ++i) {
            int s = unknowns[i];
            const ActionChoice* ch = m.find_choice(s, sigma.at(s));
            double sum = 0.0;
            for (const auto& t : ch->transitions) {
                if (!in[t.target]) continue;
                if (targets[t.target])
                    sum += t.prob;
                else if (index[t.target] >= 0)
                    sum += t.prob * v[index[t.target]];
            }
            nv[i] = sum;
            residual = std::max(residual, std::fabs(sum - v[i]));
        }
        v.swap(nv);
        if (residual < 1e-12) break;
    }
    for (int i = 0; i < n; ++i) result[unknowns[i]] = v[i];
    return result;
}

Strategy argmax_strategy(const Mdp& m, const ReachabilityRequirement& req,
                         const std::vector<double>& values) {
    std::vector<char> targets = req.resolve_targets(m);
    Strategy sigma;
    for (int s = 0; s < m.num_states; ++s) {
        if (targets[s] || m.choices[s].empty()) continue;
        int best_action = -1;
        double best = -1.0;
        for (const auto& ch : m.choices[s]) {
            double sum = 0.0;
            for (const auto& t : ch.transitions) sum += t.prob * values[t.target];
            if (sum > best + 1e-12) {
                best = sum;
                best_action = ch.action;
            }
        }
        sigma[s] = best_action;
    }
    return sigma;
}

InducedSubsystem induced_subsystem(const Mdp& m, const Strategy& sigma,
                                   const std::vector<int>& members) {
    std::vector<int> sorted_members(members);
    std::sort(sorted_members.begin(), sorted_members.end());
    sorted_members.erase(std::unique(sorted_members.begin(), sorted_members.end()),
                         sorted_members.end());

    std::vector<int> remap(m.num_states, -1);
    for (size_t i = 0; i < sorted_members.size(); ++i) {
        int s = sorted_members[i];
        if (s < 0 || s >= m.num_states)
            throw std::runtime_error("member state out of range: " + std::to_string(s));
        remap[s] = (int)i;
    }
    if (m.initial < 0 || remap[m.initial] < 0)
        throw std::runtime_error("initial state is not a member of the subsystem");

    InducedSubsystem out;
    int n = (int)sorted_members.size();
    out.sink = n;
    out.to_original = sorted_members;
    out.to_original.push_back(-1);

    Mdp& sub = out.mdp;
    sub.num_states = n + 1;
    sub.initial = remap[m.initial];
    sub.action_names = m.action_names;
    sub.prop_names = m.prop_names;
    sub.choices.resize(n + 1);
    sub.labels.resize(n + 1);
    sub.state_names.resize(n + 1);

    auto redirect = [&](int s, const ActionChoice& ch) {
        ActionChoice rc;
        rc.action = ch.action;
        std::map<int, double> dist;
        for (const auto& t : ch.transitions) {
            int tgt = remap[t.target] >= 0 ? remap[t.target] : out.sink;
            dist[tgt] += t.prob;
        }
        for (const auto& [tgt, p] : dist) rc.transitions.push_back({tgt, p});
        return rc;
    };

    for (int i = 0; i < n; ++i) {
        int s = sorted_members[i];
        sub.state_names[i] = m.state_names[s];
        sub.labels[i] = m.labels[s];
        auto it = sigma.find(s);
        if (it != sigma.end()) {
            const ActionChoice* ch = m.find_choice(s, it->second);
            if (!ch)
                throw std::runtime_error("strategy picks a disabled action at " +
                                         state_ref(m, s));
            sub.choices[i].push_back(redirect(s, *ch));
        } else {
            for (const auto& ch : m.choices[s]) sub.choices[i].push_back(redirect(s, ch));
        }
    }
    sub.state_names[out.sink] = "sink";
    ActionChoice loop;
    loop.action = 0;  // self-loop under the first action of the shared alphabet
    loop.transitions.push_back({out.sink, 1.0});
    sub.choices[out.sink].push_back(loop);
    return out;
}

}  // namespace cexplain
