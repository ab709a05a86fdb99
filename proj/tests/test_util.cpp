#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cexplain::testutil {

std::string data_path(const std::string& name) {
    return std::string(CEXPLAIN_DATA_DIR) + "/" + name;
}

MdpBuilder::MdpBuilder(int num_states, int initial,
                       std::vector<std::string> actions,
                       std::vector<std::string> props) {
    m.num_states = num_states;
    m.initial = initial;
    for (int s = 0; s < num_states; ++s)
        m.state_names.push_back("q" + std::to_string(s));
    m.action_names = std::move(actions);
    m.prop_names = std::move(props);
    m.choices.resize(num_states);
    m.labels.resize(num_states);
}

MdpBuilder& MdpBuilder::choice(int state, int action,
                               std::vector<std::pair<int, double>> transitions) {
    ActionChoice ch;
    ch.action = action;
    for (const auto& [t, p] : transitions) ch.transitions.push_back({t, p});
    m.choices[state].push_back(std::move(ch));
    return *this;
}

MdpBuilder& MdpBuilder::label(int state, std::vector<int> props) {
    m.labels[state] = std::move(props);
    return *this;
}

Mdp MdpBuilder::build() const {
    Mdp out = m;
    for (auto& choices : out.choices) {
        for (auto& ch : choices)
            std::sort(ch.transitions.begin(), ch.transitions.end(),
                      [](const Transition& a, const Transition& b) {
                          return a.target < b.target;
                      });
        std::sort(choices.begin(), choices.end(),
                  [](const ActionChoice& a, const ActionChoice& b) {
                      return a.action < b.action;
                  });
    }
    for (auto& l : out.labels) std::sort(l.begin(), l.end());
    return out;
}

namespace {
enum FixtureAction { kEast = 0, kSouth = 1, kWest = 2, kNorth = 3, kStop = 4 };
}

Mdp fixture_mdp() {
    MdpBuilder b(9, 0, {"east", "south", "west", "north", "stop"},
                 {"in-charging-station", "east-of-charging-station",
                  "south-of-charging-station", "in-pick-up-area",
                  "north-of-pick-up-area", "west-of-pick-up-area",
                  "in-delivery-area", "south-of-delivery-area",
                  "west-of-delivery-area", "in-human-zone",
                  "north-of-human-zone", "in-magnetic-field"});
    b.m.state_names = {"s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "s9"};
    b.choice(0, kEast, {{1, 0.9}, {3, 0.1}})
        .choice(0, kSouth, {{1, 0.1}, {3, 0.9}})
        .choice(1, kEast, {{2, 0.9}, {4, 0.1}})
        .choice(2, kStop, {{2, 1.0}})
        .choice(3, kSouth, {{6, 0.9}, {4, 0.1}})
        .choice(4, kSouth, {{7, 0.9}, {5, 0.1}})
        .choice(4, kEast, {{5, 0.9}, {7, 0.1}})
        .choice(5, kNorth, {{2, 0.9}, {4, 0.1}})
        .choice(6, kEast, {{7, 0.9}, {6, 0.1}})
        .choice(7, kNorth, {{4, 0.9}, {8, 0.1}})
        .choice(7, kStop, {{7, 1.0}})
        .choice(8, kStop, {{8, 1.0}});
    b.label(0, {0, 4})
        .label(1, {1, 8})
        .label(2, {6})
        .label(3, {2, 4})
        .label(4, {4})
        .label(5, {7, 10})
        .label(6, {5})
        .label(7, {3})
        .label(8, {9});
    return b.build();
}

Vocabulary fixture_vocab() {
    Vocabulary v;
    v.action_phrases = {"moves east", "moves south", "moves west",
                        "moves north", "stops"};
    v.prop_phrases = {"in charging station",
                      "east of charging station",
                      "south of charging station",
                      "in pick-up area",
                      "north of pick-up area",
                      "west of pick-up area",
                      "in delivery area",
                      "south of delivery area",
                      "west of delivery area",
                      "in human zone",
                      "north of human zone",
                      "in magnetic field"};
    return v;
}

ReachabilityRequirement fixture_requirement() {
    return ReachabilityRequirement::for_prop(9, 0.3);
}

double oracle_reach(const Mdp& m, const Strategy& sigma,
                    const ReachabilityRequirement& req,
                    const std::vector<int>& restrict_states) {
    const std::vector<char> is_target = req.resolve_targets(m);
    std::vector<char> in(m.num_states, 0);
    for (int s : restrict_states) in[s] = 1;

    // States whose sigma-path can still hit a restricted target; everyone
    // else is exactly 0 and must stay out of the linear system.
    std::vector<char> live(m.num_states, 0);
    for (int s = 0; s < m.num_states; ++s)
        if (in[s] && is_target[s]) live[s] = 1;
    for (bool grew = true; grew;) {
        grew = false;
        for (int s = 0; s < m.num_states; ++s) {
            if (!in[s] || is_target[s] || live[s]) continue;
            const auto it = sigma.find(s);
            if (it == sigma.end()) continue;
            const ActionChoice* ch = m.find_choice(s, it->second);
            if (!ch) continue;
            for (const auto& t : ch->transitions)
                if (t.prob > 0 && live[t.target]) {
                    live[s] = 1;
                    grew = true;
                    break;
                }
        }
    }

    std::vector<int> index(m.num_states, -1);
    std::vector<int> unknowns;
    for (int s = 0; s < m.num_states; ++s)
        if (live[s] && !is_target[s]) {
            index[s] = (int)unknowns.size();
            unknowns.push_back(s);
        }
    const int k = (int)unknowns.size();
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (int i = 0; i < k; ++i) {
        const int s = unknowns[i];
        a[i][i] = 1.0;
        const ActionChoice* ch = m.find_choice(s, sigma.at(s));
        for (const auto& t : ch->transitions) {
            if (!in[t.target]) continue;
            if (is_target[t.target])
                a[i][k] += t.prob;
            else if (index[t.target] >= 0)
                a[i][index[t.target]] -= t.prob;
        }
    }
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-12)
            throw std::runtime_error("oracle: singular system");
        std::swap(a[piv], a[col]);
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> v(m.num_states, 0.0);
    for (int s = 0; s < m.num_states; ++s)
        if (in[s] && is_target[s]) v[s] = 1.0;
    for (int i = 0; i < k; ++i) v[unknowns[i]] = a[i][k] / a[i][i];
    return v[m.initial];
}

double oracle_max_reach(const Mdp& m, const ReachabilityRequirement& req) {
    const std::vector<char> is_target = req.resolve_targets(m);
    std::vector<int> free_states;
    for (int s = 0; s < m.num_states; ++s)
        if (!is_target[s] && !m.choices[s].empty()) free_states.push_back(s);
    std::vector<int> everything(m.num_states);
    for (int s = 0; s < m.num_states; ++s) everything[s] = s;

    double best = 0.0;
    std::vector<int> pick(free_states.size(), 0);
    for (;;) {
        Strategy sigma;
        for (std::size_t i = 0; i < free_states.size(); ++i) {
            const int s = free_states[i];
            sigma[s] = m.choices[s][pick[i]].action;
        }
        best = std::max(best, oracle_reach(m, sigma, req, everything));
        std::size_t i = 0;
        for (; i < free_states.size(); ++i) {
            if (++pick[i] < (int)m.choices[free_states[i]].size()) break;
            pick[i] = 0;
        }
        if (i == free_states.size()) break;
    }
    return best;
}

double mc_reach(const Mdp& m, const Strategy& sigma,
                const ReachabilityRequirement& req,
                const std::vector<int>& restrict_states, int runs,
                std::uint64_t seed, int max_steps) {
    const std::vector<char> is_target = req.resolve_targets(m);
    std::vector<char> in(m.num_states, 0);
    for (int s : restrict_states) in[s] = 1;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    long hits = 0;
    for (int run = 0; run < runs; ++run) {
        int s = m.initial;
        for (int step = 0; step < max_steps; ++step) {
            if (!in[s]) break;
            if (is_target[s]) {
                ++hits;
                break;
            }
            const auto it = sigma.find(s);
            if (it == sigma.end()) break;
            const ActionChoice* ch = m.find_choice(s, it->second);
            double u = unit(rng);
            int next = -1;
            for (const auto& t : ch->transitions) {
                u -= t.prob;
                if (u <= 0.0) {
                    next = t.target;
                    break;
                }
            }
            if (next < 0) next = ch->transitions.back().target;
            s = next;
        }
    }
    return (double)hits / (double)runs;
}

RandomModel random_model(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto pick = [&rng](int n) { return (int)(rng() % (std::uint64_t)n); };
    for (int attempt = 0; attempt < 400; ++attempt) {
        const int n = 2 + pick(7);
        const int num_props = 1 + pick(4);
        std::vector<std::string> props;
        for (int p = 0; p < num_props; ++p)
            props.push_back("p" + std::to_string(p));
        MdpBuilder b(n, 0, {"a", "b", "stop"}, props);

        for (int s = 0; s < n; ++s) {
            const int count = 1 + pick(3);
            std::vector<int> actions = {0, 1, 2};
            for (int i = 2; i > 0; --i) std::swap(actions[i], actions[pick(i + 1)]);
            actions.resize(count);
            std::sort(actions.begin(), actions.end());
            for (int a : actions) {
                if (a == 2) {
                    b.choice(s, a, {{s, 1.0}});
                    continue;
                }
                const int support = 1 + pick(std::min(3, n));
                std::vector<int> targets(n);
                for (int t = 0; t < n; ++t) targets[t] = t;
                for (int i = n - 1; i > 0; --i)
                    std::swap(targets[i], targets[pick(i + 1)]);
                targets.resize(support);
                std::sort(targets.begin(), targets.end());
                std::vector<int> weights(support);
                int total = 0;
                for (int& w : weights) {
                    w = 1 + pick(10);
                    total += w;
                }
                std::vector<std::pair<int, double>> ts;
                for (int i = 0; i < support; ++i)
                    ts.push_back({targets[i], (double)weights[i] / total});
                b.choice(s, a, std::move(ts));
            }
        }

        for (int s = 0; s < n; ++s) {
            std::vector<int> ls;
            for (int p = 0; p < num_props; ++p)
                if (pick(10) < 4) ls.push_back(p);
            if (ls.empty()) ls.push_back(pick(num_props));
            b.label(s, std::move(ls));
        }

        RandomModel out;
        out.mdp = b.build();
        const int target_prop = pick(num_props);
        bool has_target = false;
        for (int s = 0; s < n && !has_target; ++s)
            has_target = out.mdp.has_label(s, target_prop);
        if (!has_target) continue;
        out.req = ReachabilityRequirement::for_prop(target_prop, 0.0);
        out.pmax_initial = oracle_max_reach(out.mdp, out.req);
        if (out.pmax_initial < 0.02) continue;
        const double u = 0.25 + 0.65 * (double)(rng() % 1000) / 999.0;
        out.req.lambda = u * out.pmax_initial;
        return out;
    }
    throw std::runtime_error("random_model: no usable instance for seed");
}

TrapModel trap_model() {
    MdpBuilder b(5, 0, {"cycle", "out", "fwd", "stop"},
                 {"pc", "pm", "pt", "ps"});
    b.choice(0, 0, {{1, 1.0}});
    b.choice(0, 1, {{2, 0.5}, {4, 0.5}});
    b.choice(1, 0, {{0, 1.0}});
    b.choice(2, 2, {{3, 1.0}});
    b.choice(3, 3, {{3, 1.0}});
    b.choice(4, 3, {{4, 1.0}});
    b.label(0, {0});
    b.label(1, {0});
    b.label(2, {1});
    b.label(3, {2});
    b.label(4, {3});

    TrapModel out;
    out.mdp = b.build();
    out.mdp.state_names = {"A", "B", "M", "T", "S"};
    out.vocab.action_phrases = {"circles the loop", "leaves the loop",
                                "drives forward", "stops"};
    out.vocab.prop_phrases = {"on the loop", "at the midpoint",
                              "at the terminal", "on the siding"};
    out.req = ReachabilityRequirement::for_prop(2, 0.4);
    return out;
}

}  // namespace cexplain::testutil
