#include "templates.hpp"

#include <algorithm>

namespace cexplain {

ValidationReport validate_vocabulary(const Vocabulary& v, const Mdp& m) {
    ValidationReport rep;
    if ((int)v.action_phrases.size() != m.num_actions())
        rep.problems.push_back("vocabulary has " +
                               std::to_string(v.action_phrases.size()) +
                               " action phrases for " +
                               std::to_string(m.num_actions()) + " actions");
    if ((int)v.prop_phrases.size() != m.num_props())
        rep.problems.push_back("vocabulary has " +
                               std::to_string(v.prop_phrases.size()) +
                               " proposition phrases for " +
                               std::to_string(m.num_props()) +
                               " propositions");
    for (std::size_t i = 0; i < v.action_phrases.size(); ++i)
        if (v.action_phrases[i].empty())
            rep.problems.push_back("empty phrase for action " +
                                   std::to_string(i));
    for (std::size_t i = 0; i < v.prop_phrases.size(); ++i)
        if (v.prop_phrases[i].empty())
            rep.problems.push_back("empty phrase for proposition " +
                                   std::to_string(i));
    return rep;
}

std::vector<CandidateSentence> enumerate_candidates(const Mdp& m,
                                                    int max_conjunction) {
    std::vector<CandidateSentence> out;
    if (max_conjunction < 1) return out;
    const int np = m.num_props();
    std::vector<int> stack;
    // Depth-first extension yields the lexicographic order over prop
    // sequences directly.
    auto emit = [&](auto&& self, int action, int next) -> void {
        if (!stack.empty()) {
            CandidateSentence c;
            c.action = action;
            c.props = stack;
            c.index = (int)out.size();
            out.push_back(std::move(c));
        }
        if ((int)stack.size() == max_conjunction) return;
        for (int p = next; p < np; ++p) {
            stack.push_back(p);
            self(self, action, p + 1);
            stack.pop_back();
        }
    };
    for (int a = 0; a < m.num_actions(); ++a) emit(emit, a, 0);
    return out;
}

long long count_candidates(int num_actions, int num_props,
                           int max_conjunction) {
    if (max_conjunction < 1 || num_actions <= 0 || num_props <= 0) return 0;
    long long subsets = 0;
    long long binom = 1;  // C(num_props, k), starting at k = 0
    for (int k = 1; k <= std::min(max_conjunction, num_props); ++k) {
        binom = binom * (num_props - k + 1) / k;
        subsets += binom;
    }
    return (long long)num_actions * subsets;
}

std::string instantiate(const CandidateSentence& c, const Vocabulary& v) {
    std::string s = "The robot ";
    s += v.action_phrases.at(c.action);
    if (!c.props.empty()) {
        s += " when ";
        for (std::size_t i = 0; i < c.props.size(); ++i) {
            if (i > 0) s += " and ";
            s += v.prop_phrases.at(c.props[i]);
        }
    }
    s += ".";
    return s;
}

bool props_hold(const Mdp& m, int state, const std::vector<int>& props) {
    const auto& lab = m.labels[state];
    for (int p : props)
        if (!std::binary_search(lab.begin(), lab.end(), p)) return false;
    return true;
}

bool candidate_covers(const CandidateSentence& c, const Mdp& m, int state,
                      int action) {
    return c.action == action && props_hold(m, state, c.props);
}

}  // namespace cexplain
