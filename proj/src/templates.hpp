#pragma once

#include <string>
#include <vector>

#include "mdp.hpp"

namespace cexplain {

// Structured-language vocabulary: phrase tables parallel to the model's
// action and proposition id spaces. Phrases slot into the fixed sentence
// frame "The robot <action phrase> when <proposition phrases>."
struct Vocabulary {
    std::vector<std::string> action_phrases;
    std::vector<std::string> prop_phrases;
};

// Checks that both tables cover the model's alphabets exactly and that no
// phrase is empty.
ValidationReport validate_vocabulary(const Vocabulary& v, const Mdp& m);

// One instantiable sentence: an action paired with a conjunction of
// propositions. Props are sorted ascending and non-empty for enumerated
// candidates. `index` is the rank in enumeration order and is the tie-break
// key everywhere sentences compete.
struct CandidateSentence {
    int action = -1;
    std::vector<int> props;
    int index = -1;
};

// Candidates ordered by action id, then by proposition sequence in
// lexicographic order ({0} < {0,1} < {0,2} < {1} < ...). Conjunctions range
// over 1..max_conjunction propositions. For max_conjunction = 1 the index of
// (action a, prop i) is a * num_props + i.
std::vector<CandidateSentence> enumerate_candidates(const Mdp& m,
                                                    int max_conjunction = 1);

// Candidate count without materialising the list:
// num_actions * sum_{k=1..max_conjunction} C(num_props, k).
long long count_candidates(int num_actions, int num_props, int max_conjunction);

// Renders "The robot <action> when <p1> and <p2> and ...". An empty
// conjunction (synthesised fallback only) drops the when-clause.
std::string instantiate(const CandidateSentence& c, const Vocabulary& v);

// True when every proposition in `props` holds in the state's label set.
bool props_hold(const Mdp& m, int state, const std::vector<int>& props);

// True when the sentence describes the pair (state, action): same action and
// the conjunction holds in the state.
bool candidate_covers(const CandidateSentence& c, const Mdp& m, int state,
                      int action);

}  // namespace cexplain
