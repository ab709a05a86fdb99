#include "model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cexplain {

namespace {

std::string fmt_prob(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Parser {
    ModelFile out;
    std::map<std::string, int> state_of, action_of, prop_of;
    std::set<std::pair<int, int>> seen_pairs;
    std::vector<std::set<int>> label_sets;
    bool have_initial = false;
    int lineno = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " +
                                 what);
    }

    int need(const std::map<std::string, int>& table, const std::string& name,
             const char* kind) const {
        auto it = table.find(name);
        if (it == table.end())
            fail(std::string("unknown ") + kind + " '" + name + "'");
        return it->second;
    }
};

}  // namespace

ModelFile parse_model(const std::string& text) {
    Parser ps;
    Mdp& m = ps.out.mdp;
    enum Section {
        None,
        States,
        Actions,
        Props,
        Initial,
        Transitions,
        Labels,
        Vocab
    } section = None;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++ps.lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[states]")
                section = States;
            else if (line == "[actions]")
                section = Actions;
            else if (line == "[propositions]")
                section = Props;
            else if (line == "[initial]")
                section = Initial;
            else if (line == "[transitions]")
                section = Transitions;
            else if (line == "[labels]")
                section = Labels;
            else if (line == "[vocabulary]")
                section = Vocab;
            else
                ps.fail("unknown section " + line);
            continue;
        }

        std::istringstream toks(line);
        std::string tok;
        switch (section) {
            case None:
                ps.fail("content before the first section");
            case States:
                while (toks >> tok) {
                    if (!ps.state_of.emplace(tok, m.num_states).second)
                        ps.fail("duplicate state '" + tok + "'");
                    m.state_names.push_back(tok);
                    ++m.num_states;
                }
                break;
            case Actions:
                while (toks >> tok) {
                    if (!ps.action_of
                             .emplace(tok, (int)m.action_names.size())
                             .second)
                        ps.fail("duplicate action '" + tok + "'");
                    m.action_names.push_back(tok);
                }
                break;
            case Props:
                while (toks >> tok) {
                    if (!ps.prop_of.emplace(tok, (int)m.prop_names.size())
                             .second)
                        ps.fail("duplicate proposition '" + tok + "'");
                    m.prop_names.push_back(tok);
                }
                break;
            case Initial: {
                if (ps.have_initial) ps.fail("initial state set twice");
                toks >> tok;
                m.initial = ps.need(ps.state_of, tok, "state");
                std::string extra;
                if (toks >> extra) ps.fail("initial takes a single state");
                ps.have_initial = true;
                break;
            }
            case Transitions: {
                m.choices.resize(m.num_states);
                std::string sname, aname;
                if (!(toks >> sname >> aname))
                    ps.fail("transition needs a state and an action");
                const int s = ps.need(ps.state_of, sname, "state");
                const int a = ps.need(ps.action_of, aname, "action");
                if (!ps.seen_pairs.insert({s, a}).second)
                    ps.fail("duplicate transition block for " + sname + " " +
                            aname);
                ActionChoice ch;
                ch.action = a;
                std::set<int> succ;
                std::string tname, pstr;
                while (toks >> tname) {
                    if (!(toks >> pstr))
                        ps.fail("successor '" + tname +
                                "' has no probability");
                    const int t = ps.need(ps.state_of, tname, "state");
                    char* end = nullptr;
                    const double p = std::strtod(pstr.c_str(), &end);
                    if (end != pstr.c_str() + pstr.size())
                        ps.fail("bad probability '" + pstr + "'");
                    if (!succ.insert(t).second)
                        ps.fail("duplicate successor '" + tname + "'");
                    ch.transitions.push_back({t, p});
                }
                if (ch.transitions.empty())
                    ps.fail("transition block has no successors");
                std::sort(ch.transitions.begin(), ch.transitions.end(),
                          [](const Transition& x, const Transition& y) {
                              return x.target < y.target;
                          });
                m.choices[s].push_back(std::move(ch));
                break;
            }
            case Labels: {
                ps.label_sets.resize(m.num_states);
                toks >> tok;
                const int s = ps.need(ps.state_of, tok, "state");
                while (toks >> tok)
                    ps.label_sets[s].insert(
                        ps.need(ps.prop_of, tok, "proposition"));
                break;
            }
            case Vocab: {
                toks >> tok;
                std::string name;
                if (!(toks >> name)) ps.fail("vocabulary entry needs a name");
                std::string phrase;
                std::getline(toks, phrase);
                phrase = trim(phrase);
                if (phrase.empty())
                    ps.fail("vocabulary entry for '" + name +
                            "' has no phrase");
                if (tok == "action") {
                    const int a = ps.need(ps.action_of, name, "action");
                    ps.out.vocab.action_phrases.resize(m.action_names.size());
                    ps.out.vocab.action_phrases[a] = phrase;
                } else if (tok == "prop") {
                    const int p = ps.need(ps.prop_of, name, "proposition");
                    ps.out.vocab.prop_phrases.resize(m.prop_names.size());
                    ps.out.vocab.prop_phrases[p] = phrase;
                } else {
                    ps.fail("vocabulary entries start with action or prop");
                }
                break;
            }
        }
    }

    if (!ps.have_initial) throw std::runtime_error("no [initial] section");
    m.choices.resize(m.num_states);
    ps.label_sets.resize(m.num_states);
    for (auto& choices : m.choices)
        std::sort(choices.begin(), choices.end(),
                  [](const ActionChoice& x, const ActionChoice& y) {
                      return x.action < y.action;
                  });
    m.labels.resize(m.num_states);
    for (int s = 0; s < m.num_states; ++s)
        m.labels[s] = {ps.label_sets[s].begin(), ps.label_sets[s].end()};
    if (!ps.out.vocab.action_phrases.empty())
        ps.out.vocab.action_phrases.resize(m.action_names.size());
    if (!ps.out.vocab.prop_phrases.empty())
        ps.out.vocab.prop_phrases.resize(m.prop_names.size());
    return ps.out;
}

std::string serialize_model(const Mdp& m, const Vocabulary& v) {
    std::string out;
    out += "[states]\n";
    for (const auto& name : m.state_names) out += name + "\n";
    out += "\n[actions]\n";
    for (const auto& name : m.action_names) out += name + "\n";
    out += "\n[propositions]\n";
    for (const auto& name : m.prop_names) out += name + "\n";
    out += "\n[initial]\n";
    if (m.initial >= 0 && m.initial < m.num_states)
        out += m.state_names[m.initial] + "\n";
    out += "\n[transitions]\n";
    for (int s = 0; s < m.num_states; ++s) {
        for (const auto& ch : m.choices[s]) {
            out += m.state_names[s] + " " + m.action_names[ch.action];
            for (const auto& tr : ch.transitions)
                out += " " + m.state_names[tr.target] + " " +
                       fmt_prob(tr.prob);
            out += "\n";
        }
    }
    out += "\n[labels]\n";
    for (int s = 0; s < m.num_states; ++s) {
        if (m.labels[s].empty()) continue;
        out += m.state_names[s];
        for (int p : m.labels[s]) out += " " + m.prop_names[p];
        out += "\n";
    }
    const bool have_vocab =
        !v.action_phrases.empty() || !v.prop_phrases.empty();
    if (have_vocab) {
        out += "\n[vocabulary]\n";
        for (std::size_t a = 0; a < v.action_phrases.size(); ++a)
            if (!v.action_phrases[a].empty())
                out += "action " + m.action_names[a] + " " +
                       v.action_phrases[a] + "\n";
        for (std::size_t p = 0; p < v.prop_phrases.size(); ++p)
            if (!v.prop_phrases[p].empty())
                out += "prop " + m.prop_names[p] + " " + v.prop_phrases[p] +
                       "\n";
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path);
}

ModelFile load_model_file(const std::string& path) {
    try {
        return parse_model(read_text_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace cexplain
