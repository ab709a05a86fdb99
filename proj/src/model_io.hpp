#pragma once

#include <string>

#include "mdp.hpp"
#include "templates.hpp"

namespace cexplain {

struct ModelFile {
    Mdp mdp;
    Vocabulary vocab;  // phrase slots left empty when the file has none
};

// Plain-text model format. Sections in declaration-before-use order:
//   [states]        one name per token
//   [actions]       one name per token
//   [propositions]  one name per token
//   [initial]       a single state name
//   [transitions]   <state> <action> (<successor> <probability>)+
//   [labels]        <state> <proposition>*
//   [vocabulary]    action <name> <phrase ...> | prop <name> <phrase ...>
// '#' starts a comment. Choices and labels are sorted on load; duplicate
// names, duplicate pairs and duplicate successors are errors. Throws
// std::runtime_error with the offending line number.
ModelFile parse_model(const std::string& text);

// Canonical serialisation; parse_model reads it back identically.
std::string serialize_model(const Mdp& m, const Vocabulary& v);

// File helpers; errors mention the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
ModelFile load_model_file(const std::string& path);

}  // namespace cexplain
