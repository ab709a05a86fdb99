#pragma once

#include <stdexcept>
#include <string>

#include "milp.hpp"

namespace cexplain {

// Serialises a program in LP format: Minimize / Subject To / Bounds /
// Binaries / End. Rows are labelled c1..cn in order, numbers use the
// shortest decimal form that reads back to the same binary64 value, long
// expressions wrap with leading indentation.
std::string export_lp(const MilpProblem& p);

struct LpParseError : std::runtime_error {
    int line;
    LpParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
};

// Reads the subset of LP format that export_lp emits (plus <, >, Generals
// and free bounds). Every constraint needs a label. Columns are assigned in
// order of first appearance: objective, then rows, then bounds, then
// integrality sections. Throws LpParseError.
MilpProblem parse_lp(const std::string& text);

// Semantic equality up to tol: same variables by name (bounds, integrality,
// objective coefficient) and row-by-row the same sense, right-hand side and
// named coefficients. Column numbering may differ. On mismatch fills `why`
// when given.
bool lp_problems_match(const MilpProblem& a, const MilpProblem& b, double tol,
                       std::string* why = nullptr);

}  // namespace cexplain
