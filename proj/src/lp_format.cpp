#include "lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace cexplain {

namespace {

constexpr std::size_t kWrapColumn = 72;

std::string fmt_num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Joins tokens with single spaces, wrapping into indented continuation
// lines.
void emit_wrapped(std::string& out, const std::vector<std::string>& toks,
                  const std::string& first_indent,
                  const std::string& cont_indent) {
    std::string line = first_indent;
    bool any = false;
    for (const auto& t : toks) {
        if (any && line.size() + 1 + t.size() > kWrapColumn) {
            out += line;
            out += '\n';
            line = cont_indent;
            line += t;
        } else {
            if (any) line += ' ';
            line += t;
        }
        any = true;
    }
    out += line;
    out += '\n';
}

void push_terms(std::vector<std::string>& toks, const MilpProblem& p,
                const std::vector<std::pair<int, double>>& terms) {
    bool first = true;
    for (const auto& [col, c] : terms) {
        if (first) {
            if (c < 0) toks.push_back("-");
        } else {
            toks.push_back(c < 0 ? "-" : "+");
        }
        const double a = std::abs(c);
        if (a != 1.0) toks.push_back(fmt_num(a));
        toks.push_back(p.vars[col].name);
        first = false;
    }
}

const char* sense_str(RowSense s) {
    switch (s) {
        case RowSense::LessEq: return "<=";
        case RowSense::GreaterEq: return ">=";
        case RowSense::Equal: return "=";
    }
    return "=";
}

struct Tok {
    enum Kind { Ident, Num, Sym } kind;
    std::string text;
    double num = 0.0;
    int line = 0;
};

class Tokens {
  public:
    void add_line(const std::string& s, int line) {
        std::size_t i = 0;
        while (i < s.size()) {
            const char c = s[i];
            if (std::isspace((unsigned char)c)) {
                ++i;
                continue;
            }
            if (std::isalpha((unsigned char)c) || c == '_') {
                std::size_t j = i;
                while (j < s.size() && (std::isalnum((unsigned char)s[j]) ||
                                        s[j] == '_'))
                    ++j;
                toks_.push_back({Tok::Ident, s.substr(i, j - i), 0.0, line});
                i = j;
                continue;
            }
            if (std::isdigit((unsigned char)c) || c == '.') {
                const char* begin = s.c_str() + i;
                char* end = nullptr;
                const double v = std::strtod(begin, &end);
                if (end == begin)
                    throw LpParseError(line, "malformed number");
                toks_.push_back(
                    {Tok::Num, std::string(begin, (std::size_t)(end - begin)), v,
                     line});
                i += (std::size_t)(end - begin);
                continue;
            }
            if (c == '<' || c == '>') {
                std::string sym(1, c);
                if (i + 1 < s.size() && s[i + 1] == '=') {
                    sym += '=';
                    ++i;
                }
                toks_.push_back({Tok::Sym, sym, 0.0, line});
                ++i;
                continue;
            }
            if (c == '=' || c == '+' || c == '-' || c == ':') {
                toks_.push_back({Tok::Sym, std::string(1, c), 0.0, line});
                ++i;
                continue;
            }
            throw LpParseError(line, std::string("unexpected character '") +
                                         c + "'");
        }
    }

    bool done() const { return pos_ >= toks_.size(); }
    const Tok& peek() const { return toks_[pos_]; }
    const Tok& next() { return toks_[pos_++]; }
    int line() const {
        return done() ? (toks_.empty() ? 0 : toks_.back().line)
                      : toks_[pos_].line;
    }
    std::size_t size() const { return toks_.size(); }

  private:
    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
};

struct Builder {
    MilpProblem p;
    std::map<std::string, int> col_of;

    int var(const std::string& name) {
        auto it = col_of.find(name);
        if (it != col_of.end()) return it->second;
        MilpVariable v;
        v.name = name;
        v.lower = 0.0;
        v.upper = std::numeric_limits<double>::infinity();
        const int col = (int)p.vars.size();
        p.vars.push_back(std::move(v));
        col_of.emplace(name, col);
        return col;
    }
};

// sign* number? ident, repeated; stops before a sense symbol or end of
// stream. A bare zero constant is allowed and dropped.
std::vector<std::pair<int, double>> parse_terms(Tokens& ts, Builder& b) {
    std::map<int, double> acc;
    while (!ts.done()) {
        const Tok& t = ts.peek();
        if (t.kind == Tok::Sym &&
            (t.text == "<" || t.text == "<=" || t.text == ">" ||
             t.text == ">=" || t.text == "="))
            break;
        double sign = 1.0;
        bool saw_sign = false;
        while (!ts.done() && ts.peek().kind == Tok::Sym &&
               (ts.peek().text == "+" || ts.peek().text == "-")) {
            if (ts.next().text == "-") sign = -sign;
            saw_sign = true;
        }
        if (ts.done()) {
            if (saw_sign)
                throw LpParseError(ts.line(), "dangling sign");
            break;
        }
        double coef = sign;
        bool saw_num = false;
        if (ts.peek().kind == Tok::Num) {
            coef = sign * ts.next().num;
            saw_num = true;
        }
        if (ts.done() || ts.peek().kind != Tok::Ident) {
            if (saw_num && coef == 0.0) continue;  // bare constant 0
            throw LpParseError(ts.line(), "expected a variable name");
        }
        const Tok ident = ts.next();
        acc[b.var(ident.text)] += coef;
    }
    std::vector<std::pair<int, double>> out(acc.begin(), acc.end());
    return out;
}

}  // namespace

std::string export_lp(const MilpProblem& p) {
    std::string out;
    out += "Minimize\n";
    {
        std::vector<std::pair<int, double>> obj;
        for (std::size_t i = 0; i < p.objective.size(); ++i)
            if (p.objective[i] != 0.0) obj.push_back({(int)i, p.objective[i]});
        std::vector<std::string> toks{"obj:"};
        push_terms(toks, p, obj);
        emit_wrapped(out, toks, " ", "   ");
    }
    out += "Subject To\n";
    for (int r = 0; r < p.num_rows(); ++r) {
        const MilpRow& row = p.rows[r];
        std::vector<std::string> toks{"c" + std::to_string(r + 1) + ":"};
        push_terms(toks, p, row.terms);
        toks.push_back(sense_str(row.sense));
        toks.push_back(fmt_num(row.rhs));
        emit_wrapped(out, toks, " ", "   ");
    }
    bool have_bounds = false;
    for (const auto& v : p.vars)
        if (!v.integral) have_bounds = true;
    if (have_bounds) {
        out += "Bounds\n";
        for (const auto& v : p.vars) {
            if (v.integral) continue;
            out += ' ';
            if (std::isinf(v.upper)) {
                out += v.name + " >= " + fmt_num(v.lower);
            } else {
                out += fmt_num(v.lower) + " <= " + v.name + " <= " +
                       fmt_num(v.upper);
            }
            out += '\n';
        }
    }
    bool have_bin = false;
    for (const auto& v : p.vars)
        if (v.integral) have_bin = true;
    if (have_bin) {
        out += "Binaries\n";
        std::vector<std::string> toks;
        for (const auto& v : p.vars)
            if (v.integral) toks.push_back(v.name);
        emit_wrapped(out, toks, " ", " ");
    }
    out += "End\n";
    return out;
}

MilpProblem parse_lp(const std::string& text) {
    enum Section { None, Objective, Rows, Bounds, Integral, Ended };
    Section section = None;
    Tokens obj_toks, row_toks;
    std::vector<std::pair<std::string, int>> bound_lines;
    std::vector<std::pair<std::string, bool>> integral_names;  // name, binary?
    bool integral_is_binary = true;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const std::size_t slash = line.find('\\');
        if (slash != std::string::npos) line.erase(slash);
        std::string trimmed = line;
        const auto b = trimmed.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = trimmed.find_last_not_of(" \t\r");
        trimmed = trimmed.substr(b, e - b + 1);
        std::string low = trimmed;
        std::transform(low.begin(), low.end(), low.begin(),
                       [](unsigned char c) { return std::tolower(c); });

        if (low == "minimize" || low == "min") {
            section = Objective;
            continue;
        }
        if (low == "maximize" || low == "max")
            throw LpParseError(lineno, "only minimisation is supported");
        if (low == "subject to" || low == "st" || low == "s.t." ||
            low == "such that") {
            section = Rows;
            continue;
        }
        if (low == "bounds") {
            section = Bounds;
            continue;
        }
        if (low == "binaries" || low == "binary") {
            section = Integral;
            integral_is_binary = true;
            continue;
        }
        if (low == "generals" || low == "general") {
            section = Integral;
            integral_is_binary = false;
            continue;
        }
        if (low == "end") {
            section = Ended;
            continue;
        }

        switch (section) {
            case None:
                throw LpParseError(lineno, "content before Minimize");
            case Objective:
                obj_toks.add_line(line, lineno);
                break;
            case Rows:
                row_toks.add_line(line, lineno);
                break;
            case Bounds:
                bound_lines.push_back({line, lineno});
                break;
            case Integral: {
                Tokens ts;
                ts.add_line(line, lineno);
                while (!ts.done()) {
                    const Tok& t = ts.next();
                    if (t.kind != Tok::Ident)
                        throw LpParseError(t.line,
                                           "expected a variable name");
                    integral_names.push_back({t.text, integral_is_binary});
                }
                break;
            }
            case Ended:
                throw LpParseError(lineno, "content after End");
        }
    }
    if (section == None)
        throw LpParseError(lineno, "missing Minimize section");

    Builder bld;

    // Objective: optional label, then terms.
    std::map<int, double> obj;
    {
        if (!obj_toks.done() && obj_toks.peek().kind == Tok::Ident) {
            // Lookahead for "name :" label.
            Tokens copy = obj_toks;
            const Tok name = copy.next();
            if (!copy.done() && copy.peek().kind == Tok::Sym &&
                copy.peek().text == ":") {
                copy.next();
                obj_toks = copy;
                (void)name;
            }
        }
        for (const auto& [col, c] : parse_terms(obj_toks, bld))
            obj[col] += c;
        if (!obj_toks.done())
            throw LpParseError(obj_toks.line(),
                               "unexpected token in the objective");
    }

    // Rows: label, terms, sense, rhs.
    while (!row_toks.done()) {
        const Tok label = row_toks.next();
        if (label.kind != Tok::Ident)
            throw LpParseError(label.line, "expected a row label");
        if (row_toks.done() || row_toks.peek().kind != Tok::Sym ||
            row_toks.peek().text != ":")
            throw LpParseError(label.line,
                               "expected ':' after row label '" + label.text +
                                   "'");
        row_toks.next();
        MilpRow row;
        row.terms = parse_terms(row_toks, bld);
        if (row_toks.done())
            throw LpParseError(label.line, "row '" + label.text +
                                               "' has no comparison");
        const Tok sense = row_toks.next();
        if (sense.text == "<" || sense.text == "<=")
            row.sense = RowSense::LessEq;
        else if (sense.text == ">" || sense.text == ">=")
            row.sense = RowSense::GreaterEq;
        else if (sense.text == "=")
            row.sense = RowSense::Equal;
        else
            throw LpParseError(sense.line, "expected a comparison operator");
        double sign = 1.0;
        while (!row_toks.done() && row_toks.peek().kind == Tok::Sym &&
               (row_toks.peek().text == "+" || row_toks.peek().text == "-")) {
            if (row_toks.next().text == "-") sign = -sign;
        }
        if (row_toks.done() || row_toks.peek().kind != Tok::Num)
            throw LpParseError(sense.line, "expected a right-hand side");
        row.rhs = sign * row_toks.next().num;
        bld.p.rows.push_back(std::move(row));
    }

    // Bounds, one spec per line.
    for (const auto& [line, ln] : bound_lines) {
        Tokens ts;
        ts.add_line(line, ln);
        while (!ts.done()) {
            double lo = 0.0;
            bool have_lo = false;
            if (ts.peek().kind == Tok::Num ||
                (ts.peek().kind == Tok::Sym && ts.peek().text == "-")) {
                double sign = 1.0;
                while (!ts.done() && ts.peek().kind == Tok::Sym &&
                       (ts.peek().text == "-" || ts.peek().text == "+"))
                    if (ts.next().text == "-") sign = -sign;
                if (ts.done() || ts.peek().kind != Tok::Num)
                    throw LpParseError(ln, "malformed bound");
                lo = sign * ts.next().num;
                have_lo = true;
                if (ts.done() || ts.peek().kind != Tok::Sym ||
                    (ts.peek().text != "<=" && ts.peek().text != "<"))
                    throw LpParseError(ln, "expected '<=' in bound");
                ts.next();
            }
            if (ts.done() || ts.peek().kind != Tok::Ident)
                throw LpParseError(ln, "expected a variable name in bound");
            const int col = bld.var(ts.next().text);
            MilpVariable& v = bld.p.vars[col];
            if (have_lo) v.lower = lo;
            if (!ts.done() && ts.peek().kind == Tok::Ident &&
                ts.peek().text == "free") {
                ts.next();
                v.lower = -std::numeric_limits<double>::infinity();
                v.upper = std::numeric_limits<double>::infinity();
                continue;
            }
            if (!ts.done() && ts.peek().kind == Tok::Sym) {
                const std::string op = ts.next().text;
                double sign = 1.0;
                while (!ts.done() && ts.peek().kind == Tok::Sym &&
                       (ts.peek().text == "-" || ts.peek().text == "+"))
                    if (ts.next().text == "-") sign = -sign;
                if (ts.done() || ts.peek().kind != Tok::Num)
                    throw LpParseError(ln, "expected a number in bound");
                const double val = sign * ts.next().num;
                if (op == "<=" || op == "<") {
                    v.upper = val;
                } else if (op == ">=" || op == ">") {
                    v.lower = val;
                } else if (op == "=") {
                    v.lower = v.upper = val;
                } else {
                    throw LpParseError(ln, "unexpected '" + op +
                                               "' in bound");
                }
            }
        }
    }

    for (const auto& [name, binary] : integral_names) {
        const int col = bld.var(name);
        MilpVariable& v = bld.p.vars[col];
        v.integral = true;
        if (binary) {
            if (std::isinf(v.upper)) v.upper = 1.0;
            v.lower = std::max(v.lower, 0.0);
            v.upper = std::min(v.upper, 1.0);
        }
    }

    bld.p.objective.assign(bld.p.vars.size(), 0.0);
    for (const auto& [col, c] : obj) bld.p.objective[col] = c;
    return std::move(bld.p);
}

bool lp_problems_match(const MilpProblem& a, const MilpProblem& b, double tol,
                       std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (a.vars.size() != b.vars.size())
        return fail("variable counts differ: " +
                    std::to_string(a.vars.size()) + " vs " +
                    std::to_string(b.vars.size()));
    if (a.rows.size() != b.rows.size())
        return fail("row counts differ: " + std::to_string(a.rows.size()) +
                    " vs " + std::to_string(b.rows.size()));
    std::map<std::string, int> bcol;
    for (int i = 0; i < b.num_vars(); ++i) bcol[b.vars[i].name] = i;
    std::vector<int> a_to_b(a.vars.size(), -1);
    for (int i = 0; i < a.num_vars(); ++i) {
        auto it = bcol.find(a.vars[i].name);
        if (it == bcol.end())
            return fail("variable " + a.vars[i].name + " missing");
        a_to_b[i] = it->second;
        const MilpVariable& va = a.vars[i];
        const MilpVariable& vb = b.vars[it->second];
        if (va.integral != vb.integral)
            return fail("integrality differs for " + va.name);
        const bool lo_ok = (std::isinf(va.lower) && std::isinf(vb.lower)) ||
                           std::abs(va.lower - vb.lower) <= tol;
        const bool up_ok = (std::isinf(va.upper) && std::isinf(vb.upper)) ||
                           std::abs(va.upper - vb.upper) <= tol;
        if (!lo_ok || !up_ok) return fail("bounds differ for " + va.name);
        const double ca = i < (int)a.objective.size() ? a.objective[i] : 0.0;
        const double cb = it->second < (int)b.objective.size()
                              ? b.objective[it->second]
                              : 0.0;
        if (std::abs(ca - cb) > tol)
            return fail("objective coefficient differs for " + va.name);
    }
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        const MilpRow& ra = a.rows[r];
        const MilpRow& rb = b.rows[r];
        if (ra.sense != rb.sense)
            return fail("sense differs in row " + std::to_string(r + 1));
        if (std::abs(ra.rhs - rb.rhs) > tol)
            return fail("rhs differs in row " + std::to_string(r + 1));
        std::map<int, double> want;
        for (const auto& [col, c] : ra.terms) want[a_to_b[col]] += c;
        std::map<int, double> got;
        for (const auto& [col, c] : rb.terms) got[col] += c;
        for (const auto& [col, c] : want) {
            auto it = got.find(col);
            const double g = it == got.end() ? 0.0 : it->second;
            if (std::abs(c - g) > tol)
                return fail("coefficient of " + b.vars[col].name +
                            " differs in row " + std::to_string(r + 1));
            if (it != got.end()) got.erase(it);
        }
        for (const auto& [col, c] : got)
            if (std::abs(c) > tol)
                return fail("extra coefficient of " + b.vars[col].name +
                            " in row " + std::to_string(r + 1));
    }
    return true;
}

}  // namespace cexplain
