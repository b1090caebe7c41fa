#include "parl/milp_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace parl {

int MilpModel::add_var(const std::string& name, VarKind kind, double lower, double upper,
                       double obj_coeff) {
    Variable v{name, kind, lower, upper};
    if (kind == VarKind::Binary) {
        v.lower = 0.0;
        v.upper = 1.0;
    }
    vars.push_back(std::move(v));
    objective.push_back(obj_coeff);
    return static_cast<int>(vars.size()) - 1;
}

void MilpModel::add_constraint(const std::string& name,
                               std::vector<std::pair<int, double>> terms, Sense sense,
                               double rhs) {
    for (const auto& [idx, coeff] : terms) {
        (void)coeff;
        if (idx < 0 || idx >= static_cast<int>(vars.size()))
            throw std::invalid_argument("add_constraint: unknown variable index in " + name);
    }
    cons.push_back({name, std::move(terms), sense, rhs});
}

int MilpModel::num_binaries() const {
    return static_cast<int>(
        std::count_if(vars.begin(), vars.end(),
                      [](const Variable& v) { return v.kind == VarKind::Binary; }));
}

int MilpModel::num_integers() const {
    return static_cast<int>(
        std::count_if(vars.begin(), vars.end(),
                      [](const Variable& v) { return v.kind == VarKind::Integer; }));
}

double MilpModel::eval_objective(const std::vector<double>& point) const {
    double v = 0.0;
    for (size_t i = 0; i < vars.size(); ++i) v += objective[i] * point[i];
    return v;
}

double MilpModel::max_violation(const std::vector<double>& point) const {
    double worst = 0.0;
    for (size_t i = 0; i < vars.size(); ++i) {
        worst = std::max(worst, vars[i].lower - point[i]);
        worst = std::max(worst, point[i] - vars[i].upper);
    }
    for (const auto& c : cons) {
        double lhs = 0.0;
        for (const auto& [idx, coeff] : c.terms) lhs += coeff * point[idx];
        switch (c.sense) {
            case Sense::LessEqual: worst = std::max(worst, lhs - c.rhs); break;
            case Sense::GreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
            case Sense::Equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
        }
    }
    return worst;
}

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void append_terms(std::ostringstream& out, const std::vector<std::pair<int, double>>& terms,
                  const std::vector<Variable>& vars) {
    bool first = true;
    for (const auto& [idx, coeff] : terms) {
        if (coeff == 0.0) continue;
        if (first) {
            if (coeff < 0) out << "- ";
            first = false;
        } else {
            out << (coeff < 0 ? " - " : " + ");
        }
        double mag = std::abs(coeff);
        if (mag != 1.0) out << fmt_num(mag) << ' ';
        out << vars[idx].name;
    }
    if (first) out << "0 " << vars.front().name;
}

}  // namespace

std::string export_lp(const MilpModel& model) {
    if (model.vars.empty()) throw std::invalid_argument("export_lp: empty model");
    {
        std::set<std::string> seen;
        for (const auto& v : model.vars)
            if (!seen.insert(v.name).second)
                throw std::invalid_argument("export_lp: duplicate variable name " + v.name);
    }
    std::ostringstream out;
    out << "Maximize\n obj: ";
    std::vector<std::pair<int, double>> obj_terms;
    for (size_t i = 0; i < model.vars.size(); ++i)
        if (model.objective[i] != 0.0) obj_terms.push_back({static_cast<int>(i), model.objective[i]});
    append_terms(out, obj_terms, model.vars);
    out << "\nSubject To\n";
    for (size_t c = 0; c < model.cons.size(); ++c) {
        const auto& con = model.cons[c];
        out << ' ' << (con.name.empty() ? "c" + std::to_string(c) : con.name) << ": ";
        append_terms(out, con.terms, model.vars);
        switch (con.sense) {
            case Sense::LessEqual: out << " <= "; break;
            case Sense::GreaterEqual: out << " >= "; break;
            case Sense::Equal: out << " = "; break;
        }
        out << fmt_num(con.rhs) << '\n';
    }
    out << "Bounds\n";
    for (const auto& v : model.vars) {
        if (v.kind == VarKind::Binary) continue;  // implied by Binary section
        out << ' ';
        if (std::isinf(v.lower) && std::isinf(v.upper)) out << v.name << " free";
        else if (std::isinf(v.upper)) out << fmt_num(v.lower) << " <= " << v.name;
        else out << fmt_num(v.lower) << " <= " << v.name << " <= " << fmt_num(v.upper);
        out << '\n';
    }
    bool any_int = false, any_bin = false;
    for (const auto& v : model.vars) {
        any_int |= v.kind == VarKind::Integer;
        any_bin |= v.kind == VarKind::Binary;
    }
    if (any_int) {
        out << "General\n";
        for (const auto& v : model.vars)
            if (v.kind == VarKind::Integer) out << ' ' << v.name << '\n';
    }
    if (any_bin) {
        out << "Binary\n";
        for (const auto& v : model.vars)
            if (v.kind == VarKind::Binary) out << ' ' << v.name << '\n';
    }
    out << "End\n";
    return out.str();
}

namespace {

struct Tokenizer {
    std::vector<std::string> tokens;
    size_t pos = 0;

    explicit Tokenizer(const std::string& text) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
        };
        for (size_t i = 0; i < text.size(); ++i) {
            char ch = text[i];
            if (ch == '\\') {  // comment to end of line
                flush();
                while (i < text.size() && text[i] != '\n') ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch))) {
                flush();
                continue;
            }
            if (ch == '+' || ch == '-' || ch == ':') {
                // '<=' '>=' '=' handled below; signs split into their own tokens
                // unless part of an exponent (e.g. 1e-5).
                bool exponent = ch != ':' && !cur.empty() &&
                                (cur.back() == 'e' || cur.back() == 'E') &&
                                std::isdigit(static_cast<unsigned char>(cur[0]));
                if (!exponent) {
                    flush();
                    tokens.push_back(std::string(1, ch));
                    continue;
                }
            }
            if (ch == '<' || ch == '>' || ch == '=') {
                flush();
                if (ch != '=' && i + 1 < text.size() && text[i + 1] == '=') {
                    tokens.push_back(std::string(1, ch) + "=");
                    ++i;
                } else {
                    tokens.push_back(std::string(1, ch));
                }
                continue;
            }
            cur += ch;
        }
        flush();
    }

    bool done() const { return pos >= tokens.size(); }
    const std::string& peek() const { return tokens[pos]; }
    std::string next() { return tokens[pos++]; }
};

bool is_number(const std::string& s, double* out) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    if (out) *out = v;
    return true;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

MilpModel parse_lp(const std::string& text) {
    Tokenizer tk(text);
    MilpModel model;
    std::map<std::string, int> index;
    const double inf = std::numeric_limits<double>::infinity();

    auto var_of = [&](const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        int id = model.add_var(name, VarKind::Continuous, 0.0, inf);
        index[name] = id;
        return id;
    };

    enum class Section { None, Objective, Constraints, Bounds, General, Binary };
    Section section = Section::None;

    auto section_of = [&](const std::string& word, Section* out) {
        std::string w = lower(word);
        if (w == "maximize" || w == "maximise" || w == "max") { *out = Section::Objective; return true; }
        if (w == "subject") {
            if (!tk.done() && lower(tk.peek()) == "to") tk.next();
            *out = Section::Constraints;
            return true;
        }
        if (w == "st" || w == "s.t.") { *out = Section::Constraints; return true; }
        if (w == "bounds" || w == "bound") { *out = Section::Bounds; return true; }
        if (w == "general" || w == "generals" || w == "gen") { *out = Section::General; return true; }
        if (w == "binary" || w == "binaries" || w == "bin") { *out = Section::Binary; return true; }
        if (w == "end") { *out = Section::None; return true; }
        if (w == "minimize" || w == "minimise" || w == "min")
            throw std::runtime_error("parse_lp: minimize objectives are not supported");
        return false;
    };

    // Reads a linear expression until a relational operator or section word.
    auto read_expr = [&](std::vector<std::pair<int, double>>* terms) {
        double sign = 1.0;
        bool pending_coeff = false;
        double coeff = 1.0;
        while (!tk.done()) {
            const std::string& t = tk.peek();
            Section s;
            if (t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">") break;
            {
                size_t save = tk.pos;
                if (section_of(t, &s)) {
                    tk.pos = save;
                    break;
                }
            }
            std::string tok = tk.next();
            if (tok == "+") { sign = 1.0; continue; }
            if (tok == "-") { sign = -sign; continue; }
            if (tok == ":") continue;
            double num;
            if (is_number(tok, &num)) {
                coeff = num;
                pending_coeff = true;
                continue;
            }
            // A name; if the next token is ':', this was a row label.
            if (!tk.done() && tk.peek() == ":") {
                tk.next();
                sign = 1.0;
                pending_coeff = false;
                coeff = 1.0;
                continue;
            }
            terms->push_back({var_of(tok), sign * (pending_coeff ? coeff : 1.0)});
            sign = 1.0;
            pending_coeff = false;
            coeff = 1.0;
        }
    };

    while (!tk.done()) {
        Section s;
        {
            size_t save = tk.pos;
            std::string t = tk.next();
            if (section_of(t, &s)) {
                section = s;
                continue;
            }
            tk.pos = save;
        }
        switch (section) {
            case Section::Objective: {
                std::vector<std::pair<int, double>> terms;
                read_expr(&terms);
                for (const auto& [idx, c] : terms) model.objective[idx] += c;
                break;
            }
            case Section::Constraints: {
                std::vector<std::pair<int, double>> terms;
                read_expr(&terms);
                if (tk.done()) throw std::runtime_error("parse_lp: constraint missing relation");
                std::string rel = tk.next();
                std::string rhs_tok = tk.next();
                double rhs;
                double neg = 1.0;
                if (rhs_tok == "-") { neg = -1.0; rhs_tok = tk.next(); }
                if (!is_number(rhs_tok, &rhs))
                    throw std::runtime_error("parse_lp: bad rhs '" + rhs_tok + "'");
                Sense sense = rel == "<=" || rel == "<"
                                  ? Sense::LessEqual
                                  : (rel == ">=" || rel == ">" ? Sense::GreaterEqual : Sense::Equal);
                LinConstraint c;
                c.name = "c" + std::to_string(model.cons.size());
                c.terms = std::move(terms);
                c.sense = sense;
                c.rhs = neg * rhs;
                model.cons.push_back(std::move(c));
                break;
            }
            case Section::Bounds: {
                // forms:  L <= x <= U  |  L <= x  |  x <= U  |  x free  |  x = V
                std::vector<std::string> toks;
                double sign = 1.0;
                std::vector<double> nums;
                std::string var_name;
                bool upper_only = false;
                // first token: number or name
                std::string t = tk.next();
                if (t == "-") { sign = -1.0; t = tk.next(); }
                double num;
                if (is_number(t, &num)) {
                    nums.push_back(sign * num);
                    std::string rel = tk.next();  // <=
                    (void)rel;
                    var_name = tk.next();
                } else {
                    var_name = t;
                    upper_only = true;
                }
                int vi = var_of(var_name);
                if (!tk.done() && lower(tk.peek()) == "free") {
                    tk.next();
                    model.vars[vi].lower = -inf;
                    model.vars[vi].upper = inf;
                    break;
                }
                if (!nums.empty()) model.vars[vi].lower = nums[0];
                if (!tk.done() && (tk.peek() == "<=" || tk.peek() == "=" || tk.peek() == "<")) {
                    bool fixed = tk.peek() == "=";
                    tk.next();
                    double s2 = 1.0;
                    std::string t2 = tk.next();
                    if (t2 == "-") { s2 = -1.0; t2 = tk.next(); }
                    double ub;
                    if (!is_number(t2, &ub))
                        throw std::runtime_error("parse_lp: bad bound '" + t2 + "'");
                    model.vars[vi].upper = s2 * ub;
                    if (fixed) model.vars[vi].lower = s2 * ub;
                } else if (upper_only) {
                    // bare "x" line: keep defaults
                }
                break;
            }
            case Section::General: {
                int vi = var_of(tk.next());
                model.vars[vi].kind = VarKind::Integer;
                break;
            }
            case Section::Binary: {
                int vi = var_of(tk.next());
                model.vars[vi].kind = VarKind::Binary;
                model.vars[vi].lower = 0.0;
                model.vars[vi].upper = 1.0;
                break;
            }
            case Section::None:
                throw std::runtime_error("parse_lp: token '" + tk.next() + "' outside a section");
        }
    }
    if (model.vars.empty()) throw std::runtime_error("parse_lp: no variables found");
    return model;
}

std::string model_stats_json(const MilpModel& model) {
    std::ostringstream out;
    out << "{\"variables\":" << model.vars.size() << ",\"constraints\":" << model.cons.size()
        << ",\"binaries\":" << model.num_binaries()
        << ",\"integers\":" << model.num_integers() << ",\"continuous\":"
        << (model.vars.size() - model.num_binaries() - model.num_integers()) << "}";
    return out.str();
}

}  // namespace parl
