#pragma once

#include <string>
#include <vector>

namespace parl {

enum class VarKind { Continuous, Integer, Binary };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = 0.0;
};

struct LinConstraint {
    std::string name;
    std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

// A mixed-integer linear program, objective sense maximize.
struct MilpModel {
    std::vector<Variable> vars;
    std::vector<LinConstraint> cons;
    std::vector<double> objective;  // one coefficient per variable

    int add_var(const std::string& name, VarKind kind, double lower, double upper,
                double obj_coeff = 0.0);
    void add_constraint(const std::string& name, std::vector<std::pair<int, double>> terms,
                        Sense sense, double rhs);

    int num_binaries() const;
    int num_integers() const;  // integer variables excluding binaries

    double eval_objective(const std::vector<double>& point) const;
    // Maximum constraint/bound violation of a point.
    double max_violation(const std::vector<double>& point) const;
};

// Writes the model in LP file format with deterministic ordering and 12
// significant digits. Throws on duplicate variable names.
std::string export_lp(const MilpModel& model);

// Parses LP text produced by export_lp (plus common whitespace variants).
MilpModel parse_lp(const std::string& text);

// One-line JSON with variable/constraint/binary counts.
std::string model_stats_json(const MilpModel& model);

}  // namespace parl
