#pragma once

#include <string>

#include "parl/rng.hpp"

namespace parl {

// Inverse CDF of the standard normal, accurate to ~1e-15 (rational
// approximation refined with one Halley step against std::erfc).
double inverse_normal_cdf(double p);

double normal_cdf(double z);
double normal_pdf(double z);

// Scalar distribution descriptor as written in configuration files:
//   normal(mu,sigma) | uniform(a,b) | const(v)
// uniform(a,b) is the discrete uniform on the integers {a,...,b}.
struct Distribution {
    enum class Kind { Constant, Normal, Uniform };

    Kind kind = Kind::Constant;
    double a = 0.0;  // normal: mu,   uniform: lower, const: value
    double b = 0.0;  // normal: sigma, uniform: upper

    static Distribution constant(double v) { return {Kind::Constant, v, 0.0}; }
    static Distribution normal(double mu, double sigma) { return {Kind::Normal, mu, sigma}; }
    static Distribution uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }

    bool is_constant() const { return kind == Kind::Constant; }

    double mean() const;
    double stddev() const;

    // Raw draw, before any rounding/clamping done by callers.
    double sample(Rng& rng) const;

    double cdf(double x) const;
    // Generalized inverse CDF; q must lie in (0,1) for non-constant kinds.
    double inv_cdf(double q) const;
    // Density (normal), pmf (uniform), or indicator (const).
    double density(double x) const;

    std::string to_string() const;
};

// Parses "normal(2,10)", "uniform(0,4)" or "const(10)".
// Throws std::invalid_argument on malformed input.
Distribution parse_distribution(const std::string& text);

// Demand/production discretization rule: round half up, clamp at zero.
long long discretize(double x);

}  // namespace parl
