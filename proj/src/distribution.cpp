#include "parl/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace parl {

namespace {

// Acklam's rational approximation to the probit function.
double probit_estimate(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_normal_cdf: p must lie in (0,1)");
    double z = probit_estimate(p);
    // One Halley refinement step; brings the estimate to full precision.
    double e = normal_cdf(z) - p;
    double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * z * z);
    z = z - u / (1.0 + 0.5 * z * u);
    return z;
}

double Distribution::mean() const {
    switch (kind) {
        case Kind::Constant: return a;
        case Kind::Normal: return a;
        case Kind::Uniform: return 0.5 * (a + b);
    }
    return 0.0;
}

double Distribution::stddev() const {
    switch (kind) {
        case Kind::Constant: return 0.0;
        case Kind::Normal: return b;
        case Kind::Uniform: {
            double n = b - a + 1.0;
            return std::sqrt((n * n - 1.0) / 12.0);
        }
    }
    return 0.0;
}

double Distribution::sample(Rng& rng) const {
    switch (kind) {
        case Kind::Constant: return a;
        case Kind::Normal: {
            // Inverse-CDF sampling keeps draws bit-identical across platforms.
            double u;
            do {
                u = uniform01(rng);
            } while (u <= 0.0);
            return a + b * inverse_normal_cdf(u);
        }
        case Kind::Uniform:
            return static_cast<double>(
                uniform_int(rng, static_cast<long long>(a), static_cast<long long>(b)));
    }
    return 0.0;
}

double Distribution::cdf(double x) const {
    switch (kind) {
        case Kind::Constant: return x >= a ? 1.0 : 0.0;
        case Kind::Normal: return normal_cdf((x - a) / b);
        case Kind::Uniform: {
            if (x < a) return 0.0;
            if (x >= b) return 1.0;
            return (std::floor(x) - a + 1.0) / (b - a + 1.0);
        }
    }
    return 0.0;
}

double Distribution::inv_cdf(double q) const {
    if (kind == Kind::Constant) return a;
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("Distribution::inv_cdf: q must lie in (0,1)");
    switch (kind) {
        case Kind::Normal: return a + b * inverse_normal_cdf(q);
        case Kind::Uniform: {
            double n = b - a + 1.0;
            double v = a + std::floor(q * n);
            return std::min(v, b);
        }
        default: return a;
    }
}

double Distribution::density(double x) const {
    switch (kind) {
        case Kind::Constant: return x == a ? 1.0 : 0.0;
        case Kind::Normal: return normal_pdf((x - a) / b) / b;
        case Kind::Uniform: {
            if (x < a || x > b) return 0.0;
            return 1.0 / (b - a + 1.0);
        }
    }
    return 0.0;
}

std::string Distribution::to_string() const {
    char buf[64];
    switch (kind) {
        case Kind::Constant: std::snprintf(buf, sizeof buf, "const(%g)", a); break;
        case Kind::Normal: std::snprintf(buf, sizeof buf, "normal(%g,%g)", a, b); break;
        case Kind::Uniform: std::snprintf(buf, sizeof buf, "uniform(%g,%g)", a, b); break;
    }
    return buf;
}

Distribution parse_distribution(const std::string& text) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw std::invalid_argument("malformed distribution: " + text);
    std::string name = text.substr(0, open);
    std::string args = text.substr(open + 1, close - open - 1);
    std::istringstream in(args);
    double first = 0.0, second = 0.0;
    char comma = 0;

    auto need = [&](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("malformed distribution (") + what +
                                             "): " + text);
    };
    if (name == "const") {
        need(static_cast<bool>(in >> first), "one argument expected");
        return Distribution::constant(first);
    }
    need(static_cast<bool>(in >> first >> comma >> second) && comma == ',',
         "two arguments expected");
    if (name == "normal") {
        need(second > 0.0, "sigma must be positive");
        return Distribution::normal(first, second);
    }
    if (name == "uniform") {
        need(second >= first, "upper bound below lower");
        need(first == std::floor(first) && second == std::floor(second),
             "integer endpoints expected");
        return Distribution::uniform(first, second);
    }
    throw std::invalid_argument("unknown distribution kind: " + name);
}

long long discretize(double x) {
    long long v = std::llround(x);
    // llround ties away from zero; negative values are clamped anyway.
    return v < 0 ? 0 : v;
}

}  // namespace parl
