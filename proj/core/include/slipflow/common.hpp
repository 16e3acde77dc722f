#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace slipflow {

/// Invalid user-supplied configuration (sizes, parameter ranges, unknown keys).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerical scheme left its admissible set (lost positivity, singular
/// operator, solver breakdown). Never silently recovered from.
struct SchemeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

inline void check_scheme(bool cond, const std::string& msg) {
    if (!cond) throw SchemeError(msg);
}

/// Neumaier compensated summation. Conservation audits at 1e-12 relative
/// over thousands of steps need reductions that do not drift with N.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(const std::vector<double>& xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

/// sin(pi x) and cos(pi x) with exact zeros at integer / half-integer
/// arguments, so wall traces built from sin(j pi y) vanish bit-exactly.
inline double sin_pi(double x) {
    double r = std::remainder(x, 2.0);  // r in [-1, 1]
    double ar = std::abs(r);
    double sign = r < 0 ? -1.0 : 1.0;
    if (ar == 0.0 || ar == 1.0) return 0.0;
    if (ar <= 0.5) return sign * std::sin(M_PI * ar);
    return sign * std::sin(M_PI * (1.0 - ar));
}

inline double cos_pi(double x) {
    double ax = std::abs(x);
    double r = ax - 2.0 * std::floor(ax / 2.0);  // r in [0, 2)
    if (r == 0.5 || r == 1.5) return 0.0;
    if (r == 0.0) return 1.0;
    if (r == 1.0) return -1.0;
    if (r < 0.5) return std::cos(M_PI * r);
    if (r < 1.0) return -std::sin(M_PI * (r - 0.5));
    if (r < 1.5) return -std::cos(M_PI * (r - 1.0));
    return std::sin(M_PI * (r - 1.5));
}

/// Shortest round-trippable decimal form; identical inputs give identical
/// bytes, which the artifact determinism contract relies on.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer a shorter representation when it round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char cand[40];
        std::snprintf(cand, sizeof(cand), "%.*g", prec, v);
        double back = std::strtod(cand, nullptr);
        if (back == v) return std::string(cand);
    }
    return std::string(buf);
}

/// Least-squares slope of log(y) against log(x); used for convergence-order
/// fits. Pairs with y <= 0 are rejected.
inline double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "order fit needs >= 2 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0 && y[i] > 0, "order fit needs positive samples");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace slipflow
