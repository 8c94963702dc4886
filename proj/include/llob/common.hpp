#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace llob {

/// Invalid or inconsistent user input (parameters, config, file schema).
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (lost root bracket, non-convergence, ...).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double sq(double x) { return x * x; }

inline int sgn(double x) { return (x > 0.0) - (x < 0.0); }

inline bool close_rel(double a, double b, double tol) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * (scale > 0.0 ? scale : 1.0);
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw config_error(msg);
}

}  // namespace llob
