#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nilab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// e(x) = exp(2*pi*i*x).
inline cplx e2pi(double x) {
    return {std::cos(kTwoPi * x), std::sin(kTwoPi * x)};
}

/// e(x) - 1 evaluated without cancellation: e(x)-1 = -2 sin^2(pi x) + 2i sin(pi x) cos(pi x).
/// Accurate for x near an integer provided x is already reduced near 0.
inline cplx e2pi_minus_one(double x) {
    const double s = std::sin(kPi * x);
    const double c = std::cos(kPi * x);
    return {-2.0 * s * s, 2.0 * s * c};
}

/// Fractional part in [0, 1).
inline double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // guards floor(x) == x - 1 at representation edge
    return f;
}

/// ||x|| — distance from x to the nearest integer.
inline double circle_dist(double a, double b) {
    double d = frac(a - b);
    return std::min(d, 1.0 - d);
}

/// Kahan compensated accumulator.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

struct KahanSumComplex {
    KahanSum re, im;
    void add(cplx v) {
        re.add(v.real());
        im.add(v.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

// Error types used across modules. Messages carry the quantities the
// caller needs to act on (cap, offending mode, required budget).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UndeterminedMembershipError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SmallDivisorError : std::runtime_error {
    long long mode;
    double norm_dist;
    SmallDivisorError(long long m, double nd, const std::string& msg)
        : std::runtime_error(msg), mode(m), norm_dist(nd) {}
};

struct ConstantObstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SupportOverflowError : std::runtime_error {
    long long required_support;
    SupportOverflowError(long long req, const std::string& msg)
        : std::runtime_error(msg), required_support(req) {}
};

}  // namespace nilab
