#pragma once

#include <complex>
#include <limits>

namespace toda {

using cplx = std::complex<double>;

// sign * exp(log_abs). Zero: log_abs = -inf, sign = 0. Pole: log_abs = +inf, sign = 0.
struct LogSignedReal {
    double log_abs = 0.0;
    int sign = 1;

    static LogSignedReal from_value(double v);
    static LogSignedReal zero() { return {-std::numeric_limits<double>::infinity(), 0}; }
    static LogSignedReal pole() { return {std::numeric_limits<double>::infinity(), 0}; }
    static LogSignedReal one() { return {0.0, 1}; }

    bool is_zero() const { return log_abs == -std::numeric_limits<double>::infinity(); }
    bool is_pole() const { return log_abs == std::numeric_limits<double>::infinity(); }
    bool is_finite() const { return !is_zero() && !is_pole() && sign != 0; }
    double value() const;

    LogSignedReal operator*(const LogSignedReal& o) const;
    LogSignedReal operator/(const LogSignedReal& o) const;
    LogSignedReal& operator*=(const LogSignedReal& o) { return *this = *this * o; }
    LogSignedReal& operator/=(const LogSignedReal& o) { return *this = *this / o; }
    // x^p for x > 0 given as log x.
    static LogSignedReal exp_of(double log_value) { return {log_value, 1}; }
};

// exp(log_abs + i phase), phase in (-pi, pi]. Zero: log_abs = -inf.
struct LogComplex {
    double log_abs = 0.0;
    double phase = 0.0;

    static LogComplex from_log(cplx log_value);
    static LogComplex from_value(cplx v);
    static LogComplex zero() { return {-std::numeric_limits<double>::infinity(), 0.0}; }

    bool is_zero() const { return log_abs == -std::numeric_limits<double>::infinity(); }
    cplx value() const;
    cplx log() const { return {log_abs, phase}; }

    LogComplex operator*(const LogComplex& o) const;
    LogComplex operator/(const LogComplex& o) const;
    LogComplex& operator*=(const LogComplex& o) { return *this = *this * o; }
    LogComplex& operator/=(const LogComplex& o) { return *this = *this / o; }

    // Real-axis view; phase must be within tol of 0 or pi.
    LogSignedReal to_real(double tol = 1e-8) const;
};

double wrap_phase(double phase);

// Gamma(z) as magnitude and principal phase. Throws PoleAtNonPositiveInteger.
LogComplex log_gamma(cplx z);
// Real Gamma in log-signed form; Gamma poles reported as LogSignedReal::pole().
LogSignedReal gamma_signed(double x);

// l(x) = Gamma(x) / Gamma(1-x). Integer x gives exact zero (x >= 1) or pole (x <= 0).
LogSignedReal l_func(double x);
LogComplex l_func(cplx x);

// Upsilon in the convention U(z) = Upsilon_b(z / sqrt2), b = gamma / sqrt2.
// Entire in z; exact zeros on -gamma N - (2/gamma) N and q + gamma N + (2/gamma) N.
LogComplex upsilon_log(cplx z, double gamma);
LogSignedReal upsilon_log(double z, double gamma);
// Direct quadrature of the integral representation; requires 0 < Re z < q.
cplx upsilon_log_integral(cplx z, double gamma);
bool upsilon_is_lattice_zero(cplx z, double gamma);
// U'(0) = U(gamma) / sqrt2.
double upsilon_prime_zero(double gamma);

}  // namespace toda
