#pragma once

#include <array>
#include <string>
#include <vector>

#include "todacft/root_system.hpp"
#include "todacft/special_functions.hpp"

namespace toda {

// Three-point data with a semi-degenerate middle insertion alpha1 = kappa * omega2.
struct ThreePointInput {
    WeightVector alpha0;
    double kappa = 0.0;
    WeightVector alpha_inf;
    TodaParams params;

    WeightVector alpha1() const { return kappa * basis::omega2(); }
    // s = alpha0 + alpha1 + alpha_inf - 2Q
    WeightVector s_vector() const;
    // s_i = <s, omega_i> / gamma
    std::array<double, 2> s_exponents() const;
};

struct ShiftCoefficients {
    std::array<double, 3> A{};
    std::array<double, 2> B{};
    double chi = 0.0;
};

// A_j, B_i for the degenerate insertion -chi * omega1.
ShiftCoefficients shift_coefficients(const ThreePointInput& in, double chi);

// A structure-constant value with the tri-state finite / zero / pole report.
struct Evaluation {
    LogSignedReal value;
    bool numerator_zero = false;
    bool denominator_zero = false;

    bool finite() const { return !numerator_zero && !denominator_zero; }
    std::vector<std::string> flags() const;
};

Evaluation fateev_litvinov(const ThreePointInput& in);

// Exponent of mu in F: <2Q - alpha_bar, rho> / gamma.
double fateev_litvinov_mu_exponent(const ThreePointInput& in);

LogSignedReal reflection_A(const WeightVector& alpha, const TodaParams& p);
LogSignedReal reflection_coeff(const WeylElement& s, const WeightVector& alpha, const TodaParams& p);

// Liouville reflection coefficient with Q = gamma/2 + 2/gamma.
LogSignedReal liouville_reflection(double alpha, double gamma, double mu);

// DOZZ structure constant at coupling gamma_tilde (Liouville convention).
Evaluation dozz(double a1, double a2, double a3, double gamma_tilde, double mu);

// Crossing coefficient multiplying |H_i|^2; i in {1,2}.
LogSignedReal shift_coeff_A(int i, double chi, const ThreePointInput& in);
LogSignedReal shift_coeff_A(int i, const ShiftCoefficients& c);
// OPE coefficient B^(i)(alpha0, chi); i in {0,1,2}, B^(0) = 1.
LogSignedReal shift_coeff_B(int i, const WeightVector& alpha0, double chi, const TodaParams& p);

// |F(a0 - chi h_{i+1}) / F(a0 - chi h_1) - A/B| / |A/B|
double check_shift_equation(int i, double chi, const ThreePointInput& in);

Evaluation extended_three_point(const ThreePointInput& in);

struct DozzLimitResult {
    std::vector<double> epsilons;
    std::vector<double> scaled_values;  // eps * F at kappa tuned so that <s,omega1> = eps
    double limit = 0.0;                 // polynomial extrapolation to eps = 0
    double reference = 0.0;             // dozz(...) / sqrt2
    double residual = 0.0;              // |limit - reference| / |reference|
    std::vector<double> slopes;         // (eps * F - limit) / eps
    double kappa0 = 0.0;
};

// The input's kappa is replaced by the value making <s,omega1> = eps.
DozzLimitResult check_dozz_limit(const ThreePointInput& in, const std::vector<double>& epsilons);

struct IntegralCheck {
    double closed = 0.0;
    double quadrature = 0.0;
    double residual = 0.0;
};

// int_C (|x-1|^b - r_{a,b}(x)) / |x|^a d^2x against its Gamma-ratio closed form.
IntegralCheck fateev_integral(double a, double b);

}  // namespace toda
