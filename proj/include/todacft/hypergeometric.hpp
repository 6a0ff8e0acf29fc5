#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "todacft/exact_formulas.hpp"

namespace toda {

// Parameters of 3F2(A1, A2, A3; B1, B2; z) and of the associated third-order ODE.
struct BlockParams {
    std::array<double, 3> A{};
    std::array<double, 2> B{};

    BlockParams() = default;
    BlockParams(std::array<double, 3> a, std::array<double, 2> b) : A(a), B(b) {}
    static BlockParams from_shift(const ShiftCoefficients& c) { return {c.A, c.B}; }

    // Pairwise differences among {0, B1, B2, A1, A2, A3} within `threshold` of an integer.
    std::vector<std::string> genericity_issues(double threshold = 1e-9) const;
    bool generic(double threshold = 1e-9) const { return genericity_issues(threshold).empty(); }
};

struct BlockValue {
    cplx value;
    int n_terms = 0;
    double truncation_bound = 0.0;  // bound on the modulus of the discarded tail
};

// Direct series, |z| <= 0.9.
BlockValue hyper_3f2(const std::array<double, 3>& a, const std::array<double, 2>& b, cplx z);
BlockValue hyper_3f2(const BlockParams& p, cplx z);

enum class Block { H0, H1, H2, G1, G2, G3 };
const char* block_name(Block b);

// Frobenius solutions at 0 (|z| <= 0.9) and at infinity (|z| >= 1.12), principal branches.
cplx block_H(int i, const BlockParams& p, cplx z);
cplx block_G(int i, const BlockParams& p, cplx z);

// Value and first two derivatives.
struct Jet {
    cplx f, df, d2f;
};

// Any block at any z reachable by a radial path that stays clear of z = 1; outside the
// series domain the jet is continued with Taylor steps of the ODE.
Jet block_jet(Block b, const BlockParams& p, cplx z);
cplx block_value(Block b, const BlockParams& p, cplx z);

// Relative residual of the Gamma-weighted connection between H0 and the G_i.
double thomae_connection_residual(const BlockParams& p, cplx z);

// ODE residual from finite differences (fourth-order stencils with one Richardson step),
// normalized by the largest of the four operator terms.
double ode_residual(const BlockParams& p, const std::function<cplx(cplx)>& f, cplx z, double h = 5e-3);
double ode_residual(const BlockParams& p, Block b, cplx z, double h = 5e-3);

struct CrossingCoeffs {
    double C = 1.0;
    double A1 = 0.0;
    double A2 = 0.0;
};

// C (|H0|^2 + A1 |H1|^2 + A2 |H2|^2)
double crossing_combination(const BlockParams& p, const CrossingCoeffs& c, cplx z);

// Weights of |H_1|^2, |H_2|^2 rescaled by the connection data of H_j relative to H_0.
// Single-valuedness around z = 1 holds iff both equal 1.
std::array<double, 2> gauge_normalized_weights(const BlockParams& p, double lambda1, double lambda2);

// Residual of lambda0 sin(pi A_i) sin pi(B1-B2) - lt1 sin pi(B1-A_i) sin(pi B2) + lt2 sin pi(B2-A_i) sin(pi B1)
// with lambda0 = 1 and lt the gauge-normalized weights of lambda1, lambda2.
double crossing_sine_identity(const BlockParams& p, int i, double lambda1, double lambda2);
// Same with lambda_j = shift_coeff_A(j) computed from (A, B).
double crossing_sine_identity(const BlockParams& p, int i);

}  // namespace toda
