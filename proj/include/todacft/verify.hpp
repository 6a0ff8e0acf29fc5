#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "todacft/exact_formulas.hpp"

namespace toda {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    void add(std::string name, double residual, double tolerance);
    bool passed() const;
    double max_residual() const;
    size_t failures() const;
    // {suite, pass, n_checks, failures, max_residual, seconds, checks: [...]}; with
    // `all_checks` false only failing checks are listed.
    nlohmann::json to_json(bool all_checks = true) const;
};

struct VerifyOptions {
    std::vector<double> gammas;  // empty: the suite's default set
    int trials = 0;              // 0: the suite's default count
    uint64_t seed = 20240611;
};

// Random admissible data: alpha0, alpha_inf in Q + C_- with generic (non-lattice) exponents.
class AdmissibleSampler {
public:
    explicit AdmissibleSampler(uint64_t seed);
    ThreePointInput triple(const TodaParams& p);
    WeightVector weight(const TodaParams& p);
    double uniform(double lo, double hi);

private:
    std::mt19937_64 rng_;
};

// Shift equations for both chi, reflection U(q - z) = U(z), U(q/2) = 1, zero lattice.
SuiteReport verify_upsilon(const VerifyOptions& o = {});
// Weyl covariance of F for all six s and the shifted reflection cocycle (36 pairs).
SuiteReport verify_reflection(const VerifyOptions& o = {});
// Shift equations of F for i in {1,2} and chi in {gamma, 2/gamma}.
SuiteReport verify_shift(const VerifyOptions& o = {});
// 3F2 coefficients, ODE residuals of all six blocks, Thomae connection, crossing sine identity.
SuiteReport verify_blocks(const VerifyOptions& o = {});
// Regularized integral against its closed form on pairs covering both subtraction regimes.
SuiteReport verify_integral(const VerifyOptions& o = {});
// eps * F against the DOZZ constant as <s, omega1> = eps -> 0.
SuiteReport verify_dozz_limit(const VerifyOptions& o = {});

const std::vector<std::string>& suite_names();
// Throws Error(InvalidArgument) for an unknown name.
SuiteReport run_suite(const std::string& name, const VerifyOptions& o = {});

}  // namespace toda
