#include <doctest.h>

#include <cmath>
#include <random>

#include "todacft/errors.hpp"
#include "todacft/exact_formulas.hpp"

using namespace toda;
using doctest::Approx;

namespace {

ThreePointInput sample_input(std::mt19937_64& rng, double gamma) {
    const TodaParams p(gamma, 1.0);
    std::uniform_real_distribution<double> u(0.08, 0.6), k(0.1, 0.9);
    for (;;) {
        ThreePointInput in{p.Q() - WeightVector::from_omegas(u(rng) * p.q(), u(rng) * p.q()), k(rng) * p.q(),
                           p.Q() - WeightVector::from_omegas(u(rng) * p.q(), u(rng) * p.q()), p};
        if (fateev_litvinov(in).finite()) return in;
    }
}

}  // namespace

TEST_CASE("DOZZ is symmetric and has the reflection property") {
    const double g = 1.4, mu = 0.7;
    const double a = 1.6, b = 1.3, c = 1.9;
    const double v = dozz(a, b, c, g, mu).value.value();
    CHECK(dozz(b, a, c, g, mu).value.value() == Approx(v).epsilon(1e-12));
    CHECK(dozz(c, b, a, g, mu).value.value() == Approx(v).epsilon(1e-12));
    const double Q = g / 2.0 + 2.0 / g;
    const LogSignedReal reflected = liouville_reflection(a, g, mu) * dozz(2.0 * Q - a, b, c, g, mu).value;
    CHECK(reflected.value() == Approx(v).epsilon(1e-10));
}

TEST_CASE("DOZZ mu scaling") {
    const double g = 1.2, Q = g / 2.0 + 2.0 / g;
    const double a = 1.0, b = 1.5, c = 2.0;
    const double s = a + b + c - 2.0 * Q;
    const double r = dozz(a, b, c, g, 2.0).value.log_abs - dozz(a, b, c, g, 1.0).value.log_abs;
    CHECK(r == Approx(-s / g * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("Fateev-Litvinov Weyl covariance and cocycle") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) {
        const ThreePointInput in = sample_input(rng, 1.1);
        const LogSignedReal f = fateev_litvinov(in).value;
        for (const auto& s : WeylElement::all()) {
            ThreePointInput t = in;
            t.alpha0 = shifted_action(s, in.alpha0, in.params);
            const LogSignedReal rhs = reflection_coeff(s, in.alpha0, in.params) * fateev_litvinov(t).value;
            CHECK(rhs.sign == f.sign);
            CHECK(std::abs(rhs.log_abs - f.log_abs) < 1e-8);
            for (const auto& s2 : WeylElement::all()) {
                const LogSignedReal lhs = reflection_coeff(s2.compose(s), in.alpha0, in.params);
                const LogSignedReal c = reflection_coeff(s2, t.alpha0, in.params) * reflection_coeff(s, in.alpha0, in.params);
                CHECK(lhs.sign == c.sign);
                CHECK(std::abs(lhs.log_abs - c.log_abs) < 1e-10);
            }
        }
    }
}

TEST_CASE("Fateev-Litvinov shift equations and mu exponent") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 5; ++k) {
        const ThreePointInput in = sample_input(rng, 1.0);
        for (double chi : {in.params.gamma, 2.0 / in.params.gamma}) {
            for (int i = 1; i <= 2; ++i) CHECK(check_shift_equation(i, chi, in) < 1e-8);
        }
        ThreePointInput scaled = in;
        scaled.params = TodaParams(in.params.gamma, 3.0);
        const double d = fateev_litvinov(scaled).value.log_abs - fateev_litvinov(in).value.log_abs;
        CHECK(d == Approx(fateev_litvinov_mu_exponent(in) * std::log(3.0)).epsilon(1e-10));
    }
}

TEST_CASE("Fateev-Litvinov reports zeros and poles") {
    const TodaParams p(1.0, 1.0);
    // kappa = 0 puts a zero of Upsilon(kappa) in the numerator.
    const ThreePointInput in{p.Q() - WeightVector::from_omegas(0.3, 0.4), 0.0, p.Q() - WeightVector::from_omegas(0.5, 0.2), p};
    const Evaluation e = fateev_litvinov(in);
    CHECK_FALSE(e.finite());
    CHECK_FALSE(e.flags().empty());
}

TEST_CASE("DOZZ limit of the Toda structure constant") {
    const TodaParams p(1.1, 1.0);
    const ThreePointInput in{p.Q() - WeightVector::from_omegas(0.9, 0.6), 1.0, p.Q() - WeightVector::from_omegas(0.7, 1.1), p};
    const DozzLimitResult r = check_dozz_limit(in, {1e-4, 1e-5, 1e-6});
    CHECK(r.residual < 1e-6);
}

TEST_CASE("integral identity") {
    for (auto [a, b] : {std::pair{1.2, 0.4}, std::pair{0.6, -0.3}, std::pair{1.9, 0.2}, std::pair{1.7, 0.9}}) {
        const IntegralCheck c = fateev_integral(a, b);
        CHECK(std::isfinite(c.closed));
        CHECK(c.residual < 1e-4);
    }
    CHECK_THROWS_AS(fateev_integral(1.5, -0.5), Error);
}
