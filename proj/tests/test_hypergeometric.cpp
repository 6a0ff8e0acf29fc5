#include <doctest.h>

#include <cmath>

#include "todacft/hypergeometric.hpp"

using namespace toda;
using doctest::Approx;

namespace {

BlockParams generic_params() {
    const TodaParams p(1.1, 1.0);
    const ThreePointInput in{p.Q() - WeightVector::from_omegas(0.9, 0.6), 1.3, p.Q() - WeightVector::from_omegas(0.7, 1.1), p};
    return BlockParams::from_shift(shift_coefficients(in, p.gamma));
}

}  // namespace

TEST_CASE("3F2 reductions") {
    CHECK(std::abs(hyper_3f2({0.3, 0.7, 1.1}, {1.4, 2.2}, 0.0).value - 1.0) < 1e-15);
    // A parameter cancelling a denominator parameter reduces to the binomial series.
    for (cplx z : {cplx(0.5, 0.0), cplx(-0.7, 0.2), 0.8 * std::exp(cplx(0.0, 2.0))}) {
        const cplx f = hyper_3f2({0.37, 1.3, 2.1}, {1.3, 2.1}, z).value;
        CHECK(std::abs(f - std::pow(1.0 - z, -0.37)) < 1e-12);
    }
    // 2F1(1,1;2;z) = -ln(1-z)/z.
    const cplx z(0.4, 0.3);
    CHECK(std::abs(hyper_3f2({1.0, 1.0, 0.8}, {2.0, 0.8}, z).value + std::log(1.0 - z) / z) < 1e-12);
}

TEST_CASE("blocks solve the ODE") {
    const BlockParams p = generic_params();
    REQUIRE(p.generic());
    for (int i = 0; i < 3; ++i) {
        for (cplx z : {cplx(0.3, 0.1), cplx(-0.5, 0.2), 0.6 * std::exp(cplx(0.0, 2.5))}) {
            CHECK(ode_residual(p, static_cast<Block>(i), z) < 1e-6);
        }
    }
    for (int i = 3; i < 6; ++i) {
        for (cplx z : {cplx(2.0, 0.5), cplx(-3.0, 0.1)}) CHECK(ode_residual(p, static_cast<Block>(i), z) < 1e-6);
    }
    // A function that is not a solution has an O(1) residual.
    auto wrong = [&](cplx z) { return block_H(0, p, z) * (1.0 + 0.1 * z); };
    CHECK(ode_residual(p, wrong, cplx(0.3, 0.1)) > 1e-3);
}

TEST_CASE("connection formulas") {
    const BlockParams p = generic_params();
    CHECK(thomae_connection_residual(p, cplx(-2.0, 0.5)) < 1e-8);
    CHECK(thomae_connection_residual(p, cplx(-1.5, -1.0)) < 1e-8);
    for (int i = 1; i <= 3; ++i) CHECK(crossing_sine_identity(p, i) < 1e-10);
    // Perturbing the crossing weights breaks the identity.
    const double l1 = 1.3, l2 = 0.4;
    CHECK(crossing_sine_identity(p, 1, l1, l2) > 1e-4);
}

TEST_CASE("crossing combination is real and conjugation symmetric") {
    const BlockParams p = generic_params();
    const CrossingCoeffs c{1.0, 0.7, -0.2};
    const cplx z(0.3, 0.4);
    CHECK(crossing_combination(p, c, z) == Approx(crossing_combination(p, c, std::conj(z))).epsilon(1e-12));
}

TEST_CASE("genericity detection") {
    const BlockParams bad({0.5, 1.5, 0.3}, {2.0, 0.7});
    CHECK_FALSE(bad.generic());
    CHECK_FALSE(bad.genericity_issues().empty());
}
