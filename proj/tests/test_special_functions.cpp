#include <doctest.h>

#include <cmath>
#include <random>

#include "todacft/errors.hpp"
#include "todacft/special_functions.hpp"

using namespace toda;
using doctest::Approx;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Euler limit log n! + z log n - sum_{k=0}^n log(z + k) with its leading 1/n correction.
cplx euler_limit_log_gamma(cplx z, int n) {
    cplx s = 0.0;
    for (int k = 1; k <= n; ++k) s += std::log(static_cast<double>(k)) - std::log(z + static_cast<double>(k));
    return s + z * std::log(static_cast<double>(n)) - std::log(z) + z * (z + 1.0) / (2.0 * n);
}

// Midpoint rule for the integral representation of ln U on (0, 60].
double upsilon_oracle(double z, double gamma) {
    const double a = (gamma + 2.0 / gamma) / 2.0 - z;
    const double s2 = std::sqrt(2.0);
    const double h = 2e-4;
    double sum = 0.0;
    for (double t = h / 2; t < 60.0; t += h) {
        const double sh = std::sinh(a * t / (2.0 * s2));
        const double f = a * a * std::exp(-t) / 2.0 - sh * sh / (std::sinh(t * gamma / (2.0 * s2)) * std::sinh(t / (s2 * gamma)));
        sum += f / t;
    }
    return sum * h;
}

}  // namespace

TEST_CASE("log_gamma special values and identities") {
    CHECK(std::abs(log_gamma(1.0).log()) < 1e-14);
    CHECK(log_gamma(0.5).log_abs == Approx(0.5 * std::log(kPi)).epsilon(1e-14));
    const cplx z(3.7, 1.2);
    const cplx oracle = euler_limit_log_gamma(z, 200000);
    const LogComplex g = log_gamma(z);
    CHECK(g.log_abs == Approx(oracle.real()).epsilon(1e-8));
    CHECK(std::abs(wrap_phase(g.phase - oracle.imag())) < 1e-8);
    CHECK_THROWS_AS(log_gamma(-2.0), Error);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 50; ++k) {
        const cplx w(u(rng), u(rng));
        // Recurrence.
        const cplx d = log_gamma(w + 1.0).log() - log_gamma(w).log() - std::log(w);
        CHECK(std::abs(d.real()) < 1e-12 * (1.0 + std::abs(log_gamma(w).log_abs)));
        CHECK(std::abs(wrap_phase(d.imag())) < 1e-12 * (1.0 + std::abs(log_gamma(w).log())));
        // Reflection Gamma(w) Gamma(1-w) = pi / sin(pi w).
        const cplx r = log_gamma(w).log() + log_gamma(1.0 - w).log() - std::log(kPi / std::sin(kPi * w));
        CHECK(std::abs(r.real()) < 1e-11);
        CHECK(std::abs(wrap_phase(r.imag())) < 1e-11);
    }
}

TEST_CASE("gamma_signed matches std::tgamma") {
    for (double x : {0.3, 2.5, -0.5, -1.7, 7.1}) {
        CHECK(gamma_signed(x).value() == Approx(std::tgamma(x)).epsilon(1e-13));
    }
    CHECK(gamma_signed(-3.0).is_pole());
}

TEST_CASE("l function") {
    CHECK(l_func(0.5).value() == Approx(1.0).epsilon(1e-15));
    CHECK((l_func(0.3) * l_func(0.7)).value() == Approx(1.0).epsilon(1e-14));
    CHECK(l_func(0.8).value() == Approx(std::tgamma(0.8) / std::tgamma(0.2)).epsilon(1e-13));
    CHECK(l_func(2.0).is_zero());
    CHECK(l_func(-1.0).is_pole());
    CHECK(l_func(0.0).is_pole());
    CHECK(l_func(1.0).is_zero());
    const LogComplex c = l_func(cplx(0.3, 0.4));
    const cplx direct = std::exp(log_gamma(cplx(0.3, 0.4)).log() - log_gamma(cplx(0.7, -0.4)).log());
    CHECK(std::abs(c.value() - direct) < 1e-13);
}

TEST_CASE("Upsilon values") {
    const double g = 1.0, q = g + 2.0 / g;
    CHECK(std::abs(upsilon_log(q / 2.0, g).log_abs) < 1e-13);
    CHECK(upsilon_log(0.0, g).is_zero());
    CHECK(upsilon_log(cplx(q + g, 0.0), g).is_zero());
    CHECK_FALSE(upsilon_log(cplx(0.3, 0.2), g).is_zero());
    CHECK(upsilon_is_lattice_zero(cplx(-g - 2.0 / g, 0.0), g));

    const double oracle = upsilon_oracle(0.4, g);
    CHECK(upsilon_log(0.4, g).log_abs == Approx(oracle).epsilon(1e-8));
    CHECK(upsilon_log_integral(0.4, g).real() == Approx(oracle).epsilon(1e-8));
}

TEST_CASE("Upsilon shift equations and reflection") {
    std::mt19937_64 rng(11);
    for (double g : {0.8, 1.0, 1.3}) {
        const double q = g + 2.0 / g;
        std::uniform_real_distribution<double> re(0.0, q), im(-1.0, 1.0);
        for (int k = 0; k < 20; ++k) {
            const cplx z(re(rng), im(rng));
            for (double chi : {g, 2.0 / g}) {
                const cplx lhs = upsilon_log(z + chi, g).log();
                const cplx rhs = l_func(chi * z / 2.0).log() + (1.0 - chi * z) * std::log(chi / std::sqrt(2.0)) + upsilon_log(z, g).log();
                CHECK(std::abs(lhs.real() - rhs.real()) < 1e-10);
                CHECK(std::abs(wrap_phase(lhs.imag() - rhs.imag())) < 1e-10);
            }
            const cplx d = upsilon_log(cplx(q, 0.0) - z, g).log() - upsilon_log(z, g).log();
            CHECK(std::abs(d.real()) < 1e-12);
            CHECK(std::abs(wrap_phase(d.imag())) < 1e-12);
        }
    }
}

TEST_CASE("Upsilon derivative at the zero") {
    const double g = 1.0, q = g + 2.0 / g;
    const double d0 = upsilon_prime_zero(g);
    CHECK(d0 > 0.0);
    const double h = 1e-4;
    const double fd = (upsilon_log(h, g).value() - upsilon_log(-h, g).value()) / (2.0 * h);
    CHECK(fd == Approx(d0).epsilon(1e-6));
    for (double z : {1e-3, 1e-4}) CHECK(upsilon_log(z, g).value() / (d0 * z) == Approx(1.0).epsilon(10 * z));
    const double fdq = (upsilon_log(q + h, g).value() - upsilon_log(q - h, g).value()) / (2.0 * h);
    CHECK(fdq == Approx(-d0).epsilon(1e-6));
}
