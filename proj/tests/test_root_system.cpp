#include <doctest.h>

#include <cmath>
#include <random>

#include "todacft/errors.hpp"
#include "todacft/root_system.hpp"

using namespace toda;
using doctest::Approx;

TEST_CASE("Cartan matrix and dual basis") {
    const WeightVector e[2] = {basis::e1(), basis::e2()};
    const WeightVector w[2] = {basis::omega1(), basis::omega2()};
    const double cartan[2][2] = {{2, -1}, {-1, 2}};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(pairing(e[i], e[j]) == Approx(cartan[i][j]).epsilon(1e-15));
            CHECK(pairing(e[i], w[j]) == Approx(i == j ? 1.0 : 0.0).epsilon(1e-15));
        }
    }
    CHECK(pairing(w[0], w[0]) == Approx(2.0 / 3.0));
    CHECK(pairing(w[1], w[1]) == Approx(2.0 / 3.0));
    CHECK(pairing(w[0], w[1]) == Approx(1.0 / 3.0));
    const WeightVector rho = basis::rho();
    CHECK(rho.x == Approx((w[0] + w[1]).x));
    CHECK(rho.y == Approx((w[0] + w[1]).y));
}

TEST_CASE("weights of the fundamental representation") {
    const WeightVector sum = basis::h(1) + basis::h(2) + basis::h(3);
    CHECK(std::abs(sum.x) < 1e-15);
    CHECK(std::abs(sum.y) < 1e-15);
    CHECK(basis::h(1).x == Approx(basis::omega1().x));
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            CHECK(pairing(basis::h(i), basis::h(j)) == Approx((i == j ? 1.0 : 0.0) - 1.0 / 3.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("basis coordinates round trip") {
    const WeightVector v = WeightVector::from_omegas(0.7, -1.3);
    CHECK(v.omega_coords()[0] == Approx(0.7));
    CHECK(v.omega_coords()[1] == Approx(-1.3));
    const WeightVector u = WeightVector::from_roots(0.4, 2.1);
    CHECK(u.root_coords()[0] == Approx(0.4));
    CHECK(u.root_coords()[1] == Approx(2.1));
    const WeightVector r = 0.4 * basis::e1() + 2.1 * basis::e2();
    CHECK(u.x == Approx(r.x));
    CHECK(u.y == Approx(r.y));
}

TEST_CASE("Weyl group is a group of orthogonal maps with the right signs") {
    const auto& all = WeylElement::all();
    REQUIRE(all.size() == 6);
    int sign_sum = 0;
    for (const auto& s : all) {
        const auto& m = s.matrix();
        const double det = m[0] * m[3] - m[1] * m[2];
        CHECK(det == Approx(s.sign()));
        CHECK(m[0] * m[0] + m[2] * m[2] == Approx(1.0));
        CHECK(m[0] * m[1] + m[2] * m[3] == Approx(0.0).epsilon(1e-15));
        CHECK(s.compose(s.inverse()) == WeylElement::get(WeylElement::Identity));
        sign_sum += s.sign();
        for (const auto& t : all) {
            const WeightVector v(0.37, -1.21);
            const WeightVector a = s.compose(t).apply(v), b = s.apply(t.apply(v));
            CHECK(a.x == Approx(b.x));
            CHECK(a.y == Approx(b.y));
        }
    }
    CHECK(sign_sum == 0);
    // Braid relation s1 s2 s1 = s2 s1 s2.
    const auto& s1 = WeylElement::get(WeylElement::S1);
    const auto& s2 = WeylElement::get(WeylElement::S2);
    CHECK(s1.compose(s2).compose(s1) == s2.compose(s1).compose(s2));
    const WeightVector r = reflect(1, basis::e1());
    CHECK(r.x == Approx(-basis::e1().x));
}

TEST_CASE("shifted action fixes Q and preserves conformal weights") {
    const TodaParams p(1.1, 0.8);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        const WeightVector a(u(rng), u(rng));
        for (const auto& s : WeylElement::all()) {
            const WeightVector q = shifted_action(s, p.Q(), p);
            CHECK(q.x == Approx(p.Q().x));
            CHECK(conformal_weight(shifted_action(s, a, p), p) == Approx(conformal_weight(a, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("dominant representative lands in the negative chamber") {
    const TodaParams p(1.0, 1.0);
    const WeightVector a = p.Q() + WeightVector::from_omegas(0.3, -0.9);
    const DominantRep d = dominant_representative(a, p);
    const WeightVector v = d.alpha - p.Q();
    CHECK(pairing(v, basis::e1()) < 0.0);
    CHECK(pairing(v, basis::e2()) < 0.0);
    const WeightVector back = shifted_action(*d.s, a, p);
    CHECK(back.x == Approx(d.alpha.x));
    CHECK_THROWS_AS(dominant_representative(p.Q() + WeightVector::from_omegas(0.0, -0.5), p), Error);
}
