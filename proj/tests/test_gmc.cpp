#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "todacft/errors.hpp"
#include "todacft/gmc.hpp"

using namespace toda;
using doctest::Approx;

namespace {

constexpr double kPi = 3.14159265358979323846;

PointSet small_explicit_set() {
    return point_set_from_points({cplx(0.3, 0.0), cplx(0.0, 0.5), cplx(-0.6, 0.2), cplx(2.0, 1.0)},
                                 {0.1, 0.1, 0.1, 0.1}, {0.05, 0.05, 0.05, 0.05});
}

PointSet small_grid() {
    GridSpec g;
    g.n_theta = 12;
    g.r_min = 1e-3;
    return make_point_set(g);
}

ThreePointInput toda_input() {
    const TodaParams p(1.1, 1.0);
    const WeightVector a0 = p.Q() - WeightVector::from_omegas(0.45, 0.55);
    return {a0, 2.5, a0, p};
}

}  // namespace

TEST_CASE("Green kernel") {
    const cplx x(0.3, 0.2), y(-1.5, 2.0);
    CHECK(green_kernel(x, y) == Approx(green_kernel(y, x)));
    CHECK(green_kernel(x, y) == Approx(-std::log(std::abs(x - y)) + std::log(std::abs(y))));
    CHECK(green_kernel(cplx(0.1, 0.0), cplx(0.2, 0.0)) == Approx(std::log(10.0)));
}

TEST_CASE("grid covers the sphere with the |x|_+^-4 metric") {
    const PointSet ps = small_grid();
    double area = 0.0;
    for (double w : ps.cell_weight) area += w;
    // The three cores of radius r_min have total area about 3 pi r_min^2.
    CHECK(area == Approx(2.0 * kPi - 3.0 * kPi * 1e-6).epsilon(1e-6));
    CHECK(grid_point_count(ps.spec) == ps.size());
    const GridSpec b = grid_for_budget(1000, ps.spec);
    CHECK(grid_point_count(b) <= 1000);
}

TEST_CASE("sampled field has the prescribed covariance") {
    const PointSet ps = small_explicit_set();
    const FieldSampler sampler(ps);
    const size_t n = ps.size();
    const int N = 20000;
    std::vector<double> cov(n * n, 0.0);
    sampler.for_each_chunk(42, N, 1, [&](uint64_t, int count, const double* X) {
        for (int k = 0; k < count; ++k) {
            const double* x = X + static_cast<size_t>(k) * n;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) cov[i * n + j] += x[i] * x[j];
        }
    });
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            const double expected = i == j ? ps.self_variance(i) : green_kernel(ps.points[i], ps.points[j]);
            const double ci = ps.self_variance(i), cj = ps.self_variance(j);
            const double se = std::sqrt((ci * cj + expected * expected) / N);
            CHECK(std::abs(cov[i * n + j] / N - expected) < 5.0 * se);
        }
    }
}

TEST_CASE("first moment of the mass equals the deterministic mass") {
    const PointSet ps = small_grid();
    LiouvilleInput in;
    in.alpha = {0.3, 0.2, 0.4};
    in.gamma = 0.5;
    const std::vector<double> rho = liouville_masses(in, ps, 4000, 3);
    double m = 0.0, m2 = 0.0;
    for (double r : rho) {
        m += r;
        m2 += r * r;
    }
    m /= rho.size();
    const double se = std::sqrt((m2 / rho.size() - m * m) / rho.size());
    MassChannel ch;
    ch.gamma = 0.5;
    ch.a0 = 0.3;
    ch.a1 = 0.2;
    ch.a_inf = 0.4;
    const MassKernel k(ch, ps);
    CHECK(std::abs(m - k.deterministic_mass) < 4.0 * se);
}

TEST_CASE("results depend only on the seed") {
    const PointSet ps = small_grid();
    LiouvilleInput in;
    in.alpha = {1.2, 1.1, 1.3};
    in.gamma = 1.2;
    setenv("TODA_CFT_THREADS", "1", 1);
    const auto a = liouville_masses(in, ps, 300, 17);
    setenv("TODA_CFT_THREADS", "3", 1);
    const auto b = liouville_masses(in, ps, 300, 17);
    unsetenv("TODA_CFT_THREADS");
    CHECK(a == b);
    const auto c = liouville_masses(in, ps, 300, 18);
    CHECK(a != c);
    const FieldSample s1 = sample_field(ps, 5), s2 = sample_field(ps, 5);
    CHECK(s1.values == s2.values);
}

TEST_CASE("mu dependence of the Toda estimator is exact per sample") {
    const PointSet ps = small_grid();
    const ThreePointInput in = toda_input();
    const GmcRun run = mc_three_point(in, ps, 256, 9);
    const auto s = in.s_exponents();
    const McEstimate scaled = toda_estimator(run, TodaParams(1.1, 2.0, 0.5));
    const double expected = run.estimate.log_abs - s[0] * std::log(2.0) - s[1] * std::log(0.5);
    CHECK(scaled.log_abs == Approx(expected).epsilon(1e-13));
    CHECK(scaled.rel_error == Approx(run.estimate.rel_error).epsilon(1e-12));
}

TEST_CASE("window and Seiberg checks") {
    const TodaParams p(1.1, 1.0);
    const ThreePointInput bad{WeightVector(0.0, 0.0), 0.1, WeightVector(0.0, 0.0), p};
    CHECK_THROWS_AS(check_moment_window(bad), Error);
    CHECK_NOTHROW(check_moment_window(toda_input()));
    CHECK(seiberg_warnings(toda_input()).empty());
    ThreePointInput outside = toda_input();
    outside.alpha0 = p.Q() + WeightVector::from_omegas(0.2, -0.5);
    CHECK(seiberg_warnings(outside).size() == 1);
    const PointSet ps = small_explicit_set();
    CHECK_THROWS_AS(gmc_masses(sample_field(ps, 1), ps, outside, true), Error);
}

TEST_CASE("degenerate regularization is reported") {
    const PointSet ps = point_set_from_points({cplx(0.1, 0.0), cplx(0.1001, 0.0)}, {0.1, 0.1}, {1.0, 1.0});
    try {
        FieldSampler s(ps);
        FAIL("expected NotPositiveDefinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPositiveDefinite);
    }
}

TEST_CASE("interrupt stops sampling") {
    const PointSet ps = small_grid();
    LiouvilleInput in;
    in.alpha = {1.2, 1.1, 1.3};
    interrupt_flag() = true;
    try {
        liouville_masses(in, ps, 1000, 1);
        FAIL("expected Interrupted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Interrupted);
    }
    interrupt_flag() = false;
}

TEST_CASE("extended Liouville remainder subsets") {
    LiouvilleInput in;
    in.gamma = 1.4;
    in.alpha = {1.6, 1.6, 1.6};
    CHECK(active_remainder_subsets(in).empty());
    in.alpha = {2.4, 1.0, 1.0};
    const double Q = in.Q();
    const auto act = active_remainder_subsets(in);
    for (unsigned m : act) {
        double bound = 0.0;
        for (int k = 0; k < 3; ++k)
            if (m & (1u << k)) bound += 2.0 * (in.alpha[k] - Q);
        CHECK(in.s() < bound);
    }
}
