#include "todacft/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "todacft/errors.hpp"
#include "todacft/hypergeometric.hpp"

namespace toda {

namespace {

constexpr double kPi = 3.14159265358979323846;

// |exp(d) - 1| for a complex log-difference d.
double rel_from_log(cplx d) { return std::abs(std::expm1(d.real()) + std::exp(d.real()) * (std::exp(cplx(0.0, d.imag())) - 1.0)); }

double rel_diff(const LogSignedReal& a, const LogSignedReal& b) {
    if (!a.is_finite() || !b.is_finite()) return std::numeric_limits<double>::infinity();
    if (a.sign != b.sign) return 2.0;
    return std::abs(std::expm1(a.log_abs - b.log_abs));
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> d) { return v.empty() ? d : v; }
int or_default(int v, int d) { return v > 0 ? v : d; }

std::string fmt(const char* name, std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    os << name;
    for (const auto& [k, v] : kv) os << " " << k << "=" << v;
    return os.str();
}

template <class F>
SuiteReport timed(const char* suite, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport r;
    r.suite = suite;
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace

void SuiteReport::add(std::string name, double residual, double tolerance) {
    checks.push_back({std::move(name), residual, tolerance, residual <= tolerance});
}

bool SuiteReport::passed() const { return failures() == 0 && !checks.empty(); }

size_t SuiteReport::failures() const {
    size_t n = 0;
    for (const auto& c : checks) n += c.pass ? 0 : 1;
    return n;
}

double SuiteReport::max_residual() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, std::isnan(c.residual) ? std::numeric_limits<double>::infinity() : c.residual);
    return m;
}

nlohmann::json SuiteReport::to_json(bool all_checks) const {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(std::to_string(v)); };
    nlohmann::json j{{"suite", suite},
                     {"pass", passed()},
                     {"n_checks", checks.size()},
                     {"failures", failures()},
                     {"max_residual", num(max_residual())},
                     {"seconds", seconds}};
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        if (!all_checks && c.pass) continue;
        j["checks"].push_back({{"name", c.name}, {"residual", num(c.residual)}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    return j;
}

AdmissibleSampler::AdmissibleSampler(uint64_t seed) : rng_(seed) {}

double AdmissibleSampler::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

WeightVector AdmissibleSampler::weight(const TodaParams& p) {
    const double q = p.q();
    return p.Q() - WeightVector::from_omegas(uniform(0.08, 0.6) * q, uniform(0.08, 0.6) * q);
}

ThreePointInput AdmissibleSampler::triple(const TodaParams& p) {
    for (;;) {
        ThreePointInput in{weight(p), uniform(0.1, 0.9) * p.q(), weight(p), p};
        if (fateev_litvinov(in).finite()) return in;
    }
}

SuiteReport verify_upsilon(const VerifyOptions& o) {
    return timed("upsilon", [&](SuiteReport& r) {
        AdmissibleSampler rnd(o.seed);
        for (double g : or_default(o.gammas, {0.8, 1.0, 1.3})) {
            const double q = g + 2.0 / g;
            r.add(fmt("U(q/2)=1", {{"gamma", g}}), std::abs(upsilon_log(cplx(q / 2.0, 0.0), g).log()), 1e-13);
            for (int k = 0; k < or_default(o.trials, 200); ++k) {
                const cplx z(rnd.uniform(0.0, q), rnd.uniform(-1.0, 1.0));
                const LogComplex u = upsilon_log(z, g);
                for (double chi : {g, 2.0 / g}) {
                    const cplx rhs = l_func(chi * z / 2.0).log() + (1.0 - chi * z) * std::log(chi / std::sqrt(2.0)) + u.log();
                    r.add(fmt("shift", {{"gamma", g}, {"chi", chi}, {"re_z", z.real()}, {"im_z", z.imag()}}),
                          rel_from_log(upsilon_log(z + chi, g).log() - rhs), 1e-10);
                }
                r.add(fmt("reflection", {{"gamma", g}, {"re_z", z.real()}, {"im_z", z.imag()}}),
                      rel_from_log(upsilon_log(cplx(q, 0.0) - z, g).log() - u.log()), 1e-12);
            }
            for (cplx z : {cplx(0.0), cplx(-g), cplx(-2.0 / g), cplx(-g - 2.0 / g), cplx(q), cplx(q + g)}) {
                r.add(fmt("lattice zero", {{"gamma", g}, {"z", z.real()}}), upsilon_log(z, g).is_zero() ? 0.0 : 1.0, 0.0);
            }
        }
    });
}

SuiteReport verify_reflection(const VerifyOptions& o) {
    return timed("reflection", [&](SuiteReport& r) {
        AdmissibleSampler rnd(o.seed);
        const auto gammas = or_default(o.gammas, {1.0});
        const int trials = or_default(o.trials, 50);
        for (int k = 0; k < trials; ++k) {
            const TodaParams p(gammas[k % gammas.size()], rnd.uniform(0.5, 1.5));
            const ThreePointInput in = rnd.triple(p);
            const LogSignedReal F = fateev_litvinov(in).value;
            for (const auto& s : WeylElement::all()) {
                ThreePointInput t = in;
                t.alpha0 = shifted_action(s, in.alpha0, p);
                const Evaluation Fs = fateev_litvinov(t);
                const double res = Fs.finite() ? rel_diff(Fs.value * reflection_coeff(s, in.alpha0, p), F)
                                               : std::numeric_limits<double>::infinity();
                r.add(fmt(("weyl " + s.word()).c_str(), {{"trial", k}, {"gamma", p.gamma}}), res, 1e-8);
            }
        }
        const TodaParams p(gammas.front(), rnd.uniform(0.5, 1.5));
        const WeightVector a = rnd.weight(p);
        for (const auto& s2 : WeylElement::all()) {
            for (const auto& s1 : WeylElement::all()) {
                const LogSignedReal lhs = reflection_coeff(s2.compose(s1), a, p);
                const LogSignedReal rhs = reflection_coeff(s2, shifted_action(s1, a, p), p) * reflection_coeff(s1, a, p);
                r.add("cocycle " + s2.word() + " * " + s1.word(), rel_diff(lhs, rhs), 1e-10);
            }
        }
    });
}

SuiteReport verify_shift(const VerifyOptions& o) {
    return timed("shift", [&](SuiteReport& r) {
        AdmissibleSampler rnd(o.seed);
        for (double g : or_default(o.gammas, {0.9, 1.0, 1.25})) {
            for (int k = 0; k < or_default(o.trials, 100); ++k) {
                const TodaParams p(g, rnd.uniform(0.5, 1.5));
                for (int attempt = 0;; ++attempt) {
                    const ThreePointInput in = rnd.triple(p);
                    std::vector<CheckResult> local;
                    try {
                        for (double chi : {g, 2.0 / g}) {
                            for (int i : {1, 2}) {
                                const double res = check_shift_equation(i, chi, in);
                                local.push_back({fmt("shift", {{"gamma", g}, {"chi", chi}, {"i", i}, {"trial", k}}), res, 1e-8,
                                                 res <= 1e-8});
                            }
                        }
                    } catch (const Error&) {
                        // A shifted weight landed on a zero or pole of F; draw another triple.
                        if (attempt < 20) continue;
                        throw;
                    }
                    for (auto& c : local) r.checks.push_back(std::move(c));
                    break;
                }
            }
        }
    });
}

SuiteReport verify_blocks(const VerifyOptions& o) {
    return timed("blocks", [&](SuiteReport& r) {
        AdmissibleSampler rnd(o.seed);
        const auto gammas = or_default(o.gammas, {1.0});
        for (int k = 0; k < or_default(o.trials, 3); ++k) {
            const TodaParams p(gammas[k % gammas.size()], 1.0);
            BlockParams bp;
            for (;;) {
                const ThreePointInput in = rnd.triple(p);
                bp = BlockParams::from_shift(shift_coefficients(in, p.gamma));
                if (bp.generic(1e-6)) break;
            }

            // Series against coefficients built from Gamma ratios rather than the term recurrence.
            const cplx z0 = std::polar(0.5, 0.7);
            cplx direct = 0.0;
            for (int n = 0; n < 200; ++n) {
                LogSignedReal c = LogSignedReal::one();
                for (double a : bp.A) c *= gamma_signed(a + n) / gamma_signed(a);
                for (double b : bp.B) c *= gamma_signed(b) / gamma_signed(b + n);
                c /= gamma_signed(n + 1.0);
                direct += c.value() * std::pow(z0, n);
            }
            r.add(fmt("3F2 coefficients", {{"trial", k}}), std::abs(hyper_3f2(bp, z0).value - direct) / std::abs(direct),
                  1e-12);

            const double angles[] = {0.5, 1.5, 2.5, kPi, 4.0};
            for (Block b : {Block::H0, Block::H1, Block::H2, Block::G1, Block::G2, Block::G3}) {
                const bool at_zero = b == Block::H0 || b == Block::H1 || b == Block::H2;
                int n = 0;
                for (double rad : at_zero ? std::vector<double>{0.2, 0.4, 0.6, 0.8} : std::vector<double>{1.5, 2.0, 3.0, 4.0}) {
                    for (double th : angles) {
                        r.add(fmt((std::string("ode ") + block_name(b)).c_str(), {{"trial", k}, {"point", n++}}),
                              ode_residual(bp, b, std::polar(rad, th)), 1e-6);
                    }
                }
            }
            for (cplx z : {cplx(-2.0, 0.0), cplx(0.5, 2.0), cplx(-0.5, 1.0), cplx(-3.0, 0.0), cplx(0.0, 2.0)}) {
                r.add(fmt("thomae", {{"trial", k}, {"re_z", z.real()}, {"im_z", z.imag()}}),
                      thomae_connection_residual(bp, z), 1e-8);
            }
            for (int i = 1; i <= 3; ++i) {
                r.add(fmt("sine identity", {{"trial", k}, {"i", i}}), std::abs(crossing_sine_identity(bp, i)), 1e-10);
            }
        }
    });
}

SuiteReport verify_integral(const VerifyOptions&) {
    return timed("integral", [&](SuiteReport& r) {
        // a - b > 2 (no subtraction), 1 < a - b < 2 (|x|^b), a - b < 1 (|x|^b and the first-order term).
        const double pairs[][2] = {{0.5, -1.8}, {1.5, -0.8}, {1.7, 0.2}, {1.0, -0.5}, {1.2, -0.6},
                                   {0.3, -1.0}, {1.9, 1.2}, {1.5, 1.0}, {1.3, 0.6},  {-0.5, -1.2}};
        for (const auto& ab : pairs) {
            r.add(fmt("integral", {{"a", ab[0]}, {"b", ab[1]}}), fateev_integral(ab[0], ab[1]).residual, 1e-4);
        }
    });
}

SuiteReport verify_dozz_limit(const VerifyOptions& o) {
    return timed("dozz-limit", [&](SuiteReport& r) {
        AdmissibleSampler rnd(o.seed);
        const auto gammas = o.gammas;
        for (int k = 0; k < or_default(o.trials, 10); ++k) {
            const double g = gammas.empty() ? rnd.uniform(0.8, 1.3) : gammas[k % gammas.size()];
            const TodaParams p(g, rnd.uniform(0.5, 1.5));
            const WeightVector Q = p.Q();
            const ThreePointInput in{Q - rnd.uniform(0.15, 0.6) * basis::e1() - rnd.uniform(0.15, 0.6) * basis::e2(), 0.0,
                                     Q - rnd.uniform(0.15, 0.6) * basis::e1() - rnd.uniform(0.15, 0.6) * basis::e2(), p};
            const DozzLimitResult res = check_dozz_limit(in, {1e-4, 1e-5, 1e-6});
            r.add(fmt("dozz limit", {{"trial", k}, {"gamma", g}}), res.residual, 1e-6);
        }
    });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"upsilon", "reflection", "shift", "blocks", "integral", "dozz-limit"};
    return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& o) {
    if (name == "upsilon") return verify_upsilon(o);
    if (name == "reflection") return verify_reflection(o);
    if (name == "shift") return verify_shift(o);
    if (name == "blocks") return verify_blocks(o);
    if (name == "integral") return verify_integral(o);
    if (name == "dozz-limit") return verify_dozz_limit(o);
    throw Error(ErrorCode::InvalidArgument, "unknown suite \"" + name + "\"");
}

}  // namespace toda
