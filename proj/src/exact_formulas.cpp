#include "todacft/exact_formulas.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <sstream>

#include "todacft/errors.hpp"

namespace toda {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

double single_mu(const TodaParams& p) {
    if (p.mu1 != p.mu2) {
        throw Error(ErrorCode::InvalidArgument, "this formula is defined for mu1 == mu2 only");
    }
    return p.mu1;
}

// l(x) that must be finite; names the offending factor otherwise.
LogSignedReal finite_l(double x, const char* factor) {
    const LogSignedReal r = l_func(x);
    if (!r.is_finite()) {
        std::ostringstream os;
        os << "factor " << factor << " has integer argument " << x;
        throw IntegerArgumentError(r.is_pole(), os.str());
    }
    return r;
}

LogSignedReal finite_gamma(double x, const std::string& factor) {
    const LogSignedReal r = gamma_signed(x);
    if (r.is_pole()) {
        std::ostringstream os;
        os << "factor " << factor << " at argument " << x;
        throw Error(ErrorCode::GammaPole, os.str());
    }
    return r;
}

// Neville extrapolation of (x_k, y_k) to x = 0.
double extrapolate_to_zero(const std::vector<double>& x, std::vector<double> y) {
    const size_t n = x.size();
    for (size_t m = 1; m < n; ++m) {
        for (size_t k = 0; k + m < n; ++k) {
            y[k] = (x[k + m] * y[k] - x[k] * y[k + 1]) / (x[k + m] - x[k]);
        }
    }
    return y[0];
}

}  // namespace

WeightVector ThreePointInput::s_vector() const {
    return alpha0 + alpha1() + alpha_inf - 2.0 * params.Q();
}

std::array<double, 2> ThreePointInput::s_exponents() const {
    const WeightVector s = s_vector();
    return {pairing(s, basis::omega1()) / params.gamma, pairing(s, basis::omega2()) / params.gamma};
}

std::vector<std::string> Evaluation::flags() const {
    std::vector<std::string> f;
    if (denominator_zero) f.emplace_back("DenominatorZero");
    if (numerator_zero) f.emplace_back("NumeratorZero");
    return f;
}

namespace {

// Multiplies num / den factors with zero bookkeeping.
struct FactorProduct {
    Evaluation ev{LogSignedReal::one()};
    LogSignedReal num = LogSignedReal::one();
    LogSignedReal den = LogSignedReal::one();

    void mul(const LogSignedReal& v) {
        if (v.is_zero()) ev.numerator_zero = true;
        else num *= v;
    }
    void div(const LogSignedReal& v) {
        if (v.is_zero()) ev.denominator_zero = true;
        else den *= v;
    }
    Evaluation finish() {
        if (ev.denominator_zero) ev.value = LogSignedReal::pole();
        else if (ev.numerator_zero) ev.value = LogSignedReal::zero();
        else ev.value = num / den;
        return ev;
    }
};

}  // namespace

double fateev_litvinov_mu_exponent(const ThreePointInput& in) {
    const WeightVector Q = in.params.Q();
    const WeightVector abar = in.alpha0 + in.alpha1() + in.alpha_inf;
    return pairing(2.0 * Q - abar, basis::rho()) / in.params.gamma;
}

Evaluation fateev_litvinov(const ThreePointInput& in) {
    const TodaParams& p = in.params;
    const double g = p.gamma;
    const double mu = single_mu(p);
    const WeightVector Q = p.Q();

    const double E = fateev_litvinov_mu_exponent(in);
    const LogSignedReal lg = finite_l(g * g / 2.0, "l(gamma^2/2)");
    if (lg.sign < 0) throw Error(ErrorCode::DomainViolation, "l(gamma^2/2) must be positive");
    const double log_base = std::log(kPi * mu) + lg.log_abs + (2.0 - g * g) * std::log(g / kSqrt2);

    FactorProduct fp;
    fp.mul(LogSignedReal::exp_of(E * log_base));
    const double up0 = upsilon_prime_zero(g);
    fp.mul(LogSignedReal::from_value(up0 * up0));
    fp.mul(upsilon_log(in.kappa, g));
    for (const auto& e : basis::positive_roots()) {
        fp.mul(upsilon_log(pairing(Q - in.alpha0, e), g));
        fp.mul(upsilon_log(pairing(Q - in.alpha_inf, e), g));
    }
    for (int j = 1; j <= 3; ++j) {
        for (int k = 1; k <= 3; ++k) {
            const double x = in.kappa / 3.0 + pairing(in.alpha0 - Q, basis::h(j)) +
                             pairing(in.alpha_inf - Q, basis::h(k));
            fp.div(upsilon_log(x, g));
        }
    }
    return fp.finish();
}

LogSignedReal reflection_A(const WeightVector& alpha, const TodaParams& p) {
    const double g = p.gamma;
    const LogSignedReal lg = finite_l(g * g / 2.0, "l(gamma^2/2)");
    if (lg.sign < 0) throw Error(ErrorCode::DomainViolation, "l(gamma^2/2) must be positive");
    LogSignedReal r = LogSignedReal::one();
    const double mus[2] = {p.mu1, p.mu2};
    const WeightVector omegas[2] = {basis::omega1(), basis::omega2()};
    for (int i = 0; i < 2; ++i) {
        const double c = pairing(alpha, omegas[i]) / g;
        r *= LogSignedReal::exp_of(c * (std::log(mus[i] * kPi) + lg.log_abs));
    }
    static const char* names[3] = {"e1", "e2", "e1+e2"};
    const auto roots = basis::positive_roots();
    for (int k = 0; k < 3; ++k) {
        const double ae = pairing(alpha, roots[k]);
        r *= finite_gamma(1.0 - 0.5 * g * ae, std::string("Gamma(1 - gamma/2 <alpha,") + names[k] + ">)");
        r *= finite_gamma(1.0 - ae / g, std::string("Gamma(1 - <alpha,") + names[k] + ">/gamma)");
    }
    return r;
}

LogSignedReal reflection_coeff(const WeylElement& s, const WeightVector& alpha, const TodaParams& p) {
    const WeightVector d = alpha - p.Q();
    LogSignedReal r = reflection_A(s.apply(d), p) / reflection_A(d, p);
    r.sign *= s.sign();
    return r;
}

LogSignedReal liouville_reflection(double alpha, double gamma, double mu) {
    const double Q = gamma / 2.0 + 2.0 / gamma;
    const double d = alpha - Q;
    if (std::abs(d) < 1e-14 * (1.0 + Q)) {
        throw Error(ErrorCode::WallDegeneracy, "alpha = Q: removable singularity, formal value -1");
    }
    const LogSignedReal lg = finite_l(gamma * gamma / 4.0, "l(gamma^2/4)");
    LogSignedReal r = LogSignedReal::exp_of(-2.0 * d / gamma * (std::log(kPi * mu) + lg.log_abs));
    r.sign = -1;
    r *= finite_gamma(2.0 * d / gamma, "Gamma(2(alpha-Q)/gamma)");
    r *= finite_gamma(gamma * d / 2.0, "Gamma(gamma(alpha-Q)/2)");
    r /= finite_gamma(-2.0 * d / gamma, "Gamma(2(Q-alpha)/gamma)");
    r /= finite_gamma(-gamma * d / 2.0, "Gamma(gamma(Q-alpha)/2)");
    return r;
}

Evaluation dozz(double a1, double a2, double a3, double gamma_tilde, double mu) {
    const double gt = gamma_tilde;
    if (!(gt > 0.0 && gt < 2.0)) throw Error(ErrorCode::InvalidArgument, "gamma_tilde must lie in (0,2)");
    const double gp = gt / kSqrt2;  // Upsilon_b(x) = U_{gp}(sqrt2 x), b = gt/2
    const double Qt = gt / 2.0 + 2.0 / gt;
    const double ab = a1 + a2 + a3;
    auto Ub = [&](double x) { return upsilon_log(kSqrt2 * x, gp); };

    const LogSignedReal lg = finite_l(gt * gt / 4.0, "l(gamma^2/4)");
    const double log_base = std::log(kPi * mu) + lg.log_abs + (2.0 - gt * gt / 2.0) * std::log(gt / 2.0);

    FactorProduct fp;
    fp.mul(LogSignedReal::exp_of((2.0 * Qt - ab) / gt * log_base));
    fp.mul(LogSignedReal::from_value(kSqrt2 * upsilon_prime_zero(gp)));
    for (double a : {a1, a2, a3}) {
        fp.mul(Ub(a));
        fp.div(Ub(ab / 2.0 - a));
    }
    fp.div(Ub(ab / 2.0 - Qt));
    return fp.finish();
}

ShiftCoefficients shift_coefficients(const ThreePointInput& in, double chi) {
    const WeightVector Q = in.params.Q();
    const WeightVector h1 = basis::h(1);
    const WeightVector alpha = -chi * h1;
    ShiftCoefficients c;
    c.chi = chi;
    const double base = 0.5 * chi * pairing(in.alpha0 + in.alpha1() + alpha - Q, h1);
    for (int j = 0; j < 3; ++j) c.A[j] = base + 0.5 * chi * pairing(in.alpha_inf - Q, basis::h(j + 1));
    for (int i = 0; i < 2; ++i) c.B[i] = 1.0 + 0.5 * chi * pairing(in.alpha0 - Q, h1 - basis::h(i + 2));
    return c;
}

// Normalized so that F(a0 - chi h_{i+1}) / F(a0 - chi h_1) = A^(i) / B^(i).
LogSignedReal shift_coeff_A(int i, const ShiftCoefficients& c) {
    if (i != 1 && i != 2) throw Error(ErrorCode::InvalidArgument, "shift_coeff_A index must be 1 or 2");
    const double B1 = c.B[0], B2 = c.B[1], Bi = c.B[i - 1];
    LogSignedReal r = finite_l(B1, "l(B1)") * finite_l(B2, "l(B2)") * finite_l(Bi - 1.0, "l(B_i - 1)");
    r /= finite_l(1.0 + B1 + B2 - 2.0 * Bi, "l(1 + B1 + B2 - 2B_i)");
    for (double Aj : c.A) {
        r /= finite_l(Aj, "l(A_j)");
        r /= finite_l(Bi - Aj, "l(B_i - A_j)");
    }
    return r;
}

LogSignedReal shift_coeff_A(int i, double chi, const ThreePointInput& in) {
    return shift_coeff_A(i, shift_coefficients(in, chi));
}

LogSignedReal shift_coeff_B(int i, const WeightVector& alpha0, double chi, const TodaParams& p) {
    if (i < 0 || i > 2) throw Error(ErrorCode::InvalidArgument, "shift_coeff_B index must be 0, 1 or 2");
    const double g = p.gamma;
    const double mu = single_mu(p);
    const WeightVector Q = p.Q();
    const LogSignedReal lg = finite_l(g * g / 2.0, "l(gamma^2/2)");
    const LogSignedReal base =
        LogSignedReal{chi / g * std::log(kPi * mu), 1} * LogSignedReal{chi / g * lg.log_abs, 1} *
        LogSignedReal::from_value(std::pow(chi * chi / 2.0, 2));
    LogSignedReal r = LogSignedReal::one();
    for (int j = 1; j <= i; ++j) {
        const double x = 0.5 * chi * pairing(alpha0 - Q, basis::h(j) - basis::h(i + 1));
        r *= base * finite_l(x, "l(x_j)") / finite_l(1.0 + chi * chi / 2.0 + x, "l(1 + chi^2/2 + x_j)");
    }
    return r;
}

namespace {
LogSignedReal finite_F(const ThreePointInput& in) {
    const Evaluation ev = fateev_litvinov(in);
    if (!ev.finite()) {
        throw Error(ErrorCode::DomainViolation,
                    ev.denominator_zero ? "F has a pole at a shifted weight" : "F vanishes at a shifted weight");
    }
    return ev.value;
}
}  // namespace

double check_shift_equation(int i, double chi, const ThreePointInput& in) {
    if (i != 1 && i != 2) throw Error(ErrorCode::InvalidArgument, "shift equation index must be 1 or 2");
    const LogSignedReal A = shift_coeff_A(i, chi, in);
    const LogSignedReal B = shift_coeff_B(i, in.alpha0, chi, in.params);
    ThreePointInput up = in, down = in;
    up.alpha0 = in.alpha0 - chi * basis::h(i + 1);
    down.alpha0 = in.alpha0 - chi * basis::h(1);
    const LogSignedReal lhs = finite_F(up) / finite_F(down);
    const LogSignedReal rhs = A / B;
    const double ratio = std::exp(lhs.log_abs - rhs.log_abs);
    return lhs.sign == rhs.sign ? std::abs(std::expm1(lhs.log_abs - rhs.log_abs)) : ratio + 1.0;
}

Evaluation extended_three_point(const ThreePointInput& in) {
    const DominantRep rep = dominant_representative(in.alpha0, in.params);
    if (rep.s->id() == WeylElement::Identity) return fateev_litvinov(in);
    ThreePointInput reflected = in;
    reflected.alpha0 = rep.alpha;
    Evaluation ev = fateev_litvinov(reflected);
    if (ev.finite()) ev.value *= reflection_coeff(*rep.s, in.alpha0, in.params);
    return ev;
}

DozzLimitResult check_dozz_limit(const ThreePointInput& in, const std::vector<double>& epsilons) {
    if (epsilons.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two epsilons");
    const WeightVector Q = in.params.Q();
    const double base = pairing(in.alpha0 + in.alpha_inf - 2.0 * Q, basis::omega1());
    DozzLimitResult res;
    res.epsilons = epsilons;
    res.kappa0 = -3.0 * base;
    for (double eps : epsilons) {
        ThreePointInput t = in;
        t.kappa = 3.0 * (eps - base);
        res.scaled_values.push_back(eps * finite_F(t).value());
    }
    res.limit = extrapolate_to_zero(epsilons, res.scaled_values);
    const double g = in.params.gamma;
    const Evaluation d = dozz(pairing(in.alpha0, basis::e2()) / kSqrt2, res.kappa0 / kSqrt2,
                              pairing(in.alpha_inf, basis::e2()) / kSqrt2, kSqrt2 * g, single_mu(in.params));
    if (!d.finite()) throw Error(ErrorCode::DomainViolation, "DOZZ reference is not finite");
    res.reference = d.value.value() / kSqrt2;
    res.residual = std::abs(res.limit - res.reference) / std::abs(res.reference);
    for (size_t k = 0; k < epsilons.size(); ++k) {
        res.slopes.push_back((res.scaled_values[k] - res.limit) / epsilons[k]);
    }
    return res;
}

IntegralCheck fateev_integral(double a, double b) {
    const double d = a - b;
    const double tol = 1e-12;
    if (!(a < 2.0) || !(b > -2.0) || !(d > 0.0) || std::abs(d - 1.0) < tol || std::abs(d - 2.0) < tol) {
        std::ostringstream os;
        os << "need a < 2, b > -2, a - b in (0, inf) minus {1, 2}; got a = " << a << ", b = " << b;
        throw Error(ErrorCode::DomainViolation, os.str());
    }
    IntegralCheck res;
    const LogSignedReal lb = l_func(-b / 2.0);
    if (lb.is_pole()) {
        res.closed = 0.0;
    } else {
        res.closed = (LogSignedReal::from_value(kPi) * l_func(-1.0 + d / 2.0) / (lb * l_func(a / 2.0))).value();
    }

    const bool sub0 = d < 2.0;  // subtract |x|^b
    const bool sub1 = d < 1.0;  // subtract the first-order term of |x-1|^b at infinity

    // Integrand at x with Re x = u, |x|^2 = r2, |x-1|^2 = d2 (passed separately to avoid cancellation).
    auto density = [&](double u, double r2, double d2) {
        if (r2 <= 0.0 || d2 <= 0.0) return 0.0;  // integrable singular points
        double val = std::pow(d2, 0.5 * b);
        if (sub0) val -= std::pow(r2, 0.5 * b);
        if (sub1) val += b * u * std::pow(r2, 0.5 * b - 1.0);
        val *= std::pow(r2, -0.5 * a);
        // Underflow next to the integrable singular points; the point itself has no mass.
        return std::isfinite(val) ? val : 0.0;
    };

    // |x| < 2 is split into the disc |x-1| < 1/2 (polar around 1) and the rest (polar around 0);
    // the upper half-plane is doubled by conjugation symmetry.
    boost::math::quadrature::tanh_sinh<double> ts(12);
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double rq = 1e-10;
    auto around_one = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        auto f = [&](double phi) {
            const double u = 1.0 + rho * std::cos(phi);
            const double v = rho * std::sin(phi);
            return density(u, u * u + v * v, rho * rho);
        };
        return 2.0 * rho * GK::integrate(f, 0.0, kPi, 10, rq);
    };
    auto around_zero = [&](double r) {
        if (r <= 0.0) return 0.0;
        double tmin = 0.0;
        const double c = (r * r + 0.75) / (2.0 * r);
        if (c < 1.0) tmin = std::acos(c);
        auto f = [&](double t) {
            const double sh = std::sin(0.5 * t);
            return density(r * std::cos(t), r * r, (r - 1.0) * (r - 1.0) + 4.0 * r * sh * sh) * r;
        };
        return 2.0 * GK::integrate(f, tmin, kPi, 10, rq);
    };
    double inner = ts.integrate(around_one, 0.0, 0.5, rq);
    const double cuts[] = {0.0, 0.5, 1.0, 1.5, 2.0};
    for (int k = 0; k < 4; ++k) inner += ts.integrate(around_zero, cuts[k], cuts[k + 1], rq);

    // |x| > 2: angular average of |1 - 1/x|^b is sum_m c_m^2 r^{-2m}, c_m = (-b/2)_m / m!;
    // each radial power integrates exactly.
    double outer = 0.0;
    double cm = 1.0;
    for (int m = 0; m < 400; ++m) {
        if (m > 0 || !sub0) {
            const double p = 2.0 * m - 2.0 + d;
            const double term = 2.0 * kPi * cm * cm * std::pow(2.0, -p) / p;
            outer += term;
            if (m > 2 && std::abs(term) < 1e-17 * std::abs(outer)) break;
        }
        cm *= (m - b / 2.0) / (m + 1.0);
    }
    res.quadrature = inner + outer;
    res.residual = res.closed == 0.0 ? std::abs(res.quadrature)
                                     : std::abs(res.quadrature - res.closed) / std::abs(res.closed);
    return res;
}

}  // namespace toda
