#include "todacft/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "todacft/errors.hpp"

namespace toda {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

bool is_integer(double x) { return std::floor(x) == x; }

// exp(z) - 1 without cancellation for small |z|.
cplx expm1c(cplx z) {
    const double em = std::expm1(z.real());
    const double s = std::sin(0.5 * z.imag());
    return {em * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

// log sin(pi z), any branch.
cplx log_sin_pi(cplx z) {
    const double n = std::round(z.real());
    const cplx f = z - n;
    cplx r;
    if (std::abs(f.imag()) < 15.0) {
        r = std::log(std::sin(kPi * f));
    } else if (f.imag() > 0) {
        // sin(pi f) = e^{-i pi f} (1 - e^{2 i pi f}) / (2i)
        const cplx i(0, 1);
        r = -i * kPi * f + std::log(1.0 - std::exp(2.0 * i * kPi * f)) - std::log(2.0 * i);
    } else {
        const cplx i(0, 1);
        r = i * kPi * f + std::log(1.0 - std::exp(-2.0 * i * kPi * f)) - std::log(-2.0 * i);
    }
    if (std::fmod(std::abs(n), 2.0) == 1.0) r += cplx(0, kPi);
    return r;
}

cplx log_gamma_any_branch(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && is_integer(z.real())) {
        std::ostringstream os;
        os << "Gamma pole at z = " << z.real();
        throw Error(ErrorCode::PoleAtNonPositiveInteger, os.str());
    }
    if (z.real() < 0.5) {
        return std::log(kPi) - log_sin_pi(z) - log_gamma_any_branch(1.0 - z);
    }
    cplx w = z;
    cplx prod = 1.0;
    while (std::abs(w) < 15.0) {
        prod *= w;
        w += 1.0;
    }
    static const double c[] = {1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188,
                               -691.0 / 360360, 1.0 / 156, -3617.0 / 122400};
    const cplx inv = 1.0 / w;
    const cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx p = inv;
    for (double ck : c) {
        series += ck * p;
        p *= inv2;
    }
    cplx r = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series;
    if (prod != 1.0) r -= std::log(prod);
    return r;
}

}  // namespace

double wrap_phase(double phase) {
    double p = std::remainder(phase, 2.0 * kPi);
    if (p <= -kPi) p += 2.0 * kPi;
    return p;
}

// ---------- LogSignedReal ----------

LogSignedReal LogSignedReal::from_value(double v) {
    if (v == 0.0) return zero();
    if (std::isinf(v)) return pole();
    return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

double LogSignedReal::value() const {
    if (is_zero()) return 0.0;
    if (is_pole()) return std::numeric_limits<double>::quiet_NaN();
    return sign * std::exp(log_abs);
}

LogSignedReal LogSignedReal::operator*(const LogSignedReal& o) const {
    if ((is_zero() && o.is_pole()) || (is_pole() && o.is_zero())) {
        throw Error(ErrorCode::InvalidArgument, "indeterminate product 0 * inf");
    }
    if (is_zero() || o.is_zero()) return zero();
    if (is_pole() || o.is_pole()) return pole();
    return {log_abs + o.log_abs, sign * o.sign};
}

LogSignedReal LogSignedReal::operator/(const LogSignedReal& o) const {
    if ((is_zero() && o.is_zero()) || (is_pole() && o.is_pole())) {
        throw Error(ErrorCode::InvalidArgument, "indeterminate quotient");
    }
    if (is_zero() || o.is_pole()) return zero();
    if (is_pole() || o.is_zero()) return pole();
    return {log_abs - o.log_abs, sign * o.sign};
}

// ---------- LogComplex ----------

LogComplex LogComplex::from_log(cplx log_value) { return {log_value.real(), wrap_phase(log_value.imag())}; }

LogComplex LogComplex::from_value(cplx v) {
    if (v == 0.0) return zero();
    return {std::log(std::abs(v)), std::arg(v)};
}

cplx LogComplex::value() const {
    if (is_zero()) return 0.0;
    return std::polar(std::exp(log_abs), phase);
}

LogComplex LogComplex::operator*(const LogComplex& o) const {
    if (is_zero() || o.is_zero()) return zero();
    return {log_abs + o.log_abs, wrap_phase(phase + o.phase)};
}

LogComplex LogComplex::operator/(const LogComplex& o) const {
    if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by exact zero");
    if (is_zero()) return zero();
    return {log_abs - o.log_abs, wrap_phase(phase - o.phase)};
}

LogSignedReal LogComplex::to_real(double tol) const {
    if (is_zero()) return LogSignedReal::zero();
    if (std::abs(phase) < tol) return {log_abs, 1};
    if (kPi - std::abs(phase) < tol) return {log_abs, -1};
    std::ostringstream os;
    os << "value is not real (phase " << phase << ")";
    throw Error(ErrorCode::DomainViolation, os.str());
}

// ---------- Gamma and l ----------

LogComplex log_gamma(cplx z) { return LogComplex::from_log(log_gamma_any_branch(z)); }

LogSignedReal gamma_signed(double x) {
    if (x <= 0.0 && is_integer(x)) return LogSignedReal::pole();
    int sg = 1;
    const double lg = lgamma_r(x, &sg);
    return {lg, sg};
}

LogSignedReal l_func(double x) {
    if (is_integer(x)) return x >= 1.0 ? LogSignedReal::zero() : LogSignedReal::pole();
    return gamma_signed(x) / gamma_signed(1.0 - x);
}

LogComplex l_func(cplx x) {
    if (x.imag() == 0.0) {
        const LogSignedReal r = l_func(x.real());
        if (r.is_zero()) return LogComplex::zero();
        if (r.is_pole()) throw IntegerArgumentError(true, "l(x) at a non-positive integer");
        return {r.log_abs, r.sign > 0 ? 0.0 : kPi};
    }
    return log_gamma(x) / log_gamma(1.0 - x);
}

// ---------- Upsilon ----------

cplx upsilon_log_integral(cplx z, double gamma) {
    const double q = gamma + 2.0 / gamma;
    if (!(z.real() > 0.0 && z.real() < q)) {
        throw Error(ErrorCode::DomainViolation, "Upsilon integral needs 0 < Re z < q");
    }
    const cplx w = 0.5 * q - z;
    if (w == 0.0) return 0.0;
    cplx a = w / (2.0 * kSqrt2);
    if (a.real() < 0) a = -a;
    const double b = gamma / (2.0 * kSqrt2);
    const double c = 1.0 / (kSqrt2 * gamma);
    const cplx w2h = 0.5 * w * w;

    // Small-t Maclaurin expansion of the integrand, integrated exactly on [0, t0].
    const double t0 = 1e-3;
    const cplx a2 = a * a;
    const double b2 = b * b, c2 = c * c;
    const cplx p1 = a2 / 3.0 - b2 / 6.0 - c2 / 6.0;
    const cplx p2 = 2.0 * a2 * a2 / 45.0 + 7.0 * (b2 * b2 + c2 * c2) / 360.0 - a2 * (b2 + c2) / 18.0 +
                    b2 * c2 / 36.0;
    const cplx head = w2h * (-t0 + (0.5 - p1) * t0 * t0 / 2.0 - t0 * t0 * t0 / 18.0 +
                             (1.0 / 24.0 - p2) * std::pow(t0, 4) / 4.0 - std::pow(t0, 5) / 600.0);

    auto f = [&](double t) -> cplx {
        const cplx num = expm1c(-2.0 * a * t);
        const double den = std::expm1(-2.0 * b * t) * std::expm1(-2.0 * c * t);
        const cplx s = std::exp((2.0 * a - b - c) * t) * num * num / den;
        return (w2h * std::exp(-t) - s) / t;
    };
    auto fr = [&](double t) { return f(t).real(); };
    auto fi = [&](double t) { return f(t).imag(); };

    const double rate = std::min(1.0, b + c - 2.0 * a.real());
    const double T = 40.0 / rate;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto integrate = [&](auto&& g) {
        double err = 0;
        return GK::integrate(g, t0, 1.0, 12, 1e-11, &err) + GK::integrate(g, 1.0, T, 12, 1e-11, &err);
    };
    const double re = integrate(fr);
    const double im = w.imag() == 0.0 ? 0.0 : integrate(fi);
    return head + cplx(re, im);
}

bool upsilon_is_lattice_zero(cplx z, double gamma) {
    const double tol = 1e-13 * (1.0 + std::abs(z));
    if (std::abs(z.imag()) > tol) return false;
    const double q = gamma + 2.0 / gamma;
    double x = z.real();
    if (x > tol && x < q - tol) return false;
    double d = x <= tol ? -x : x - q;  // distance into the lattice cone
    for (int n = 0; 2.0 * n / gamma <= d + tol; ++n) {
        const double r = (d - 2.0 * n / gamma) / gamma;
        if (std::abs(r - std::round(r)) * gamma < tol && std::round(r) >= 0) return true;
    }
    return false;
}

LogComplex upsilon_log(cplx z, double gamma) {
    if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
    if (upsilon_is_lattice_zero(z, gamma)) return LogComplex::zero();
    const double q = gamma + 2.0 / gamma;

    // ln U(z + chi) - ln U(z) = ln l(chi z / 2) + (1 - chi z) ln(chi / sqrt2)
    auto factor = [&](cplx x, double chi) -> cplx {
        const LogComplex l = l_func(chi * x / 2.0);
        return l.log() + (1.0 - chi * x) * std::log(chi / kSqrt2);
    };

    cplx acc = 0.0;
    cplx x = z;
    // Larger step first, then gamma, into the window |Re x - q/2| <= gamma/2.
    for (const double chi : {2.0 / gamma, gamma}) {
        const double half = 0.5 * chi;
        while (x.real() - 0.5 * q > half) {
            x -= chi;
            acc += factor(x, chi);
        }
        while (x.real() - 0.5 * q < -half) {
            acc -= factor(x, chi);
            x += chi;
        }
    }
    return LogComplex::from_log(acc + upsilon_log_integral(x, gamma));
}

LogSignedReal upsilon_log(double z, double gamma) { return upsilon_log(cplx(z, 0.0), gamma).to_real(); }

double upsilon_prime_zero(double gamma) {
    return upsilon_log(gamma, gamma).value() / kSqrt2;
}

}  // namespace toda
