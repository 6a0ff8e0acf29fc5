#include "todacft/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "todacft/errors.hpp"

namespace toda {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesRadius = 0.9;
constexpr double kInfinityRadius = 1.12;

double integer_distance(double x) { return std::abs(x - std::round(x)); }

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Series with termwise first and second derivatives.
struct SeriesJet {
    Jet jet;
    int n_terms = 0;
    double bound = 0.0;
};

SeriesJet series_jet(const std::array<double, 3>& a, const std::array<double, 2>& b, cplx z) {
    for (double bk : b) {
        if (nonpositive_integer(bk)) {
            std::ostringstream os;
            os << "lower parameter " << bk << " is a non-positive integer";
            throw Error(ErrorCode::BParameterNonPositiveInteger, os.str());
        }
    }
    const double az = std::abs(z);
    if (az > kSeriesRadius * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "|z| = " << az << " outside the series domain |z| <= " << kSeriesRadius;
        throw Error(ErrorCode::SeriesDivergence, os.str());
    }
    SeriesJet out;
    cplx s0 = 1.0, s1 = 0.0, s2 = 0.0;
    double c = 1.0;  // c_n
    cplx zpow[3] = {0.0, 0.0, 1.0};  // z^{n-2}, z^{n-1}, z^n
    const double bb[3] = {b[0], b[1], 1.0};
    const int max_terms = 5000;
    for (int n = 0; n < max_terms; ++n) {
        c *= (n + a[0]) * (n + a[1]) * (n + a[2]) / ((n + 1.0) * (n + b[0]) * (n + b[1]));
        zpow[0] = zpow[1];
        zpow[1] = zpow[2];
        zpow[2] *= z;
        const double m = n + 1.0;
        const cplx t0 = c * zpow[2], t1 = m * c * zpow[1], t2 = m * (m - 1.0) * c * zpow[0];
        s0 += t0;
        s1 += t1;
        s2 += t2;
        if (c == 0.0 || az == 0.0) {
            out.n_terms = n + 2;
            out.jet = {s0, s1, s2};
            return out;
        }
        // For k >= m: |c_{k+1} z / c_k| <= az * prod_i (1 + |a_i - b_i| / (k + b_i)), decreasing in k.
        double rbar = az;
        bool ok = m > 2.0;
        for (int i = 0; i < 3 && ok; ++i) {
            const double den = m + bb[i];
            if (den <= 0.0) ok = false;
            else rbar *= 1.0 + std::abs(a[i] - bb[i]) / den;
        }
        if (!ok) continue;
        const double r0 = rbar, r1 = rbar * (m + 1.0) / m, r2 = rbar * (m + 1.0) / (m - 1.0);
        if (r2 >= 1.0) continue;
        const double tail0 = std::abs(t0) * r0 / (1.0 - r0);
        const double tail1 = std::abs(t1) * r1 / (1.0 - r1);
        const double tail2 = std::abs(t2) * r2 / (1.0 - r2);
        if (tail0 <= 1e-17 * std::abs(s0) && tail1 <= 1e-17 * (std::abs(s1) + std::abs(s0)) &&
            tail2 <= 1e-17 * (std::abs(s2) + std::abs(s0))) {
            out.n_terms = n + 2;
            out.bound = tail0;
            out.jet = {s0, s1, s2};
            return out;
        }
    }
    throw Error(ErrorCode::SeriesDivergence, "series did not converge");
}

// Jet of p(z) * F(w(z)) for the prefactored blocks.
Jet h_jet(int i, const BlockParams& p, cplx z) {
    const auto& A = p.A;
    const auto& B = p.B;
    if (i == 0) return series_jet(A, B, z).jet;
    const double Bi = B[i - 1], Bo = B[2 - i];
    const double e = 1.0 - Bi;
    const std::array<double, 3> a{e + A[0], e + A[1], e + A[2]};
    const std::array<double, 2> b = i == 1 ? std::array<double, 2>{2.0 - Bi, e + Bo}
                                           : std::array<double, 2>{e + Bo, 2.0 - Bi};
    const Jet F = series_jet(a, b, z).jet;
    const cplx lz = std::log(z);
    const cplx pz = std::exp(e * lz);
    const cplx p1 = e * pz / z;
    const cplx p2 = e * (e - 1.0) * pz / (z * z);
    return {pz * F.f, p1 * F.f + pz * F.df, p2 * F.f + 2.0 * p1 * F.df + pz * F.d2f};
}

std::array<double, 3> g_upper(int i, const BlockParams& p, std::array<double, 2>* lower) {
    const auto& A = p.A;
    const double Ai = A[(i - 1) % 3];
    const double Aprev = A[(i + 1) % 3];  // A_{i-1} with indices mod 3
    const double Anext = A[i % 3];        // A_{i+1}
    *lower = {1.0 + Ai - Aprev, 1.0 + Ai - Anext};
    return {Ai, 1.0 + Ai - p.B[0], 1.0 + Ai - p.B[1]};
}

Jet g_jet(int i, const BlockParams& p, cplx z) {
    if (std::abs(z) < kInfinityRadius * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "|z| = " << std::abs(z) << " outside the series domain |z| >= " << kInfinityRadius;
        throw Error(ErrorCode::SeriesDivergence, os.str());
    }
    std::array<double, 2> b;
    const std::array<double, 3> a = g_upper(i, p, &b);
    const double Ai = a[0];
    const cplx w = 1.0 / z;
    const Jet F = series_jet(a, b, w).jet;
    const cplx pz = std::exp(-Ai * std::log(-z));
    const cplx p1 = -Ai * pz / z;
    const cplx p2 = Ai * (Ai + 1.0) * pz / (z * z);
    const cplx f = F.f;
    const cplx f1 = -F.df * w * w;
    const cplx f2 = F.d2f * w * w * w * w + 2.0 * F.df * w * w * w;
    return {pz * f, p1 * f + pz * f1, p2 * f + 2.0 * p1 * f1 + pz * f2};
}

// Taylor continuation of a solution jet of the ODE from `from` to `to` along a straight segment.
Jet continue_jet(const BlockParams& p, Jet jet, cplx from, cplx to) {
    const double e1 = p.A[0] + p.A[1] + p.A[2];
    const double e2 = p.A[0] * p.A[1] + p.A[0] * p.A[2] + p.A[1] * p.A[2];
    const double e3 = p.A[0] * p.A[1] * p.A[2];
    const double B1 = p.B[0], B2 = p.B[1];
    cplx c = from;
    std::vector<cplx> a;
    for (int step = 0; step < 10000 && c != to; ++step) {
        const double dist = std::min(std::abs(c), std::abs(c - 1.0));
        cplx h = to - c;
        if (std::abs(h) > 0.5 * dist) h *= 0.5 * dist / std::abs(h);
        // Coefficients of p3 = z^3 - z^2, p2, p1, p0 in powers of t = z - c.
        const cplx P3[4] = {c * c * c - c * c, 3.0 * c * c - 2.0 * c, 3.0 * c - 1.0, 1.0};
        const cplx P2[3] = {(e1 + 3.0) * c * c - (B1 + B2 + 1.0) * c, 2.0 * (e1 + 3.0) * c - (B1 + B2 + 1.0),
                            e1 + 3.0};
        const cplx P1[2] = {(e1 + e2 + 1.0) * c - B1 * B2, e1 + e2 + 1.0};
        a.assign({jet.f, jet.df, 0.5 * jet.d2f});
        cplx f = a[0] + a[1] * h + a[2] * h * h;
        cplx df = a[1] + 2.0 * a[2] * h;
        cplx d2f = 2.0 * a[2];
        cplx hp = h;  // h^{k-2} for the next coefficient index k = n + 3
        int small = 0;
        for (int n = 0; n < 400; ++n) {
            cplx acc = 0.0;
            for (int j = 1; j <= 3; ++j) {
                const int k = n - j + 3;
                if (k >= 0) acc += P3[j] * double(k) * (k - 1.0) * (k - 2.0) * a[k];
            }
            for (int j = 0; j <= 2; ++j) {
                const int k = n - j + 2;
                if (k >= 0) acc += P2[j] * double(k) * (k - 1.0) * a[k];
            }
            for (int j = 0; j <= 1; ++j) {
                const int k = n - j + 1;
                if (k >= 0) acc += P1[j] * double(k) * a[k];
            }
            acc += e3 * a[n];
            const double k = n + 3.0;
            const cplx ak = -acc / (P3[0] * k * (k - 1.0) * (k - 2.0));
            a.push_back(ak);
            const cplx u2 = k * (k - 1.0) * ak * hp;
            const cplx u1 = k * ak * hp * h;
            const cplx u0 = ak * hp * h * h;
            f += u0;
            df += u1;
            d2f += u2;
            hp *= h;
            const double mag = std::abs(u0) + std::abs(u1) + std::abs(u2);
            small = mag < 1e-18 * (std::abs(f) + std::abs(df) + std::abs(d2f)) ? small + 1 : 0;
            if (small >= 3) break;
        }
        jet = {f, df, d2f};
        c += h;
        if (std::abs(to - c) < 1e-15 * std::abs(to)) c = to;
    }
    return jet;
}

double segment_distance_to_one(cplx a, cplx b) {
    const cplx d = b - a;
    double t = std::real((1.0 - a) * std::conj(d)) / std::norm(d);
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(a + t * d - 1.0);
}

}  // namespace

std::vector<std::string> BlockParams::genericity_issues(double threshold) const {
    const double v[6] = {0.0, B[0], B[1], A[0], A[1], A[2]};
    static const char* names[6] = {"0", "B1", "B2", "A1", "A2", "A3"};
    std::vector<std::string> out;
    for (int i = 0; i < 6; ++i) {
        for (int j = i + 1; j < 6; ++j) {
            if (integer_distance(v[i] - v[j]) < threshold) {
                out.push_back(std::string(names[j]) + " - " + names[i] + " is an integer");
            }
        }
    }
    return out;
}

BlockValue hyper_3f2(const std::array<double, 3>& a, const std::array<double, 2>& b, cplx z) {
    const SeriesJet s = series_jet(a, b, z);
    return {s.jet.f, s.n_terms, s.bound};
}

BlockValue hyper_3f2(const BlockParams& p, cplx z) { return hyper_3f2(p.A, p.B, z); }

const char* block_name(Block b) {
    switch (b) {
        case Block::H0: return "H0";
        case Block::H1: return "H1";
        case Block::H2: return "H2";
        case Block::G1: return "G1";
        case Block::G2: return "G2";
        case Block::G3: return "G3";
    }
    return "?";
}

cplx block_H(int i, const BlockParams& p, cplx z) {
    if (i < 0 || i > 2) throw Error(ErrorCode::InvalidArgument, "H index must be 0, 1 or 2");
    return h_jet(i, p, z).f;
}

cplx block_G(int i, const BlockParams& p, cplx z) {
    if (i < 1 || i > 3) throw Error(ErrorCode::InvalidArgument, "G index must be 1, 2 or 3");
    return g_jet(i, p, z).f;
}

Jet block_jet(Block b, const BlockParams& p, cplx z) {
    const bool is_h = b == Block::H0 || b == Block::H1 || b == Block::H2;
    const int idx = static_cast<int>(b) - (is_h ? 0 : 2);
    const double r = std::abs(z);
    if (is_h && r <= kSeriesRadius) return h_jet(idx, p, z);
    if (!is_h && r >= kInfinityRadius) return g_jet(idx, p, z);
    if (r < 0.05) throw Error(ErrorCode::DomainViolation, "continuation target too close to z = 0");
    // Radial path from inside the series domain; on the negative axis the start point carries +0 imaginary part.
    const double anchor = is_h ? 0.5 : 1.5;
    cplx start = anchor * z / r;
    if (z.imag() == 0.0) start = cplx(start.real(), 0.0);
    if (segment_distance_to_one(start, z) < 0.1) {
        throw Error(ErrorCode::DomainViolation, "continuation path passes too close to z = 1");
    }
    const Jet j0 = is_h ? h_jet(idx, p, start) : g_jet(idx, p, start);
    return continue_jet(p, j0, start, z);
}

cplx block_value(Block b, const BlockParams& p, cplx z) { return block_jet(b, p, z).f; }

double thomae_connection_residual(const BlockParams& p, cplx z) {
    const auto issues = p.genericity_issues();
    if (!issues.empty()) throw Error(ErrorCode::NonGenericParameters, issues.front());
    const auto& A = p.A;
    const auto& B = p.B;
    auto lg = [](double x) { return log_gamma(cplx(x, 0.0)); };
    const LogComplex pre = lg(A[0]) * lg(A[1]) * lg(A[2]) / (lg(B[0]) * lg(B[1]));
    const cplx lhs = pre.value() * block_value(Block::H0, p, z);
    cplx rhs = 0.0;
    double scale = std::abs(lhs);
    const Block gs[3] = {Block::G1, Block::G2, Block::G3};
    for (int i = 1; i <= 3; ++i) {
        const double Ai = A[i - 1], Anext = A[i % 3], Aprev = A[(i + 1) % 3];
        const LogComplex w = lg(Ai) * lg(Anext - Ai) * lg(Aprev - Ai) / (lg(B[0] - Ai) * lg(B[1] - Ai));
        const cplx term = w.value() * block_value(gs[i - 1], p, z);
        scale = std::max(scale, std::abs(term));
        rhs += term;
    }
    return std::abs(lhs - rhs) / scale;
}

double ode_residual(const BlockParams& p, const std::function<cplx(cplx)>& f, cplx z, double h) {
    auto derivs = [&](double s, cplx out[3]) {
        const cplx fp1 = f(z + s), fm1 = f(z - s);
        const cplx fp2 = f(z + 2.0 * s), fm2 = f(z - 2.0 * s);
        const cplx fp3 = f(z + 3.0 * s), fm3 = f(z - 3.0 * s);
        const cplx f0 = f(z);
        out[0] = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * s);
        out[1] = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * s * s);
        out[2] = (-fp3 + 8.0 * fp2 - 13.0 * fp1 + 13.0 * fm1 - 8.0 * fm2 + fm3) / (8.0 * s * s * s);
    };
    // Far from the origin the solutions vary on the scale min(|z|, |z-1|); widen the step
    // accordingly so the third-derivative roundoff stays at the level it has near the origin.
    const double s = h * std::max(1.0, std::min(std::abs(z), std::abs(z - 1.0)));
    cplx dh[3], d2h[3];
    derivs(s, dh);
    derivs(2.0 * s, d2h);
    cplx d[3];
    for (int k = 0; k < 3; ++k) d[k] = (16.0 * dh[k] - d2h[k]) / 15.0;

    const double e1 = p.A[0] + p.A[1] + p.A[2];
    const double e2 = p.A[0] * p.A[1] + p.A[0] * p.A[2] + p.A[1] * p.A[2];
    const double e3 = p.A[0] * p.A[1] * p.A[2];
    const cplx t3 = z * z * (z - 1.0) * d[2];
    const cplx t2 = ((e1 + 3.0) * z * z - (p.B[0] + p.B[1] + 1.0) * z) * d[1];
    const cplx t1 = ((e1 + e2 + 1.0) * z - p.B[0] * p.B[1]) * d[0];
    const cplx t0 = e3 * f(z);
    const double scale = std::max({std::abs(t3), std::abs(t2), std::abs(t1), std::abs(t0)});
    return scale == 0.0 ? 0.0 : std::abs(t3 + t2 + t1 + t0) / scale;
}

double ode_residual(const BlockParams& p, Block b, cplx z, double h) {
    return ode_residual(p, [&](cplx x) { return block_value(b, p, x); }, z, h);
}

double crossing_combination(const BlockParams& p, const CrossingCoeffs& c, cplx z) {
    return c.C * (std::norm(block_H(0, p, z)) + c.A1 * std::norm(block_H(1, p, z)) +
                  c.A2 * std::norm(block_H(2, p, z)));
}

std::array<double, 2> gauge_normalized_weights(const BlockParams& p, double lambda1, double lambda2) {
    const auto& A = p.A;
    const double B1 = p.B[0], B2 = p.B[1];
    auto P = [&](double beta) {
        LogSignedReal r = LogSignedReal::one();
        for (double a : A) r *= l_func(beta - a);
        return r;
    };
    auto G = [](double x) { return gamma_signed(x); };
    const LogSignedReal N0 = G(B1) * G(B2);
    const LogSignedReal N1 = G(2.0 - B1) * G(1.0 - B1 + B2);
    const LogSignedReal N2 = G(2.0 - B2) * G(1.0 - B2 + B1);
    auto S = [](double x) { return LogSignedReal::from_value(std::sin(kPi * x)); };
    const LogSignedReal base = N0 * N0 * P(1.0);
    const LogSignedReal w1 = N1 * N1 * P(B1) * S(B1 - B2) / (base * S(B2));
    const LogSignedReal w2 = N2 * N2 * P(B2) * S(B1 - B2) / (base * S(B1));
    return {-lambda1 * w1.value(), lambda2 * w2.value()};
}

double crossing_sine_identity(const BlockParams& p, int i, double lambda1, double lambda2) {
    if (i < 1 || i > 3) throw Error(ErrorCode::InvalidArgument, "sine identity index must be 1, 2 or 3");
    const auto issues = p.genericity_issues();
    if (!issues.empty()) throw Error(ErrorCode::NonGenericParameters, issues.front());
    const auto lt = gauge_normalized_weights(p, lambda1, lambda2);
    const double Ai = p.A[i - 1], B1 = p.B[0], B2 = p.B[1];
    auto s = [](double x) { return std::sin(kPi * x); };
    const double T0 = s(Ai) * s(B1 - B2);
    const double T1 = lt[0] * s(B1 - Ai) * s(B2);
    const double T2 = lt[1] * s(B2 - Ai) * s(B1);
    const double scale = std::max({std::abs(T0), std::abs(T1), std::abs(T2)});
    return std::abs(T0 - T1 + T2) / scale;
}

double crossing_sine_identity(const BlockParams& p, int i) {
    ShiftCoefficients c;
    c.A = p.A;
    c.B = p.B;
    return crossing_sine_identity(p, i, shift_coeff_A(1, c).value(), shift_coeff_A(2, c).value());
}

}  // namespace toda
