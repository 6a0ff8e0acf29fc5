#include "todacft/root_system.hpp"

#include <cmath>
#include <sstream>

#include "todacft/errors.hpp"

namespace toda {

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt32 = std::sqrt(1.5);
}  // namespace

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::PoleAtNonPositiveInteger: return "PoleAtNonPositiveInteger";
        case ErrorCode::IntegerArgument: return "IntegerArgument";
        case ErrorCode::WallDegeneracy: return "WallDegeneracy";
        case ErrorCode::GammaPole: return "GammaPole";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::SeriesDivergence: return "SeriesDivergence";
        case ErrorCode::BParameterNonPositiveInteger: return "BParameterNonPositiveInteger";
        case ErrorCode::NonGenericParameters: return "NonGenericParameters";
        case ErrorCode::CoincidentPoints: return "CoincidentPoints";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::SeibergViolation: return "SeibergViolation";
        case ErrorCode::MomentViolation: return "MomentViolation";
        case ErrorCode::WindowViolation: return "WindowViolation";
        case ErrorCode::Interrupted: return "Interrupted";
    }
    return "Unknown";
}

WeightVector WeightVector::from_roots(double c1, double c2) {
    return c1 * basis::e1() + c2 * basis::e2();
}

WeightVector WeightVector::from_omegas(double c1, double c2) {
    return c1 * basis::omega1() + c2 * basis::omega2();
}

std::array<double, 2> WeightVector::root_coords() const {
    return {pairing(*this, basis::omega1()), pairing(*this, basis::omega2())};
}

std::array<double, 2> WeightVector::omega_coords() const {
    return {pairing(*this, basis::e1()), pairing(*this, basis::e2())};
}

double WeightVector::norm() const { return std::hypot(x, y); }

double pairing(const WeightVector& u, const WeightVector& v) { return u.x * v.x + u.y * v.y; }

namespace basis {
WeightVector e1() { return {kSqrt2, 0.0}; }
WeightVector e2() { return {-1.0 / kSqrt2, kSqrt32}; }
WeightVector omega1() { return (2.0 * e1() + e2()) * (1.0 / 3.0); }
WeightVector omega2() { return (e1() + 2.0 * e2()) * (1.0 / 3.0); }
WeightVector rho() { return e1() + e2(); }

WeightVector h(int i) {
    switch (i) {
        case 1: return (2.0 * e1() + e2()) * (1.0 / 3.0);
        case 2: return (e2() - e1()) * (1.0 / 3.0);
        case 3: return -(e1() + 2.0 * e2()) * (1.0 / 3.0);
        default: throw Error(ErrorCode::InvalidArgument, "h index must be 1, 2 or 3");
    }
}

std::array<WeightVector, 3> positive_roots() { return {e1(), e2(), e1() + e2()}; }
}  // namespace basis

WeightVector reflect(int i, const WeightVector& v) {
    if (i != 1 && i != 2) throw Error(ErrorCode::InvalidArgument, "reflection index must be 1 or 2");
    const WeightVector e = i == 1 ? basis::e1() : basis::e2();
    return v - pairing(v, e) * e;
}

struct WeylTable {
    std::array<WeylElement, 6> elems;
    std::array<std::array<int, 6>, 6> product{};
    std::array<int, 6> inv{};

    static std::array<double, 4> mul(const std::array<double, 4>& a, const std::array<double, 4>& b) {
        return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
    }
    static std::array<double, 4> refl(const WeightVector& e) {
        return {1.0 - e.x * e.x, -e.x * e.y, -e.y * e.x, 1.0 - e.y * e.y};
    }

    static WeylTable build() {
        const auto I = std::array<double, 4>{1, 0, 0, 1};
        const auto s1 = refl(basis::e1());
        const auto s2 = refl(basis::e2());
        WeylTable t{{WeylElement(WeylElement::Identity, "", 1, I),
                     WeylElement(WeylElement::S1, "s1", -1, s1),
                     WeylElement(WeylElement::S2, "s2", -1, s2),
                     WeylElement(WeylElement::S1S2, "s1s2", 1, mul(s1, s2)),
                     WeylElement(WeylElement::S2S1, "s2s1", 1, mul(s2, s1)),
                     WeylElement(WeylElement::S1S2S1, "s1s2s1", -1, mul(s1, mul(s2, s1)))}};
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) {
                const auto m = mul(t.elems[a].m_, t.elems[b].m_);
                int found = -1;
                for (int c = 0; c < 6; ++c) {
                    double d = 0;
                    for (int k = 0; k < 4; ++k) d += std::abs(m[k] - t.elems[c].m_[k]);
                    if (d < 1e-12) found = c;
                }
                t.product[a][b] = found;
                if (found == 0) t.inv[a] = b;
            }
        }
        return t;
    }

    static const WeylTable& instance() {
        static const WeylTable t = build();
        return t;
    }
};

const WeylElement& WeylElement::get(Id id) { return WeylTable::instance().elems[id]; }

const std::array<WeylElement, 6>& WeylElement::all() { return WeylTable::instance().elems; }

WeightVector WeylElement::apply(const WeightVector& v) const {
    return {m_[0] * v.x + m_[1] * v.y, m_[2] * v.x + m_[3] * v.y};
}

const WeylElement& WeylElement::compose(const WeylElement& other) const {
    const auto& t = WeylTable::instance();
    return t.elems[t.product[id_][other.id_]];
}

const WeylElement& WeylElement::inverse() const {
    const auto& t = WeylTable::instance();
    return t.elems[t.inv[id_]];
}

TodaParams::TodaParams(double gamma_, double mu1_, double mu2_) : gamma(gamma_), mu1(mu1_), mu2(mu2_) {
    if (!(gamma > 0.0 && gamma <= kSqrt2)) {
        std::ostringstream os;
        os << "gamma must lie in (0, sqrt2], got " << gamma;
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    if (!(mu1 > 0.0 && mu2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
}

WeightVector shifted_action(const WeylElement& s, const WeightVector& alpha, const TodaParams& p) {
    const WeightVector Q = p.Q();
    return Q + s.apply(alpha - Q);
}

DominantRep dominant_representative(const WeightVector& alpha, const TodaParams& p) {
    const WeightVector d = alpha - p.Q();
    const double tol = 1e-12 * (1.0 + d.norm());
    for (const auto& s : WeylElement::all()) {
        const WeightVector v = s.apply(d);
        const double a1 = pairing(v, basis::e1());
        const double a2 = pairing(v, basis::e2());
        if (std::abs(a1) < tol || std::abs(a2) < tol) {
            throw Error(ErrorCode::WallDegeneracy, "alpha - Q lies on a Weyl chamber wall");
        }
        if (a1 < 0 && a2 < 0) return {&s, p.Q() + v};
    }
    throw Error(ErrorCode::WallDegeneracy, "no Weyl image of alpha - Q in the negative chamber");
}

double conformal_weight(const WeightVector& alpha, const TodaParams& p) {
    return pairing(0.5 * alpha, p.Q() - 0.5 * alpha);
}

}  // namespace toda
