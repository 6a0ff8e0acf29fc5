#pragma once

// sl3 Cartan space in a fixed Euclidean embedding.
//   e1 = (sqrt2, 0), e2 = (-1/sqrt2, sqrt(3/2))
// so that the Cartan-matrix pairing is the ordinary dot product.

#include <array>
#include <string>

namespace toda {

struct WeightVector {
    double x = 0.0;
    double y = 0.0;

    constexpr WeightVector() = default;
    constexpr WeightVector(double x_, double y_) : x(x_), y(y_) {}

    static WeightVector from_roots(double c1, double c2);    // c1 e1 + c2 e2
    static WeightVector from_omegas(double c1, double c2);   // c1 w1 + c2 w2

    // Coefficients in the simple-root / fundamental-weight bases.
    std::array<double, 2> root_coords() const;
    std::array<double, 2> omega_coords() const;  // (<v,e1>, <v,e2>)

    double norm() const;

    WeightVector operator+(const WeightVector& o) const { return {x + o.x, y + o.y}; }
    WeightVector operator-(const WeightVector& o) const { return {x - o.x, y - o.y}; }
    WeightVector operator-() const { return {-x, -y}; }
    WeightVector operator*(double s) const { return {s * x, s * y}; }
    WeightVector& operator+=(const WeightVector& o) { x += o.x; y += o.y; return *this; }
    WeightVector& operator-=(const WeightVector& o) { x -= o.x; y -= o.y; return *this; }
};

inline WeightVector operator*(double s, const WeightVector& v) { return v * s; }

double pairing(const WeightVector& u, const WeightVector& v);

namespace basis {
WeightVector e1();
WeightVector e2();
WeightVector omega1();
WeightVector omega2();
WeightVector rho();
// Weights of the first fundamental representation, i = 1,2,3.
WeightVector h(int i);
// Positive roots e1, e2, e1+e2.
std::array<WeightVector, 3> positive_roots();
}  // namespace basis

// s_i(v) = v - <v,e_i> e_i
WeightVector reflect(int i, const WeightVector& v);

class WeylElement {
public:
    enum Id { Identity = 0, S1, S2, S1S2, S2S1, S1S2S1 };

    static const WeylElement& get(Id id);
    static const std::array<WeylElement, 6>& all();

    Id id() const { return id_; }
    const std::string& word() const { return word_; }
    int sign() const { return sign_; }
    const std::array<double, 4>& matrix() const { return m_; }  // row-major

    WeightVector apply(const WeightVector& v) const;
    // (this * other)(v) = this(other(v))
    const WeylElement& compose(const WeylElement& other) const;
    const WeylElement& inverse() const;

    bool operator==(const WeylElement& o) const { return id_ == o.id_; }
    bool operator!=(const WeylElement& o) const { return id_ != o.id_; }

private:
    WeylElement(Id id, std::string word, int sign, std::array<double, 4> m)
        : id_(id), word_(std::move(word)), sign_(sign), m_(m) {}
    friend struct WeylTable;

    Id id_;
    std::string word_;
    int sign_;
    std::array<double, 4> m_;
};

struct TodaParams {
    double gamma = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;

    TodaParams() = default;
    TodaParams(double gamma_, double mu1_, double mu2_);
    TodaParams(double gamma_, double mu_) : TodaParams(gamma_, mu_, mu_) {}

    double q() const { return gamma + 2.0 / gamma; }
    WeightVector Q() const { return q() * basis::rho(); }
};

// Q + s(alpha - Q)
WeightVector shifted_action(const WeylElement& s, const WeightVector& alpha, const TodaParams& p);

struct DominantRep {
    const WeylElement* s;
    WeightVector alpha;
};

// Unique s with s(alpha - Q) in the open negative chamber; throws WallDegeneracy on a wall.
DominantRep dominant_representative(const WeightVector& alpha, const TodaParams& p);

// Delta_alpha = <alpha/2, Q - alpha/2>
double conformal_weight(const WeightVector& alpha, const TodaParams& p);

}  // namespace toda
