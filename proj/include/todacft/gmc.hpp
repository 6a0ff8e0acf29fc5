#pragma once

#include <array>
#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "todacft/exact_formulas.hpp"

namespace toda {

// ln 1/|x-y| + ln|x|_+ + ln|y|_+
double green_kernel(cplx x, cplx y);

// Polar cell around `center` (0 or 1) in log-radius tau = ln|x - center| and a normalized
// angle u in [0,1]. When `excise` is set the angle range avoids the disc |x - 1| < 1/2:
// theta = theta_lo(r) + u (2 pi - 2 theta_lo(r)).
struct Cell {
    double center = 0.0;
    double tau0 = 0.0, tau1 = 0.0;
    double u0 = 0.0, u1 = 1.0;
    bool excise = false;
};

struct GridSpec {
    int n_theta = 16;      // angular cells per ring; rings have the same log-width
    double r_min = 1e-5;   // innermost radius around 0, 1 and (inverted) infinity
    int level = 0;
    // Closer than r_deep to an insertion point the grid switches to n_deep angular cells
    // (and rings of matching log-width), which reaches tiny r_min at a small point cost.
    double r_deep = 0.0;
    int n_deep = 4;
};

struct PointSet {
    std::vector<cplx> points;
    // points = origin + offset with origin 0 or 1; distances between points sharing an
    // origin are taken from the offsets so they stay accurate near 1.
    std::vector<double> origin;
    std::vector<cplx> offset;
    std::vector<double> cell_weight;  // integral of |x|_+^{-4} over the cell
    std::vector<double> eps;          // regularization scale in x-units
    std::vector<Cell> cells;          // empty for point sets given by explicit points
    GridSpec spec;

    size_t size() const { return points.size(); }
    double distance(size_t i, size_t j) const;
    // Variance of the regularized field at point j: ln(1/eps_j) + 2 ln|x_j|_+.
    double self_variance(size_t j) const;
};

// The sphere is covered by a log-polar grid around 0 (which is also log-polar around
// infinity), with the disc |x - 1| < 1/2 cut out and filled by a log-polar grid around 1.
// The discs of radius r_min around 0, 1 and infinity (|x| > 1/r_min) are left out.
PointSet make_point_set(const GridSpec& spec);
size_t grid_point_count(const GridSpec& spec);
// `base` with the largest n_theta whose grid has at most `max_points` points.
GridSpec grid_for_budget(int max_points, GridSpec base);
// Explicit points; cell_weight in |x|_+^{-4}-area units; insertion factors are sampled at the points.
PointSet point_set_from_points(std::vector<cplx> points, std::vector<double> cell_weight, std::vector<double> eps);

// Two independent components, each with covariance C (Euclidean components of the field).
struct FieldSample {
    std::vector<std::array<double, 2>> values;
};

// Holds the Cholesky factor of C; draws are deterministic per (seed, sample index).
class FieldSampler {
public:
    explicit FieldSampler(const PointSet& ps);
    ~FieldSampler();
    FieldSampler(FieldSampler&&) noexcept;
    FieldSampler& operator=(FieldSampler&&) noexcept;

    size_t size() const;
    double jitter() const;  // diagonal jitter that was needed (0 or <= 1e-10)

    FieldSample sample(uint64_t seed, uint64_t index = 0) const;

    // Samples are generated in chunks of kChunk with a sub-seed per chunk, so results do not
    // depend on the thread count. `consume(first, count, X)` gets a column-major
    // n_points x (components * count) block whose column c * count + k is component c of
    // sample first + k. It runs concurrently on worker threads for disjoint sample ranges.
    static constexpr int kChunk = 128;
    using ChunkConsumer = std::function<void(uint64_t first, int count, const double* X)>;
    void for_each_chunk(uint64_t seed, uint64_t n_samples, int components, const ChunkConsumer& consume) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

FieldSample sample_field(const PointSet& ps, uint64_t seed);

// When set (e.g. from a signal handler), sampling stops at the next chunk boundary and
// throws Error(Interrupted).
std::atomic<bool>& interrupt_flag();

// Worker threads used by the estimators: TODA_CFT_THREADS if set, else hardware concurrency.
int worker_threads();

// One GMC mass: sum_j W_j exp(gamma <d, X_j> - gamma^2 |d|^2 C_jj / 2), with
// W_j = int_cell |x|_+^{gamma(a0+a1+ainf)} |x|^{-gamma a0} |x-1|^{-gamma a1} |x|_+^{-4} d^2x.
struct MassChannel {
    WeightVector direction{1.0, 0.0};
    double gamma = 1.0;
    double a0 = 0.0, a1 = 0.0, a_inf = 0.0;
};

// Precomputed log-weights and counterterms for a channel on a point set.
struct MassKernel {
    WeightVector direction;
    double gamma = 1.0;
    std::vector<double> log_bias;  // ln W_j - gamma^2 |d|^2 C_jj / 2
    double deterministic_mass = 0.0;  // sum_j W_j = E[rho]

    MassKernel(const MassChannel& ch, const PointSet& ps);
    // x, y: the two field components at all points (contiguous).
    double mass(const double* x, const double* y) const;
};

// Toda channels: direction e_i, a_k = <alpha_k, e_i>.
std::array<MassChannel, 2> toda_channels(const ThreePointInput& in);

// <alpha_k - Q, e_i> < 0 for all insertions; one message per violation.
std::vector<std::string> seiberg_warnings(const ThreePointInput& in);

struct Masses {
    double rho1 = 0.0, rho2 = 0.0;
};
// Throws SeibergViolation if `strict` and the bounds fail.
Masses gmc_masses(const FieldSample& fs, const PointSet& ps, const ThreePointInput& in, bool strict = false);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double log_abs = 0.0;      // ln|value|
    double rel_error = 0.0;    // std_error / |value|
    uint64_t n_samples = 0;
    size_t n_points = 0;
    int level = 0;
    std::vector<std::string> warnings;
};

// Per-sample masses, kept so that the mu-dependence can be re-evaluated exactly.
struct GmcRun {
    ThreePointInput input;
    uint64_t n_samples = 0;
    uint64_t seed = 0;
    std::vector<double> rho1, rho2;
    McEstimate estimate;
};

// Finite-moment window for I^i: p_i = -s_i must satisfy p_i < min(2/gamma^2, min_k <Q-alpha_k,e_i>/gamma).
void check_moment_window(const ThreePointInput& in);

GmcRun mc_three_point(const ThreePointInput& in, const PointSet& ps, uint64_t n, uint64_t seed);
// prod_i Gamma(s_i) rho_i^{-s_i} / (gamma mu_i^{s_i}) averaged over stored samples.
McEstimate toda_estimator(const GmcRun& run, const TodaParams& params);

struct LiouvilleInput {
    std::array<double, 3> alpha{};  // at 0, 1, infinity
    double gamma = 1.0;
    double mu = 1.0;

    double Q() const { return gamma / 2.0 + 2.0 / gamma; }
    double s() const { return alpha[0] + alpha[1] + alpha[2] - 2.0 * Q(); }
};

struct LiouvilleRun {
    LiouvilleInput input;
    std::vector<double> rho;
    McEstimate estimate;
};

// 2 gamma^{-1} Gamma(s/gamma) mu^{-s/gamma} E[rho^{-s/gamma}]
LiouvilleRun mc_liouville_dozz(const LiouvilleInput& in, const PointSet& ps, uint64_t n, uint64_t seed);
std::vector<double> liouville_masses(const LiouvilleInput& in, const PointSet& ps, uint64_t n, uint64_t seed);

// Uniform trapezoid grid on [c_min, c_max].
struct CGrid {
    double c_min = -8.0;
    double c_max = 6.0;
    double step = 0.02;
};

// Subsets U of {0,1,2} with s < sum_{k in U} 2(alpha_k - Q), as bit masks.
std::vector<unsigned> active_remainder_subsets(const LiouvilleInput& in);
// R_alpha(c) = sum over active U of prod_{k in U} R(alpha_k) e^{2(Q - alpha_k) c}.
double liouville_remainder(const LiouvilleInput& in, double c);

struct ExtendedEstimate {
    McEstimate estimate;
    double upper_tail_bound = 0.0;   // rigorous bound on the omitted c > c_max random part
    double lower_tail_estimate = 0.0;  // |integrand residual at c_min| / (s + gamma)
    std::vector<unsigned> active_subsets;
    std::vector<double> c_values;
    std::vector<double> integrand;  // e^{sc}(mean e^{-mu e^{gamma c} rho} - R(c)) on the grid
};

// 2 int e^{sc} (E[e^{-mu e^{gamma c} rho}] - R(c)) dc with the trapezoid rule on the grid.
// Outside the grid the leading asymptotics are integrated in closed form.
ExtendedEstimate extended_liouville_from_masses(const LiouvilleInput& in, const std::vector<double>& rho,
                                                const CGrid& grid);
ExtendedEstimate mc_extended_liouville(const LiouvilleInput& in, const CGrid& grid, const PointSet& ps,
                                       uint64_t n, uint64_t seed);

}  // namespace toda
