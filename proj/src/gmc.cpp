#include "todacft/gmc.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <mutex>
#include <thread>

#include "todacft/errors.hpp"

namespace toda {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

double log_plus(double r) { return r > 1.0 ? std::log(r) : 0.0; }

// Gauss-Legendre rule on [0,1].
struct Rule {
    std::vector<double> x, w;
};

template <int N>
Rule make_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (size_t k = 0; k < a.size(); ++k) {
        r.x.push_back(0.5 + 0.5 * a[k]);
        r.w.push_back(0.5 * w[k]);
        if (a[k] != 0.0) {
            r.x.push_back(0.5 - 0.5 * a[k]);
            r.w.push_back(0.5 * w[k]);
        }
    }
    return r;
}

const Rule& rule_plain() {
    static const Rule r = make_rule<4>();
    return r;
}
// Rings meeting the excised disc have square-root endpoints in theta_lo(r).
const Rule& rule_excise() {
    static const Rule r = make_rule<10>();
    return r;
}

// Angle where |x| = r meets |x - 1| = 1/2.
double theta_lo(double r) {
    const double c = (r * r + 0.75) / (2.0 * r);
    return c >= 1.0 ? 0.0 : std::acos(c);
}

// A point of a cell with its distances to 0 and 1 computed from the local offset, so that
// they stay accurate down to tiny radii around either center.
struct Loc {
    cplx x;
    cplx offset;  // x - center
    double r0, r1;  // |x|, |x - 1|
};

Loc cell_loc(const Cell& c, double tau, double u) {
    const double r = std::exp(tau);
    const double lo = c.excise ? theta_lo(r) : 0.0;
    const double th = lo + u * (2.0 * kPi - 2.0 * lo);
    Loc p;
    p.offset = std::polar(r, th);
    p.x = c.center + p.offset;
    p.r0 = c.center == 0.0 ? r : std::abs(p.x);
    p.r1 = c.center == 1.0 ? r : std::abs(p.x - 1.0);
    return p;
}

// Calls f(loc, weight) for a tensor rule on the cell with d^2x = r^2 dtau dtheta; the weights
// sum to the cell area. On excised rings tau = tau0 + dt v^2 (3 - 2v) smooths the
// square-root behaviour of theta_lo at r = 1/2 and r = 3/2.
// `sub` splits both directions into equal pieces (composite rule).
template <class F>
void for_cell_nodes(const Cell& c, const Rule& rule, F&& f, int sub = 1) {
    const double dt = c.tau1 - c.tau0, du = c.u1 - c.u0;
    for (int ia = 0; ia < sub; ++ia) {
        for (size_t a = 0; a < rule.x.size(); ++a) {
            const double v = (ia + rule.x[a]) / sub;
            const double tau = c.excise ? c.tau0 + dt * v * v * (3.0 - 2.0 * v) : c.tau0 + dt * v;
            const double jac = c.excise ? 6.0 * v * (1.0 - v) : 1.0;
            const double r = std::exp(tau);
            const double span = c.excise ? 2.0 * kPi - 2.0 * theta_lo(r) : 2.0 * kPi;
            const double wa = rule.w[a] * jac * r * r * span * dt * du / (sub * sub);
            for (int ib = 0; ib < sub; ++ib) {
                for (size_t b = 0; b < rule.x.size(); ++b) {
                    f(cell_loc(c, tau, c.u0 + du * (ib + rule.x[b]) / sub), wa * rule.w[b]);
                }
            }
        }
    }
}

// Cells around 1 that the unit circle passes through; |x|_+ has a kink there.
bool crosses_unit_circle(const Cell& c) {
    if (c.center == 0.0) return false;  // rings around 0 are split at |x| = 1
    bool inside = false, outside = false;
    for (int i = 0; i <= 6; ++i) {
        for (int k = 0; k <= 6; ++k) {
            const double r0 = cell_loc(c, c.tau0 + (c.tau1 - c.tau0) * i / 6.0, c.u0 + (c.u1 - c.u0) * k / 6.0).r0;
            (r0 < 1.0 ? inside : outside) = true;
        }
    }
    return inside && outside;
}

template <class F>
double integrate_cell(const Cell& c, F&& f) {
    double sum = 0.0;
    for_cell_nodes(c, c.excise ? rule_excise() : rule_plain(), [&](const Loc& p, double w) { sum += w * f(p); },
                   crosses_unit_circle(c) ? 8 : 1);
    return sum;
}

void split_rings(double lo, double hi, double width, std::vector<std::pair<double, double>>& out) {
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / width - 1e-9)));
    for (int k = 0; k < n; ++k) out.emplace_back(lo + (hi - lo) * k / n, lo + (hi - lo) * (k + 1) / n);
}

// Mean of ln 1/|x-y| over pairs of points of the cell (area measure), from a 4D Kronecker
// sequence; the logarithmic diagonal singularity is integrable.
double cell_log_energy(const Cell& c) {
    constexpr int kPairs = 8192;
    // Powers of the inverse of the root of x^5 = x + 1 (generalized golden ratio).
    const double g = 1.1673039782614187;
    const double a[4] = {1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g), 1.0 / (g * g * g * g)};
    double num = 0.0, den = 0.0;
    for (int k = 1; k <= kPairs; ++k) {
        double v[4];
        for (int d = 0; d < 4; ++d) v[d] = std::fmod(0.5 + a[d] * k, 1.0);
        const double t1 = c.tau0 + (c.tau1 - c.tau0) * v[0], t2 = c.tau0 + (c.tau1 - c.tau0) * v[2];
        const double u1 = c.u0 + (c.u1 - c.u0) * v[1], u2 = c.u0 + (c.u1 - c.u0) * v[3];
        auto jac = [&](double t) {
            const double r = std::exp(t);
            return r * r * (c.excise ? 2.0 * kPi - 2.0 * theta_lo(r) : 2.0 * kPi);
        };
        const double w = jac(t1) * jac(t2);
        num -= w * std::log(std::abs(cell_loc(c, t1, u1).offset - cell_loc(c, t2, u2).offset));
        den += w;
    }
    return num / den;
}

// Cells of one ring are rotations of each other and share the log-energy.
void append_ring(PointSet& ps, Cell c, int n_u) {
    double energy = 0.0;
    for (int j = 0; j < n_u; ++j) {
        c.u0 = static_cast<double>(j) / n_u;
        c.u1 = static_cast<double>(j + 1) / n_u;
        if (j == 0) energy = cell_log_energy(c);
        ps.cells.push_back(c);
        const Loc mid = cell_loc(c, 0.5 * (c.tau0 + c.tau1), 0.5 * (c.u0 + c.u1));
        ps.points.push_back(mid.x);
        ps.origin.push_back(c.center);
        ps.offset.push_back(mid.offset);
        ps.cell_weight.push_back(integrate_cell(c, [](const Loc& p) {
            return p.r0 > 1.0 ? 1.0 / (p.r0 * p.r0 * p.r0 * p.r0) : 1.0;
        }));
        // ln(1/eps) is the variance of the cell average of a field with kernel ln 1/|x-y|.
        ps.eps.push_back(std::exp(-energy));
    }
}

uint64_t env_threads() {
    if (const char* v = std::getenv("TODA_CFT_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(v, &end, 10);
        if (end != v && n > 0) return static_cast<uint64_t>(n);
    }
    return 0;
}

double log_insertion(const MassChannel& ch, double r, double r1) {
    return ch.gamma * ((ch.a0 + ch.a1 + ch.a_inf) * log_plus(r) - ch.a0 * std::log(r) - ch.a1 * std::log(r1));
}

struct MeanStd {
    double log_mean = 0.0;  // ln of the mean of e^{v_n}
    double rel_sd = 0.0;    // sample standard deviation / mean
};

// Mean of e^{v_n} computed with a common shift.
MeanStd exp_mean(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0, s2 = 0.0;
    for (double x : v) {
        const double e = std::exp(x - m);
        s += e;
        s2 += e * e;
    }
    const double n = static_cast<double>(v.size());
    const double mean = s / n;
    const double var = n > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1.0)) : 0.0;
    return {m + std::log(mean), std::sqrt(var) / mean};
}

McEstimate finish_estimate(const LogSignedReal& prefactor, const MeanStd& ms, uint64_t n, const PointSet& ps) {
    McEstimate e;
    e.log_abs = prefactor.log_abs + ms.log_mean;
    e.value = prefactor.sign * std::exp(e.log_abs);
    e.rel_error = ms.rel_sd / std::sqrt(static_cast<double>(n));
    e.std_error = std::abs(e.value) * e.rel_error;
    e.n_samples = n;
    e.n_points = ps.size();
    e.level = ps.spec.level;
    return e;
}

LogSignedReal checked_gamma(double x, const char* what) {
    const LogSignedReal g = gamma_signed(x);
    if (g.is_pole()) {
        std::ostringstream os;
        os << what << " = " << x << " is a pole of Gamma";
        throw Error(ErrorCode::GammaPole, os.str());
    }
    return g;
}

}  // namespace

double green_kernel(cplx x, cplx y) {
    const double d = std::abs(x - y);
    if (d == 0.0) throw Error(ErrorCode::CoincidentPoints, "Green kernel at coincident points");
    return -std::log(d) + log_plus(std::abs(x)) + log_plus(std::abs(y));
}

double PointSet::distance(size_t i, size_t j) const {
    return origin[i] == origin[j] ? std::abs(offset[i] - offset[j]) : std::abs(points[i] - points[j]);
}

double PointSet::self_variance(size_t j) const { return -std::log(eps[j]) + 2.0 * log_plus(std::abs(points[j])); }

namespace {

struct RingPlan {
    Cell cell;
    int n_u;
};

std::vector<RingPlan> plan_rings(const GridSpec& spec) {
    if (spec.n_theta < 3) throw Error(ErrorCode::InvalidArgument, "n_theta must be at least 3");
    if (!(spec.r_min > 0.0 && spec.r_min < 0.25)) throw Error(ErrorCode::InvalidArgument, "r_min must lie in (0, 1/4)");
    const double width = 2.0 * kPi / spec.n_theta;
    const double lmin = std::log(spec.r_min);
    const double ldeep = spec.r_deep > 0.0 ? std::log(spec.r_deep) : -kInfinity;
    auto deep = [&](double tau0, double tau1) { return tau1 <= ldeep + 1e-12 || tau0 >= -ldeep - 1e-12; };
    const int n_deep = std::max(1, std::min(spec.n_deep, spec.n_theta));

    // Deep rings are as wide in log-radius as their cells are in angle.
    const double wdeep = 2.0 * kPi / n_deep;
    auto split_inner = [&](std::vector<std::pair<double, double>>& out) {
        if (ldeep > lmin && ldeep < std::log(0.5)) {
            split_rings(lmin, ldeep, wdeep, out);
            split_rings(ldeep, std::log(0.5), width, out);
        } else {
            split_rings(lmin, std::log(0.5), width, out);
        }
    };
    std::vector<std::pair<double, double>> rings;
    split_inner(rings);
    const size_t inner = rings.size();
    split_rings(std::log(0.5), 0.0, width, rings);
    split_rings(0.0, std::log(1.5), width, rings);
    const size_t middle = rings.size();
    if (ldeep > lmin && ldeep < std::log(0.5)) {
        split_rings(std::log(1.5), -ldeep, width, rings);
        split_rings(-ldeep, -lmin, wdeep, rings);
    } else {
        split_rings(std::log(1.5), -lmin, width, rings);
    }

    std::vector<RingPlan> plan;
    for (size_t k = 0; k < rings.size(); ++k) {
        Cell c;
        c.center = 0.0;
        c.tau0 = rings[k].first;
        c.tau1 = rings[k].second;
        c.excise = k >= inner && k < middle;
        int n_u = deep(c.tau0, c.tau1) ? n_deep : spec.n_theta;
        if (c.excise) {
            const double r = std::exp(0.5 * (c.tau0 + c.tau1));
            n_u = std::max(1, static_cast<int>(std::lround(spec.n_theta * (1.0 - theta_lo(r) / kPi))));
        }
        plan.push_back({c, n_u});
    }

    std::vector<std::pair<double, double>> around_one;
    split_inner(around_one);
    for (const auto& ring : around_one) {
        Cell c;
        c.center = 1.0;
        c.tau0 = ring.first;
        c.tau1 = ring.second;
        plan.push_back({c, deep(c.tau0, c.tau1) ? n_deep : spec.n_theta});
    }
    return plan;
}

}  // namespace

size_t grid_point_count(const GridSpec& spec) {
    size_t n = 0;
    for (const auto& r : plan_rings(spec)) n += static_cast<size_t>(r.n_u);
    return n;
}

PointSet make_point_set(const GridSpec& spec) {
    PointSet ps;
    ps.spec = spec;
    for (const auto& r : plan_rings(spec)) append_ring(ps, r.cell, r.n_u);
    return ps;
}

GridSpec grid_for_budget(int max_points, GridSpec base) {
    GridSpec best = base;
    best.n_theta = 3;
    for (int n = 3; n < 1024; ++n) {
        GridSpec g = base;
        g.n_theta = n;
        if (grid_point_count(g) > static_cast<size_t>(max_points)) break;
        best = g;
    }
    return best;
}

PointSet point_set_from_points(std::vector<cplx> points, std::vector<double> cell_weight, std::vector<double> eps) {
    if (points.size() != cell_weight.size() || points.size() != eps.size()) {
        throw Error(ErrorCode::InvalidArgument, "points, weights and eps must have equal length");
    }
    for (size_t j = 0; j < points.size(); ++j) {
        if (!(cell_weight[j] > 0.0) || !(eps[j] > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "cell weights and eps must be positive");
        }
    }
    PointSet ps;
    ps.origin.assign(points.size(), 0.0);
    ps.offset = points;
    ps.points = std::move(points);
    ps.cell_weight = std::move(cell_weight);
    ps.eps = std::move(eps);
    return ps;
}

// ---------- sampling ----------

struct FieldSampler::Impl {
    Eigen::MatrixXd L;
    double jitter = 0.0;
};

namespace {

// Quadrature nodes of a cell for averaging the Green kernel.
struct CellNodes {
    std::vector<Loc> loc;
    std::vector<double> w;  // normalized to sum 1
};

CellNodes cell_nodes(const Cell& c) {
    CellNodes n;
    for_cell_nodes(c, rule_plain(), [&](const Loc& p, double w) {
        n.loc.push_back(p);
        n.w.push_back(w);
    });
    double total = 0.0;
    for (double w : n.w) total += w;
    for (double& w : n.w) w /= total;
    return n;
}

double green_between(const Loc& a, double ca, const Loc& b, double cb) {
    const double d = ca == cb ? std::abs(a.offset - b.offset) : std::abs(a.x - b.x);
    return -std::log(d) + log_plus(a.r0) + log_plus(b.r0);
}

// Neighbouring cells get the cell-averaged kernel: the diagonal is a cell average, and the
// centre-point kernel next to it loses positive definiteness where the grid changes scale.
// Excised cells are curved, so their centre is not a good proxy at any distance; this matters
// because the field has zero mean on |x| = 1 and C is nearly singular along that ring.
constexpr double kNeighbourRange = 2.5;

Eigen::MatrixXd covariance(const PointSet& ps, double jitter) {
    const Eigen::Index n = static_cast<Eigen::Index>(ps.size());
    Eigen::MatrixXd C(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        C(j, j) = ps.self_variance(j) + jitter;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double d = ps.distance(i, j);
            if (d == 0.0) throw Error(ErrorCode::CoincidentPoints, "Green kernel at coincident points");
            C(i, j) = -std::log(d) + log_plus(std::abs(ps.points[i])) + log_plus(std::abs(ps.points[j]));
        }
    }
    if (ps.cells.size() != ps.size()) return C;

    std::vector<double> size(ps.size());
    std::vector<CellNodes> nodes(ps.size());
    for (size_t j = 0; j < ps.size(); ++j) {
        size[j] = std::sqrt(integrate_cell(ps.cells[j], [](const Loc&) { return 1.0; }));
        nodes[j] = cell_nodes(ps.cells[j]);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const bool excised = ps.cells[i].excise || ps.cells[j].excise;
            if (!excised && ps.distance(i, j) > 0.5 * kNeighbourRange * (size[i] + size[j])) continue;
            const CellNodes &a = nodes[i], &b = nodes[j];
            double g = 0.0;
            for (size_t p = 0; p < a.loc.size(); ++p) {
                for (size_t q = 0; q < b.loc.size(); ++q) {
                    g += a.w[p] * b.w[q] * green_between(a.loc[p], ps.origin[i], b.loc[q], ps.origin[j]);
                }
            }
            C(i, j) = g;
        }
    }
    return C;
}

std::mt19937_64 chunk_rng(uint64_t seed, uint64_t chunk) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(chunk),
                      static_cast<uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

Eigen::MatrixXd chunk_normals(size_t n_points, int cols, uint64_t seed, uint64_t chunk) {
    std::mt19937_64 rng = chunk_rng(seed, chunk);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd Z(static_cast<Eigen::Index>(n_points), cols);
    for (Eigen::Index c = 0; c < Z.cols(); ++c) {
        for (Eigen::Index r = 0; r < Z.rows(); ++r) Z(r, c) = normal(rng);
    }
    return Z;
}

}  // namespace

FieldSampler::FieldSampler(const PointSet& ps) : impl_(std::make_unique<Impl>()) {
    for (const double jitter : {0.0, 1e-10}) {
        Eigen::MatrixXd C = covariance(ps, jitter);
        Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>, Eigen::Lower> llt(C);
        if (llt.info() == Eigen::Success) {
            C.triangularView<Eigen::StrictlyUpper>().setZero();
            impl_->L = std::move(C);
            impl_->jitter = jitter;
            return;
        }
    }
    Eigen::MatrixXd C = covariance(ps, 0.0);
    C.triangularView<Eigen::StrictlyUpper>() = C.transpose().triangularView<Eigen::StrictlyUpper>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
    std::ostringstream os;
    os << "regularized covariance is not positive definite (smallest eigenvalue " << es.eigenvalues()(0)
       << "); coarsen eps";
    throw Error(ErrorCode::NotPositiveDefinite, os.str());
}

FieldSampler::~FieldSampler() = default;
FieldSampler::FieldSampler(FieldSampler&&) noexcept = default;
FieldSampler& FieldSampler::operator=(FieldSampler&&) noexcept = default;

size_t FieldSampler::size() const { return static_cast<size_t>(impl_->L.rows()); }
double FieldSampler::jitter() const { return impl_->jitter; }

FieldSample FieldSampler::sample(uint64_t seed, uint64_t index) const {
    const uint64_t chunk = index / kChunk;
    const Eigen::Index k = static_cast<Eigen::Index>(index % kChunk);
    const Eigen::MatrixXd Z = chunk_normals(size(), 2 * kChunk, seed, chunk);
    Eigen::MatrixXd z2(Z.rows(), 2);
    z2.col(0) = Z.col(k);
    z2.col(1) = Z.col(kChunk + k);
    const Eigen::MatrixXd X = impl_->L.triangularView<Eigen::Lower>() * z2;
    FieldSample fs;
    fs.values.resize(size());
    for (size_t j = 0; j < size(); ++j) fs.values[j] = {X(j, 0), X(j, 1)};
    return fs;
}

void FieldSampler::for_each_chunk(uint64_t seed, uint64_t n_samples, int components,
                                  const ChunkConsumer& consume) const {
    if (components != 1 && components != 2) throw Error(ErrorCode::InvalidArgument, "components must be 1 or 2");
    const uint64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
    std::atomic<uint64_t> next{0};
    auto work = [&] {
        for (uint64_t c = next++; c < n_chunks; c = next++) {
            if (interrupt_flag().load()) throw Error(ErrorCode::Interrupted, "sampling interrupted");
            const uint64_t first = c * kChunk;
            const int count = static_cast<int>(std::min<uint64_t>(kChunk, n_samples - first));
            // Always draw a full chunk so that a sample does not depend on n_samples.
            const Eigen::MatrixXd Z = chunk_normals(size(), components * kChunk, seed, c);
            Eigen::MatrixXd Zc(Z.rows(), components * count);
            for (int comp = 0; comp < components; ++comp) {
                Zc.middleCols(comp * count, count) = Z.middleCols(comp * kChunk, count);
            }
            const Eigen::MatrixXd X = impl_->L.triangularView<Eigen::Lower>() * Zc;
            consume(first, count, X.data());
        }
    };
    const uint64_t n_threads = std::min<uint64_t>(static_cast<uint64_t>(worker_threads()), n_chunks);
    if (n_threads <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex m;
    for (uint64_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            try {
                work();
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!failure) failure = std::current_exception();
                next = n_chunks;
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

FieldSample sample_field(const PointSet& ps, uint64_t seed) { return FieldSampler(ps).sample(seed, 0); }

std::atomic<bool>& interrupt_flag() {
    static std::atomic<bool> flag{false};
    return flag;
}

int worker_threads() {
    if (const uint64_t n = env_threads()) return static_cast<int>(n);
    return std::max(1u, std::thread::hardware_concurrency());
}

// ---------- masses ----------

MassKernel::MassKernel(const MassChannel& ch, const PointSet& ps) : direction(ch.direction), gamma(ch.gamma) {
    const double d2 = pairing(direction, direction);
    log_bias.resize(ps.size());
    for (size_t j = 0; j < ps.size(); ++j) {
        double lw;
        if (ps.cells.empty()) {
            lw = std::log(ps.cell_weight[j]) +
                 log_insertion(ch, std::abs(ps.points[j]), std::abs(ps.points[j] - 1.0));
        } else {
            const double w = integrate_cell(ps.cells[j], [&](const Loc& p) {
                const double metric = p.r0 > 1.0 ? -4.0 * std::log(p.r0) : 0.0;
                return std::exp(log_insertion(ch, p.r0, p.r1) + metric);
            });
            lw = std::log(w);
        }
        deterministic_mass += std::exp(lw);
        log_bias[j] = lw - 0.5 * gamma * gamma * d2 * ps.self_variance(j);
    }
}

double MassKernel::mass(const double* x, const double* y) const {
    const double gx = gamma * direction.x, gy = gamma * direction.y;
    double s = 0.0;
    if (gy == 0.0) {
        for (size_t j = 0; j < log_bias.size(); ++j) s += std::exp(log_bias[j] + gx * x[j]);
    } else {
        for (size_t j = 0; j < log_bias.size(); ++j) s += std::exp(log_bias[j] + gx * x[j] + gy * y[j]);
    }
    return s;
}

std::array<MassChannel, 2> toda_channels(const ThreePointInput& in) {
    std::array<MassChannel, 2> ch;
    for (int i = 0; i < 2; ++i) {
        const WeightVector e = i == 0 ? basis::e1() : basis::e2();
        ch[i].direction = e;
        ch[i].gamma = in.params.gamma;
        ch[i].a0 = pairing(in.alpha0, e);
        ch[i].a1 = pairing(in.alpha1(), e);
        ch[i].a_inf = pairing(in.alpha_inf, e);
    }
    return ch;
}

std::vector<std::string> seiberg_warnings(const ThreePointInput& in) {
    std::vector<std::string> w;
    const WeightVector Q = in.params.Q();
    const std::array<std::pair<const char*, WeightVector>, 3> ins{
        {{"alpha0", in.alpha0}, {"alpha1", in.alpha1()}, {"alpha_inf", in.alpha_inf}}};
    for (const auto& [name, a] : ins) {
        for (int i = 1; i <= 2; ++i) {
            const double v = pairing(a - Q, i == 1 ? basis::e1() : basis::e2());
            if (!(v < 0.0)) {
                std::ostringstream os;
                os << "<" << name << " - Q, e" << i << "> = " << v << " >= 0: GMC mass is not integrable";
                w.push_back(os.str());
            }
        }
    }
    return w;
}

Masses gmc_masses(const FieldSample& fs, const PointSet& ps, const ThreePointInput& in, bool strict) {
    if (fs.values.size() != ps.size()) throw Error(ErrorCode::InvalidArgument, "field sample does not match point set");
    const auto warnings = seiberg_warnings(in);
    if (strict && !warnings.empty()) throw Error(ErrorCode::SeibergViolation, warnings.front());
    const auto ch = toda_channels(in);
    std::vector<double> x(ps.size()), y(ps.size());
    for (size_t j = 0; j < ps.size(); ++j) {
        x[j] = fs.values[j][0];
        y[j] = fs.values[j][1];
    }
    return {MassKernel(ch[0], ps).mass(x.data(), y.data()), MassKernel(ch[1], ps).mass(x.data(), y.data())};
}

// ---------- Toda estimator ----------

void check_moment_window(const ThreePointInput& in) {
    const auto s = in.s_exponents();
    const double g = in.params.gamma;
    const WeightVector Q = in.params.Q();
    for (int i = 0; i < 2; ++i) {
        if (std::abs(s[i]) < 1e-12) {
            throw Error(ErrorCode::MomentViolation, "<s, omega_i> = 0: the estimator is not defined");
        }
        if (s[i] < 0.0) {
            const WeightVector e = i == 0 ? basis::e1() : basis::e2();
            double bound = 2.0 / (g * g);
            for (const WeightVector& a : {in.alpha0, in.alpha1(), in.alpha_inf}) {
                bound = std::min(bound, pairing(Q - a, e) / g);
            }
            if (!(-s[i] < bound)) {
                std::ostringstream os;
                os << "moment of order " << -s[i] << " of rho_" << i + 1 << " is infinite (bound " << bound << ")";
                throw Error(ErrorCode::MomentViolation, os.str());
            }
        }
    }
}

GmcRun mc_three_point(const ThreePointInput& in, const PointSet& ps, uint64_t n, uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
    check_moment_window(in);
    GmcRun run;
    run.input = in;
    run.n_samples = n;
    run.seed = seed;
    run.rho1.resize(n);
    run.rho2.resize(n);
    const auto ch = toda_channels(in);
    const MassKernel k1(ch[0], ps), k2(ch[1], ps);
    const FieldSampler sampler(ps);
    const size_t np = ps.size();
    sampler.for_each_chunk(seed, n, 2, [&](uint64_t first, int count, const double* X) {
        for (int k = 0; k < count; ++k) {
            const double* x = X + static_cast<size_t>(k) * np;
            const double* y = X + static_cast<size_t>(count + k) * np;
            run.rho1[first + k] = k1.mass(x, y);
            run.rho2[first + k] = k2.mass(x, y);
        }
    });
    run.estimate = toda_estimator(run, in.params);
    run.estimate.n_points = ps.size();
    run.estimate.level = ps.spec.level;
    run.estimate.warnings = seiberg_warnings(in);
    return run;
}

McEstimate toda_estimator(const GmcRun& run, const TodaParams& params) {
    ThreePointInput in = run.input;
    in.params = params;
    const auto s = in.s_exponents();
    const double g = params.gamma;
    std::vector<double> v(run.rho1.size());
    for (size_t k = 0; k < v.size(); ++k) v[k] = -s[0] * std::log(run.rho1[k]) - s[1] * std::log(run.rho2[k]);
    LogSignedReal pref = checked_gamma(s[0], "s_1") * checked_gamma(s[1], "s_2");
    pref *= LogSignedReal::exp_of(-2.0 * std::log(g) - s[0] * std::log(params.mu1) - s[1] * std::log(params.mu2));
    McEstimate e;
    const MeanStd ms = exp_mean(v);
    e.log_abs = pref.log_abs + ms.log_mean;
    e.value = pref.sign * std::exp(e.log_abs);
    e.rel_error = ms.rel_sd / std::sqrt(static_cast<double>(v.size()));
    e.std_error = std::abs(e.value) * e.rel_error;
    e.n_samples = v.size();
    e.n_points = run.estimate.n_points;
    e.level = run.estimate.level;
    return e;
}

// ---------- Liouville ----------

namespace {

void check_liouville_insertions(const LiouvilleInput& in, ErrorCode code) {
    if (!(in.gamma > 0.0 && in.gamma < 2.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 2)");
    if (!(in.mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
    for (double a : in.alpha) {
        if (!(a < in.Q())) {
            std::ostringstream os;
            os << "alpha = " << a << " is not below Q = " << in.Q();
            throw Error(code, os.str());
        }
    }
}

MassChannel liouville_channel(const LiouvilleInput& in) {
    MassChannel ch;
    ch.direction = {1.0, 0.0};
    ch.gamma = in.gamma;
    ch.a0 = in.alpha[0];
    ch.a1 = in.alpha[1];
    ch.a_inf = in.alpha[2];
    return ch;
}

}  // namespace

std::vector<double> liouville_masses(const LiouvilleInput& in, const PointSet& ps, uint64_t n, uint64_t seed) {
    check_liouville_insertions(in, ErrorCode::MomentViolation);
    const MassKernel kernel(liouville_channel(in), ps);
    const FieldSampler sampler(ps);
    std::vector<double> rho(n);
    const size_t np = ps.size();
    sampler.for_each_chunk(seed, n, 1, [&](uint64_t first, int count, const double* X) {
        for (int k = 0; k < count; ++k) rho[first + k] = kernel.mass(X + static_cast<size_t>(k) * np, nullptr);
    });
    return rho;
}

LiouvilleRun mc_liouville_dozz(const LiouvilleInput& in, const PointSet& ps, uint64_t n, uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
    check_liouville_insertions(in, ErrorCode::MomentViolation);
    const double g = in.gamma, Q = in.Q();
    const double p = -in.s() / g;  // moment order
    if (p > 0.0) {
        double bound = 4.0 / (g * g);
        for (double a : in.alpha) bound = std::min(bound, 2.0 * (Q - a) / g);
        if (!(p < bound)) {
            std::ostringstream os;
            os << "moment of order " << p << " of rho is infinite (bound " << bound << ")";
            throw Error(ErrorCode::MomentViolation, os.str());
        }
    }
    const LogSignedReal gam = checked_gamma(-p, "s/gamma");
    LiouvilleRun run;
    run.input = in;
    run.rho = liouville_masses(in, ps, n, seed);
    std::vector<double> v(n);
    for (size_t k = 0; k < n; ++k) v[k] = p * std::log(run.rho[k]);
    const LogSignedReal pref = gam * LogSignedReal::exp_of(std::log(2.0 / g) + p * std::log(in.mu));
    run.estimate = finish_estimate(pref, exp_mean(v), n, ps);
    return run;
}

std::vector<unsigned> active_remainder_subsets(const LiouvilleInput& in) {
    std::vector<unsigned> out;
    const double s = in.s();
    for (unsigned mask = 0; mask < 8; ++mask) {
        double sum = 0.0;
        for (int k = 0; k < 3; ++k) {
            if (mask & (1u << k)) sum += 2.0 * (in.alpha[k] - in.Q());
        }
        if (s < sum) out.push_back(mask);
    }
    return out;
}

namespace {

// prod_{k in U} R(alpha_k) and the exponent s + sum_{k in U} 2(Q - alpha_k).
struct RemainderTerm {
    unsigned mask;
    double coeff;
    double rate;
};

std::vector<RemainderTerm> remainder_terms(const LiouvilleInput& in) {
    std::vector<RemainderTerm> terms;
    for (unsigned mask = 0; mask < 8; ++mask) {
        double coeff = 1.0, rate = in.s();
        for (int k = 0; k < 3; ++k) {
            if (mask & (1u << k)) {
                coeff *= liouville_reflection(in.alpha[k], in.gamma, in.mu).value();
                rate += 2.0 * (in.Q() - in.alpha[k]);
            }
        }
        terms.push_back({mask, coeff, rate});
    }
    return terms;
}

bool is_active(const std::vector<unsigned>& active, unsigned mask) {
    return std::find(active.begin(), active.end(), mask) != active.end();
}

}  // namespace

double liouville_remainder(const LiouvilleInput& in, double c) {
    const auto active = active_remainder_subsets(in);
    double r = 0.0;
    for (const auto& t : remainder_terms(in)) {
        if (is_active(active, t.mask)) r += t.coeff * std::exp((t.rate - in.s()) * c);
    }
    return r;
}

ExtendedEstimate extended_liouville_from_masses(const LiouvilleInput& in, const std::vector<double>& rho,
                                                const CGrid& grid) {
    check_liouville_insertions(in, ErrorCode::WindowViolation);
    const double g = in.gamma, s = in.s(), mu = in.mu;
    if (!(s > -g)) {
        std::ostringstream os;
        os << "s = " << s << " is not above -gamma";
        throw Error(ErrorCode::WindowViolation, os.str());
    }
    if (!(grid.step > 0.0 && grid.c_max > grid.c_min)) throw Error(ErrorCode::InvalidArgument, "bad c grid");
    if (rho.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");

    ExtendedEstimate out;
    out.active_subsets = active_remainder_subsets(in);
    const auto terms = remainder_terms(in);
    for (const auto& t : terms) {
        if (std::abs(t.rate) < 1e-9) {
            throw Error(ErrorCode::WindowViolation, "s lies on a remainder threshold s = sum 2(alpha_k - Q)");
        }
    }

    const int m = static_cast<int>(std::lround((grid.c_max - grid.c_min) / grid.step));
    const double h = (grid.c_max - grid.c_min) / m;
    std::vector<double> c(m + 1), w(m + 1), es(m + 1), t(m + 1);
    for (int i = 0; i <= m; ++i) {
        c[i] = grid.c_min + h * i;
        w[i] = (i == 0 || i == m) ? 0.5 * h : h;
        es[i] = std::exp(s * c[i]);
        t[i] = mu * std::exp(g * c[i]);
    }

    // Deterministic pieces: the remainder on the grid, its closed-form upper tail, and the
    // leading asymptotics (inactive terms) below the grid.
    double det = 0.0;
    std::vector<double> rem(m + 1, 0.0), full(m + 1, 0.0);
    for (int i = 0; i <= m; ++i) {
        for (const auto& term : terms) {
            const double v = term.coeff * std::exp((term.rate - s) * c[i]);
            full[i] += v;
            if (is_active(out.active_subsets, term.mask)) rem[i] += v;
        }
        det -= w[i] * es[i] * rem[i];
    }
    for (const auto& term : terms) {
        if (is_active(out.active_subsets, term.mask)) {
            det += term.coeff * std::exp(term.rate * grid.c_max) / term.rate;  // -int_{c_max}^inf, rate < 0
        } else {
            det += term.coeff * std::exp(term.rate * grid.c_min) / term.rate;  // int_{-inf}^{c_min}, rate > 0
        }
    }

    const size_t n = rho.size();
    std::vector<double> J(n);
    std::vector<double> mean_e(m + 1, 0.0);
    double upper = 0.0;
    for (size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double e = std::exp(-t[i] * rho[k]);
            mean_e[i] += e;
            sum += w[i] * es[i] * e;
        }
        J[k] = sum;
        const double u1 = t[m] * rho[k];
        upper += g * u1 > s ? es[m] * std::exp(-u1) / (g * u1 - s) : std::numeric_limits<double>::infinity();
    }
    out.upper_tail_bound = 2.0 * upper / static_cast<double>(n);

    double mean = 0.0, m2 = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const double d = J[k] - mean;
        mean += d / static_cast<double>(k + 1);
        m2 += d * (J[k] - mean);
    }
    const double sd = std::sqrt(m2 / static_cast<double>(n - 1));

    out.c_values = c;
    out.integrand.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        mean_e[i] /= static_cast<double>(n);
        out.integrand[i] = es[i] * (mean_e[i] - rem[i]);
    }
    out.lower_tail_estimate = 2.0 * std::abs(es[0] * (mean_e[0] - full[0])) / (s + g);

    McEstimate& e = out.estimate;
    e.value = 2.0 * (mean + det);
    e.std_error = 2.0 * sd / std::sqrt(static_cast<double>(n));
    e.log_abs = std::log(std::abs(e.value));
    e.rel_error = e.std_error / std::abs(e.value);
    e.n_samples = n;
    return out;
}

ExtendedEstimate mc_extended_liouville(const LiouvilleInput& in, const CGrid& grid, const PointSet& ps, uint64_t n,
                                       uint64_t seed) {
    check_liouville_insertions(in, ErrorCode::WindowViolation);
    if (!(in.s() > -in.gamma)) throw Error(ErrorCode::WindowViolation, "s must exceed -gamma");
    ExtendedEstimate out = extended_liouville_from_masses(in, liouville_masses(in, ps, n, seed), grid);
    out.estimate.n_points = ps.size();
    out.estimate.level = ps.spec.level;
    return out;
}

}  // namespace toda
