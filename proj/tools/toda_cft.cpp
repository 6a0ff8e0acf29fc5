// toda_cft: evaluate exact formulas, run verification suites, drive Monte Carlo runs and
// tabulate hypergeometric blocks.
//
// Exit codes: 0 success, 1 error or failed verification, 2 pole/zero reported,
// 64 usage error, 65 invalid mc configuration, 130 interrupted.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <csignal>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "todacft/errors.hpp"
#include "todacft/exact_formulas.hpp"
#include "todacft/gmc.hpp"
#include "todacft/hypergeometric.hpp"
#include "todacft/verify.hpp"
#include "todacft/weight_json.hpp"

#ifndef TODACFT_GIT_DESCRIBE
#define TODACFT_GIT_DESCRIBE "unknown"
#endif

using nlohmann::json;
using namespace toda;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPoleZero = 2;
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;
constexpr int kExitInterrupted = 130;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON has no infinities; they are written as strings.
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// "0.5q" means 0.5 * q; plain numbers pass through.
double parse_scaled(const std::string& text, double q) {
    std::string t = text;
    double scale = 1.0;
    if (!t.empty() && t.back() == 'q') {
        t.pop_back();
        scale = q;
        if (t.empty()) return q;
    }
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw UsageError("cannot parse number \"" + text + "\"");
    }
    if (used != t.size()) throw UsageError("cannot parse number \"" + text + "\"");
    return v * scale;
}

WeightVector parse_weight(const std::string& text, const char* what) {
    try {
        return weight_from_json_text(text);
    } catch (const Error& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

const WeylElement& parse_weyl(const std::string& word) {
    if (word == "Id" || word == "id" || word == "e" || word == "1") return WeylElement::get(WeylElement::Identity);
    for (const auto& s : WeylElement::all()) {
        if (s.word() == word) return s;
    }
    std::string known;
    for (const auto& s : WeylElement::all()) known += " " + (s.word().empty() ? std::string("Id") : s.word());
    throw UsageError("unknown Weyl element \"" + word + "\"; expected one of" + known);
}

json log_real_json(const LogSignedReal& v) {
    json j{{"log_abs", num(v.log_abs)}, {"sign", v.sign}};
    j["value"] = v.is_finite() ? num(v.value()) : json(nullptr);
    return j;
}

json weight_record(const WeightVector& v) {
    return {{"omega", {v.omega_coords()[0], v.omega_coords()[1]}}, {"euclid", {v.x, v.y}}};
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string utc_timestamp() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------- eval ----------

struct EvalArgs {
    std::string kind;
    std::string z = "0.5q", z_im = "0";
    std::string x;
    double gamma = 1.0, mu = 1.0;
    double mu1 = std::numeric_limits<double>::quiet_NaN(), mu2 = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> alphas;
    std::string weights, alpha0, alpha_inf, alpha;
    double kappa = std::numeric_limits<double>::quiet_NaN();
    std::string weyl = "Id";
};

TodaParams eval_params(const EvalArgs& a) {
    const double m1 = std::isnan(a.mu1) ? a.mu : a.mu1;
    const double m2 = std::isnan(a.mu2) ? a.mu : a.mu2;
    return TodaParams(a.gamma, m1, m2);
}

// --weights may bundle {"alpha0": w, "kappa": k, "alpha_inf": w, "alpha": w}.
json bundled_weights(const EvalArgs& a) {
    if (a.weights.empty()) return json::object();
    json j;
    try {
        j = json::parse(a.weights);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("--weights: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("--weights must be a JSON object");
    return j;
}

WeightVector pick_weight(const std::string& flag_value, const json& bundle, const char* key) {
    if (!flag_value.empty()) return parse_weight(flag_value, key);
    if (bundle.contains(key)) {
        try {
            return weight_from_json(bundle[key]);
        } catch (const Error& e) {
            throw UsageError(std::string(key) + ": " + e.what());
        }
    }
    throw UsageError(std::string("missing weight ") + key);
}

int report_evaluation(json out, const Evaluation& ev) {
    out.update(log_real_json(ev.value));
    out["flags"] = ev.flags();
    print_json(out);
    return ev.finite() ? kExitOk : kExitPoleZero;
}

int cmd_eval(const EvalArgs& a) {
    json out{{"kind", a.kind}};
    if (a.kind == "upsilon") {
        const double q = a.gamma + 2.0 / a.gamma;
        const cplx z(parse_scaled(a.z, q), parse_scaled(a.z_im, q));
        const LogComplex u = upsilon_log(z, a.gamma);
        out["input"] = {{"z", {z.real(), z.imag()}}, {"gamma", a.gamma}};
        out["log_abs"] = num(u.log_abs);
        out["phase"] = u.phase;
        out["flags"] = u.is_zero() ? json::array({"zero"}) : json::array();
        print_json(out);
        return u.is_zero() ? kExitPoleZero : kExitOk;
    }
    if (a.kind == "l") {
        if (a.x.empty()) throw UsageError("eval l needs --x");
        const double x = parse_scaled(a.x, 1.0);
        out["input"] = {{"x", x}};
        const LogSignedReal v = l_func(x);
        out.update(log_real_json(v));
        out["flags"] = v.is_zero() ? json::array({"zero"}) : v.is_pole() ? json::array({"pole"}) : json::array();
        print_json(out);
        return v.is_finite() ? kExitOk : kExitPoleZero;
    }
    if (a.kind == "dozz") {
        if (a.alphas.size() != 3) throw UsageError("eval dozz needs --alphas a1,a2,a3");
        out["input"] = {{"alphas", a.alphas}, {"gamma_tilde", a.gamma}, {"mu", a.mu}};
        return report_evaluation(out, dozz(a.alphas[0], a.alphas[1], a.alphas[2], a.gamma, a.mu));
    }
    const json bundle = bundled_weights(a);
    const TodaParams p = eval_params(a);
    if (a.kind == "fali") {
        double kappa = a.kappa;
        if (std::isnan(kappa) && bundle.contains("kappa") && bundle["kappa"].is_number()) kappa = bundle["kappa"];
        if (std::isnan(kappa)) throw UsageError("eval fali needs --kappa");
        ThreePointInput in{pick_weight(a.alpha0, bundle, "alpha0"), kappa, pick_weight(a.alpha_inf, bundle, "alpha_inf"), p};
        in.alpha0 = shifted_action(parse_weyl(a.weyl), in.alpha0, p);
        out["input"] = {{"alpha0", weight_record(in.alpha0)}, {"kappa", kappa}, {"alpha_inf", weight_record(in.alpha_inf)},
                        {"gamma", p.gamma}, {"mu", p.mu1}, {"weyl", a.weyl}};
        return report_evaluation(out, fateev_litvinov(in));
    }
    if (a.kind == "reflection") {
        const WeightVector alpha = pick_weight(a.alpha.empty() ? a.alpha0 : a.alpha, bundle,
                                               bundle.contains("alpha") ? "alpha" : "alpha0");
        const WeylElement& s = parse_weyl(a.weyl);
        out["input"] = {{"alpha", weight_record(alpha)}, {"weyl", a.weyl}, {"gamma", p.gamma}, {"mu1", p.mu1}, {"mu2", p.mu2}};
        const LogSignedReal v = reflection_coeff(s, alpha, p);
        out.update(log_real_json(v));
        out["flags"] = v.is_zero() ? json::array({"zero"}) : v.is_pole() ? json::array({"pole"}) : json::array();
        print_json(out);
        return v.is_finite() ? kExitOk : kExitPoleZero;
    }
    throw UsageError("unknown eval kind \"" + a.kind + "\"");
}

// ---------- verify ----------

struct VerifyArgs {
    std::string suite = "all";
    std::vector<double> gammas;
    int trials = 0;
    uint64_t seed = VerifyOptions{}.seed;
    bool all_checks = false;
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    std::vector<std::string> suites;
    if (a.suite == "all") {
        suites = suite_names();
    } else {
        bool known = false;
        for (const auto& n : suite_names()) known = known || n == a.suite;
        if (!known) throw UsageError("unknown suite \"" + a.suite + "\"");
        suites = {a.suite};
    }
    VerifyOptions o;
    o.gammas = a.gammas;
    o.trials = a.trials;
    o.seed = a.seed;
    json report{{"suites", json::array()}};
    bool ok = true;
    for (const auto& name : suites) {
        const SuiteReport r = run_suite(name, o);
        ok = ok && r.passed();
        report["suites"].push_back(r.to_json(a.all_checks));
    }
    report["pass"] = ok;
    if (!a.out.empty()) {
        std::ofstream f(a.out);
        f << report.dump(2) << "\n";
    }
    print_json(report);
    return ok ? kExitOk : kExitError;
}

// ---------- mc ----------

struct LevelSpec {
    int points = 0;
    double r_min = 1e-5;
};

struct McConfig {
    std::string kind;  // toda | liouville | extended-liouville
    double gamma = 0.0, mu = 1.0;
    ThreePointInput toda;
    LiouvilleInput liouville;
    CGrid c_grid;
    std::vector<LevelSpec> levels;
    double r_deep = 0.0;
    int n_deep = 8;
    uint64_t n_samples = 0;
    uint64_t seed = 0;
};

template <class T>
T require(const json& j, const char* key, const char* where) {
    if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

McConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    McConfig c;
    c.kind = j.value("kind", std::string("toda"));
    c.gamma = require<double>(j, "gamma", "config");
    c.mu = j.contains("mu") ? require<double>(j, "mu", "config") : 1.0;
    c.n_samples = require<uint64_t>(j, "n_samples", "config");
    c.seed = require<uint64_t>(j, "seed", "config");
    if (!(c.n_samples >= 2)) throw ConfigError("n_samples must be at least 2");
    if (!(c.mu > 0.0)) throw ConfigError("mu must be positive");
    if (!j.contains("weights") || !j["weights"].is_object()) throw ConfigError("config: \"weights\" must be an object");
    const json& w = j["weights"];
    if (c.kind == "toda") {
        if (!(c.gamma > 0.0 && c.gamma < std::sqrt(2.0))) throw ConfigError("toda gamma must lie in (0, sqrt 2)");
        try {
            c.toda = ThreePointInput{weight_from_json(w.at("alpha0")), require<double>(w, "kappa", "weights"),
                                     weight_from_json(w.at("alpha_inf")), TodaParams(c.gamma, c.mu)};
        } catch (const Error& e) {
            throw ConfigError(std::string("weights: ") + e.what());
        } catch (const json::exception& e) {
            throw ConfigError(std::string("weights: ") + e.what());
        }
    } else if (c.kind == "liouville" || c.kind == "extended-liouville") {
        if (!(c.gamma > 0.0 && c.gamma < 2.0)) throw ConfigError("liouville gamma must lie in (0, 2)");
        const auto a = require<std::vector<double>>(w, "alphas", "weights");
        if (a.size() != 3) throw ConfigError("weights.alphas must have three entries");
        c.liouville = LiouvilleInput{{a[0], a[1], a[2]}, c.gamma, c.mu};
        if (j.contains("c_grid")) {
            const json& g = j["c_grid"];
            c.c_grid.c_min = g.value("c_min", c.c_grid.c_min);
            c.c_grid.c_max = g.value("c_max", c.c_grid.c_max);
            c.c_grid.step = g.value("step", c.c_grid.step);
        }
    } else {
        throw ConfigError("unknown kind \"" + c.kind + "\" (toda, liouville, extended-liouville)");
    }

    if (!j.contains("grid") || !j["grid"].is_object()) throw ConfigError("config: \"grid\" must be an object");
    const json& g = j["grid"];
    const auto points = require<std::vector<int>>(g, "points_per_level", "grid");
    const int levels = g.contains("levels") ? require<int>(g, "levels", "grid") : static_cast<int>(points.size());
    if (levels < 1 || static_cast<size_t>(levels) != points.size()) {
        throw ConfigError("grid.levels must equal the length of grid.points_per_level");
    }
    // Far-field radius R = 1 / r_min; either may be given, as a scalar or per level.
    std::vector<double> r_min(levels, 1e-5);
    auto per_level = [&](const char* key, bool invert) {
        if (!g.contains(key)) return;
        std::vector<double> v = g[key].is_array() ? require<std::vector<double>>(g, key, "grid")
                                                   : std::vector<double>(levels, require<double>(g, key, "grid"));
        if (static_cast<int>(v.size()) != levels) throw ConfigError(std::string("grid.") + key + " must have one entry per level");
        for (int k = 0; k < levels; ++k) r_min[k] = invert ? 1.0 / v[k] : v[k];
    };
    per_level("R", true);
    per_level("r_min", false);
    for (int k = 0; k < levels; ++k) {
        if (points[k] < 64 || points[k] > 20000) throw ConfigError("points_per_level entries must lie in [64, 20000]");
        if (!(r_min[k] > 0.0 && r_min[k] < 0.25)) throw ConfigError("r_min must lie in (0, 1/4) (R > 4)");
        c.levels.push_back({points[k], r_min[k]});
    }
    c.r_deep = g.value("r_deep", 0.0);
    c.n_deep = g.value("n_deep", 8);
    return c;
}

volatile std::sig_atomic_t g_sigint = 0;

extern "C" void on_sigint(int) {
    g_sigint = 1;
    interrupt_flag().store(true);
}

struct McArgs {
    std::string config;
    std::string out;
    std::string compare;
    int64_t seed = -1;
};

int cmd_mc(const McArgs& a) {
    json cfg_json;
    {
        std::ifstream f(a.config);
        if (!f) throw ConfigError("cannot read config " + a.config);
        try {
            cfg_json = json::parse(f);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    McConfig cfg = parse_config(cfg_json);
    if (a.seed >= 0) cfg.seed = static_cast<uint64_t>(a.seed);
    if (!a.compare.empty()) {
        const bool ok = (a.compare == "fali" && cfg.kind == "toda") || (a.compare == "dozz" && cfg.kind != "toda");
        if (!ok) throw UsageError("--compare " + a.compare + " does not apply to kind " + cfg.kind);
    }

    const std::string out_path = a.out.empty() ? "mc_results.jsonl" : a.out;
    const std::string manifest_path = out_path + ".manifest.json";
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + out_path);
    auto emit = [&](const json& row) {
        out << row.dump() << "\n";
        out.flush();
        std::cout << row.dump() << "\n";
        std::cout.flush();
    };

    json effective = cfg_json;
    effective["seed"] = cfg.seed;
    const std::string config_hash = hex64(fnv1a(effective.dump()));
    json manifest{{"command", "mc"},
                  {"parameters", effective},
                  {"seed", cfg.seed},
                  {"timestamp", utc_timestamp()},
                  {"config_hash", config_hash},
                  {"git_describe", TODACFT_GIT_DESCRIBE},
                  {"config_path", a.config},
                  {"outputs", {out_path, manifest_path}},
                  {"compare", a.compare},
                  {"threads", worker_threads()}};
    auto write_manifest = [&](const std::string& status) {
        manifest["status"] = status;
        std::ofstream m(manifest_path, std::ios::trunc);
        m << manifest.dump(2) << "\n";
    };
    write_manifest("running");

    std::signal(SIGINT, on_sigint);
    std::vector<double> estimates, errors;
    double exact = std::numeric_limits<double>::quiet_NaN();
    if (a.compare == "fali") exact = fateev_litvinov(cfg.toda).value.value();
    if (a.compare == "dozz") {
        const auto& al = cfg.liouville.alpha;
        exact = dozz(al[0], al[1], al[2], cfg.gamma, cfg.mu).value.value();
    }

    json timings = json::array();
    try {
        for (size_t k = 0; k < cfg.levels.size(); ++k) {
            GridSpec base;
            base.r_min = cfg.levels[k].r_min;
            base.level = static_cast<int>(k);
            base.r_deep = cfg.r_deep;
            base.n_deep = cfg.n_deep;
            const GridSpec spec = grid_for_budget(cfg.levels[k].points, base);
            const PointSet ps = make_point_set(spec);
            const auto t0 = std::chrono::steady_clock::now();
            json row{{"type", "level"}, {"kind", cfg.kind}, {"level", k}, {"config_hash", config_hash},
                     {"n_points", ps.size()}, {"n_theta", spec.n_theta}, {"r_min", spec.r_min},
                     {"n_samples", cfg.n_samples}, {"seed", cfg.seed}};
            McEstimate e;
            if (cfg.kind == "toda") {
                const GmcRun run = mc_three_point(cfg.toda, ps, cfg.n_samples, cfg.seed);
                e = run.estimate;
                const auto s = cfg.toda.s_exponents();
                row["s"] = {s[0], s[1]};
            } else if (cfg.kind == "liouville") {
                e = mc_liouville_dozz(cfg.liouville, ps, cfg.n_samples, cfg.seed).estimate;
                row["s"] = cfg.liouville.s();
            } else {
                const ExtendedEstimate x = mc_extended_liouville(cfg.liouville, cfg.c_grid, ps, cfg.n_samples, cfg.seed);
                e = x.estimate;
                row["s"] = cfg.liouville.s();
                row["upper_tail_bound"] = num(x.upper_tail_bound);
                row["lower_tail_estimate"] = num(x.lower_tail_estimate);
                row["active_subsets"] = x.active_subsets;
            }
            row["estimate"] = num(e.value);
            row["std_error"] = num(e.std_error);
            row["log_abs"] = num(e.log_abs);
            row["rel_error"] = num(e.rel_error);
            row["warnings"] = e.warnings;
            if (!std::isnan(exact)) {
                row["exact"] = num(exact);
                row["rel_deviation"] = num(e.value / exact - 1.0);
                row["z"] = num((e.value - exact) / e.std_error);
            }
            emit(row);
            timings.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            estimates.push_back(e.value);
            errors.push_back(e.std_error);
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Interrupted) throw;
        emit({{"type", "interrupted"}, {"completed_levels", estimates.size()}, {"config_hash", config_hash}});
        manifest["level_seconds"] = timings;
        write_manifest("interrupted");
        return kExitInterrupted;
    }

    if (!std::isnan(exact)) {
        const double fin = estimates.back(), se = errors.back();
        bool decreasing = true;
        for (size_t k = 1; k < estimates.size(); ++k) {
            decreasing = decreasing && std::abs(estimates[k] - exact) < std::abs(estimates[k - 1] - exact);
        }
        emit({{"type", "compare"}, {"against", a.compare}, {"exact", num(exact)}, {"estimate", num(fin)},
              {"std_error", num(se)}, {"rel_deviation", num(fin / exact - 1.0)}, {"z", num((fin - exact) / se)},
              {"error_decreasing", decreasing}, {"config_hash", config_hash}});
    }
    manifest["level_seconds"] = timings;
    write_manifest("complete");
    return kExitOk;
}

// ---------- blocks ----------

struct BlocksArgs {
    std::vector<double> A, B;
    double gamma = 1.0;
    std::string alpha0, alpha_inf;
    double kappa = std::numeric_limits<double>::quiet_NaN();
    std::string chi = "gamma";
    double re_min = 0.05, re_max = 0.85, re_step = 0.05;
    double ring = 0.0;
    int n_angles = 16;
    std::string out;
};

int cmd_blocks(const BlocksArgs& a) {
    BlockParams p;
    if (!a.A.empty() || !a.B.empty()) {
        if (a.A.size() != 3 || a.B.size() != 2) throw UsageError("--A needs three values and --B two");
        p = BlockParams({a.A[0], a.A[1], a.A[2]}, {a.B[0], a.B[1]});
    } else {
        if (a.alpha0.empty() || a.alpha_inf.empty() || std::isnan(a.kappa)) {
            throw UsageError("give --A/--B or --alpha0, --kappa, --alpha-inf");
        }
        const TodaParams tp(a.gamma, 1.0);
        const ThreePointInput in{parse_weight(a.alpha0, "alpha0"), a.kappa, parse_weight(a.alpha_inf, "alpha_inf"), tp};
        const double chi = a.chi == "gamma" ? a.gamma : a.chi == "2/gamma" ? 2.0 / a.gamma : parse_scaled(a.chi, 1.0);
        p = BlockParams::from_shift(shift_coefficients(in, chi));
    }
    ShiftCoefficients sc;
    sc.A = p.A;
    sc.B = p.B;
    const CrossingCoeffs cc{1.0, shift_coeff_A(1, sc).value(), shift_coeff_A(2, sc).value()};

    std::vector<cplx> zs;
    if (a.ring > 0.0) {
        for (int k = 0; k < a.n_angles; ++k) zs.push_back(std::polar(a.ring, 2.0 * 3.14159265358979323846 * k / a.n_angles));
    } else {
        if (!(a.re_step > 0.0)) throw UsageError("--re-step must be positive");
        const int n = static_cast<int>(std::floor((a.re_max - a.re_min) / a.re_step + 1e-9));
        for (int k = 0; k <= n; ++k) zs.emplace_back(a.re_min + a.re_step * k, 0.0);
    }

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out, std::ios::trunc);
        if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open " + a.out);
    }
    std::ostream& os = a.out.empty() ? std::cout : file;
    os << std::setprecision(17);
    os << "z_re,z_im,H0_re,H0_im,H1_re,H1_im,H2_re,H2_im,Hcal,res_H0,res_H1,res_H2,status\n";
    os << "# A=" << p.A[0] << ";" << p.A[1] << ";" << p.A[2] << " B=" << p.B[0] << ";" << p.B[1]
       << " lambda1=" << cc.A1 << " lambda2=" << cc.A2 << "\n";
    bool all_ok = true;
    for (const cplx z : zs) {
        os << z.real() << "," << z.imag() << ",";
        try {
            if (std::abs(z) > 0.9) throw Error(ErrorCode::DomainViolation, "|z| > 0.9 is outside the series domain");
            std::array<cplx, 3> h;
            std::array<double, 3> res;
            for (int i = 0; i < 3; ++i) {
                h[i] = block_H(i, p, z);
                res[i] = ode_residual(p, static_cast<Block>(i), z);
            }
            for (const cplx& v : h) os << v.real() << "," << v.imag() << ",";
            os << crossing_combination(p, cc, z) << "," << res[0] << "," << res[1] << "," << res[2] << ",ok\n";
        } catch (const Error& e) {
            all_ok = false;
            os << ",,,,,,,,,,\"" << e.what() << "\"\n";
        }
    }
    return all_ok ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toda CFT structure constants, conformal blocks and GMC Monte Carlo"};
    app.require_subcommand(1);

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Evaluate one exact formula; prints JSON");
    eval->add_option("kind", ea.kind, "upsilon | l | dozz | fali | reflection")->required()
        ->check(CLI::IsMember({"upsilon", "l", "dozz", "fali", "reflection"}));
    eval->add_option("--z", ea.z, "Upsilon argument, real part (suffix q multiplies by q)");
    eval->add_option("--z-im", ea.z_im, "Upsilon argument, imaginary part");
    eval->add_option("--x", ea.x, "Argument of l");
    eval->add_option("--gamma", ea.gamma, "Coupling (gamma_tilde for dozz)");
    eval->add_option("--mu", ea.mu, "Cosmological constant");
    eval->add_option("--mu1", ea.mu1, "mu_1 for reflection");
    eval->add_option("--mu2", ea.mu2, "mu_2 for reflection");
    eval->add_option("--alphas", ea.alphas, "dozz: three Liouville momenta")->delimiter(',');
    eval->add_option("--weights", ea.weights, "JSON object with alpha0, kappa, alpha_inf or alpha");
    eval->add_option("--alpha0", ea.alpha0, "Weight JSON {\"basis\":..,\"coords\":[x,y]}");
    eval->add_option("--alpha-inf", ea.alpha_inf, "Weight JSON");
    eval->add_option("--alpha", ea.alpha, "Weight JSON (reflection)");
    eval->add_option("--kappa", ea.kappa, "Semi-degenerate weight kappa * omega2");
    eval->add_option("--weyl", ea.weyl, "Weyl element (reflection; fali applies it to alpha0)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run a verification suite; exit 0 iff all checks pass");
    verify->add_option("suite", va.suite, "upsilon | reflection | shift | blocks | integral | dozz-limit | all");
    verify->add_option("--gamma", va.gammas, "Couplings (comma separated)")->delimiter(',');
    verify->add_option("--trials", va.trials, "Random trials per coupling");
    verify->add_option("--seed", va.seed, "Seed for the random trials");
    verify->add_flag("--all-checks", va.all_checks, "List passing checks too");
    verify->add_option("--out", va.out, "Also write the report here");

    McArgs ma;
    auto* mc = app.add_subcommand("mc", "Monte Carlo run from a JSON config; JSON-lines results plus manifest");
    mc->add_option("--config", ma.config, "Run config (JSON)")->required();
    mc->add_option("--out", ma.out, "Results file (JSON lines); manifest goes to <out>.manifest.json");
    mc->add_option("--compare", ma.compare, "fali (toda) or dozz (liouville)")->check(CLI::IsMember({"fali", "dozz"}));
    mc->add_option("--seed", ma.seed, "Override the config seed");

    BlocksArgs ba;
    auto* blocks = app.add_subcommand("blocks", "Tabulate H0, H1, H2 and the crossing combination as CSV");
    blocks->add_option("--A", ba.A, "A1,A2,A3")->delimiter(',');
    blocks->add_option("--B", ba.B, "B1,B2")->delimiter(',');
    blocks->add_option("--gamma", ba.gamma, "Coupling when parameters come from weights");
    blocks->add_option("--alpha0", ba.alpha0, "Weight JSON");
    blocks->add_option("--alpha-inf", ba.alpha_inf, "Weight JSON");
    blocks->add_option("--kappa", ba.kappa, "kappa");
    blocks->add_option("--chi", ba.chi, "gamma | 2/gamma | number");
    blocks->add_option("--re-min", ba.re_min, "Real grid start");
    blocks->add_option("--re-max", ba.re_max, "Real grid end");
    blocks->add_option("--re-step", ba.re_step, "Real grid step");
    blocks->add_option("--ring", ba.ring, "Use the circle |z| = ring instead of the real grid");
    blocks->add_option("--n-angles", ba.n_angles, "Points on the ring");
    blocks->add_option("--out", ba.out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*eval) return cmd_eval(ea);
        if (*verify) return cmd_verify(va);
        if (*mc) return cmd_mc(ma);
        if (*blocks) return cmd_blocks(ba);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
