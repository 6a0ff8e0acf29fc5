#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "todacft/errors.hpp"
#include "todacft/exact_formulas.hpp"
#include "todacft/gmc.hpp"
#include "todacft/hypergeometric.hpp"
#include "todacft/verify.hpp"

namespace py = pybind11;
using namespace toda;

namespace {

py::dict evaluation_dict(const Evaluation& e) {
    py::dict d;
    d["value"] = e.value.value();
    d["log_abs"] = e.value.log_abs;
    d["sign"] = e.value.sign;
    d["finite"] = e.finite();
    d["flags"] = e.flags();
    return d;
}

py::dict estimate_dict(const McEstimate& e) {
    py::dict d;
    d["estimate"] = e.value;
    d["std_error"] = e.std_error;
    d["rel_error"] = e.rel_error;
    d["n_samples"] = e.n_samples;
    d["n_points"] = e.n_points;
    d["warnings"] = e.warnings;
    return d;
}

WeightVector omegas(const std::array<double, 2>& c) { return WeightVector::from_omegas(c[0], c[1]); }

PointSet budget_grid(int budget, double r_min) {
    GridSpec base;
    base.r_min = r_min;
    return make_point_set(grid_for_budget(budget, base));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "sl3 Toda structure constants, conformal blocks and GMC estimators";

    // Messages start with the error code name, e.g. "MomentViolation: ...".
    py::register_exception<Error>(m, "TodaError");

    m.def("log_gamma", [](cplx z) { return log_gamma(z).log(); }, py::arg("z"), "Principal log Gamma(z).");
    m.def("l_func", [](double x) { return l_func(x).value(); }, py::arg("x"), "Gamma(x) / Gamma(1 - x).");
    m.def("upsilon", [](cplx z, double gamma) { return upsilon_log(z, gamma).value(); }, py::arg("z"), py::arg("gamma"));
    m.def("upsilon_log", [](cplx z, double gamma) { return upsilon_log(z, gamma).log(); }, py::arg("z"),
          py::arg("gamma"));

    m.def("dozz", [](double a1, double a2, double a3, double gamma, double mu) {
              return evaluation_dict(dozz(a1, a2, a3, gamma, mu));
          },
          py::arg("a1"), py::arg("a2"), py::arg("a3"), py::arg("gamma"), py::arg("mu") = 1.0);
    m.def("fateev_litvinov",
          [](std::array<double, 2> alpha0, double kappa, std::array<double, 2> alpha_inf, double gamma, double mu) {
              return evaluation_dict(fateev_litvinov({omegas(alpha0), kappa, omegas(alpha_inf), TodaParams(gamma, mu)}));
          },
          py::arg("alpha0"), py::arg("kappa"), py::arg("alpha_inf"), py::arg("gamma"), py::arg("mu") = 1.0,
          "Weights are given by their coordinates (<a,e1>, <a,e2>) in the fundamental-weight basis.");

    m.def("hyper_3f2", [](std::array<double, 3> a, std::array<double, 2> b, cplx z) { return hyper_3f2(a, b, z).value; },
          py::arg("a"), py::arg("b"), py::arg("z"));
    m.def("block", [](const std::string& name, std::array<double, 3> a, std::array<double, 2> b, cplx z) {
              for (Block blk : {Block::H0, Block::H1, Block::H2, Block::G1, Block::G2, Block::G3}) {
                  if (name == block_name(blk)) return block_value(blk, BlockParams(a, b), z);
              }
              throw Error(ErrorCode::InvalidArgument, "unknown block " + name);
          },
          py::arg("name"), py::arg("a"), py::arg("b"), py::arg("z"));

    m.def("suite_names", &suite_names);
    m.def("run_suite_json", [](const std::string& name, bool all_checks) {
              py::gil_scoped_release release;
              return run_suite(name).to_json(all_checks).dump();
          },
          py::arg("name"), py::arg("all_checks") = false);

    m.def("mc_liouville_dozz",
          [](std::array<double, 3> alpha, double gamma, double mu, int budget, double r_min, uint64_t n, uint64_t seed) {
              McEstimate e;
              {
                  py::gil_scoped_release release;
                  e = mc_liouville_dozz(LiouvilleInput{alpha, gamma, mu}, budget_grid(budget, r_min), n, seed).estimate;
              }
              return estimate_dict(e);
          },
          py::arg("alpha"), py::arg("gamma"), py::arg("mu") = 1.0, py::arg("budget") = 1024, py::arg("r_min") = 1e-5,
          py::arg("n") = 2000, py::arg("seed") = 1);
    m.def("mc_toda",
          [](std::array<double, 2> alpha0, double kappa, std::array<double, 2> alpha_inf, double gamma, double mu,
             int budget, double r_min, uint64_t n, uint64_t seed) {
              McEstimate e;
              {
                  py::gil_scoped_release release;
                  const ThreePointInput in{omegas(alpha0), kappa, omegas(alpha_inf), TodaParams(gamma, mu)};
                  e = mc_three_point(in, budget_grid(budget, r_min), n, seed).estimate;
              }
              return estimate_dict(e);
          },
          py::arg("alpha0"), py::arg("kappa"), py::arg("alpha_inf"), py::arg("gamma"), py::arg("mu") = 1.0,
          py::arg("budget") = 1024, py::arg("r_min") = 1e-5, py::arg("n") = 2000, py::arg("seed") = 1);
}
