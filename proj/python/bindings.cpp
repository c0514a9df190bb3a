#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "speclyap/commands.hpp"
#include "speclyap/eigenbases.hpp"
#include "speclyap/ou_simulator.hpp"
#include "speclyap/special_functions.hpp"
#include "speclyap/spectral_core.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using Rows = std::vector<std::vector<double>>;

speclyap::Geometry parse_geometry(const std::string& name) {
  if (name == "disk") return speclyap::Geometry::disk;
  if (name == "oscillator") return speclyap::Geometry::oscillator;
  if (name == "sphere") return speclyap::Geometry::sphere;
  throw py::value_error("geometry must be disk, oscillator or sphere");
}

py::dict spectrum(const std::string& geometry, int count, double alpha, double gamma, int d) {
  const auto g = parse_geometry(geometry);
  speclyap::GeometryParams params{alpha, gamma, d};
  params.validate(g);
  const auto spec = speclyap::make_spectrum(g, params, count);
  std::vector<std::string> labels;
  for (const auto& m : spec.modes()) labels.push_back(speclyap::to_string(m));
  return py::dict("eigenvalues"_a = spec.eigenvalues(), "modes"_a = labels);
}

py::dict solve(const std::vector<double>& eigenvalues, const Rows& Q) {
  const auto spec = speclyap::DissipativeSpectrum::from_eigenvalues(eigenvalues);
  const auto sol = speclyap::solve_spectral_lyapunov(spec, speclyap::SymMatrix::from_rows(Q));
  return py::dict("P"_a = sol.P.to_rows(), "residual_rel"_a = sol.residual_rel,
                  "min_eig_P"_a = sol.min_eigenvalue);
}

Rows solve_dense(const std::vector<double>& eigenvalues, const Rows& Q) {
  const auto spec = speclyap::DissipativeSpectrum::from_eigenvalues(eigenvalues);
  return speclyap::solve_dense_lyapunov(spec, speclyap::SymMatrix::from_rows(Q)).to_rows();
}

py::dict simulate(const std::vector<double>& eigenvalues, const Rows& Q, double dt, long steps, int paths,
                  std::uint64_t seed, long burn_in, unsigned threads) {
  const auto spec = speclyap::DissipativeSpectrum::from_eigenvalues(eigenvalues);
  speclyap::SimConfig cfg;
  cfg.dt = dt;
  cfg.n_steps = steps;
  cfg.n_paths = paths;
  cfg.seed = seed;
  cfg.burn_in = burn_in;
  cfg.threads = threads;
  const auto r = speclyap::simulate(spec, speclyap::SymMatrix::from_rows(Q), cfg);
  return py::dict("P_hat"_a = r.P_hat.to_rows(), "stderr"_a = r.std_error.to_rows(), "burn_in"_a = r.burn_in);
}

std::tuple<int, std::string> run(const std::vector<std::string>& args) {
  std::string text;
  const int code = speclyap::run_cli(args, &text);
  return {code, text};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral steady-state covariance of dissipative linear SDEs";
  m.def("spectrum", &spectrum, "geometry"_a, "count"_a, "alpha"_a = 1.0, "gamma"_a = 0.5, "d"_a = 1);
  m.def("solve_lyapunov", &solve, "eigenvalues"_a, "Q"_a);
  m.def("solve_dense_lyapunov", &solve_dense, "eigenvalues"_a, "Q"_a);
  m.def("simulate", &simulate, "eigenvalues"_a, "Q"_a, "dt"_a = 0.1, "steps"_a = 20000, "paths"_a = 16,
        "seed"_a = 0, "burn_in"_a = -1, "threads"_a = 1);
  m.def("bessel_j", &speclyap::bessel_j, "m"_a, "x"_a);
  m.def("bessel_zero", &speclyap::bessel_zero, "m"_a, "k"_a);
  m.def("run_cli", &run, "args"_a, "Runs a command; returns (exit code, document text when no output path).");
}
