//------------------------------------------------------------------------------
//
//   Copyright 2026 The sdcount Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "sdcount/dcor.hpp"
#include "sdcount/errors.hpp"
#include "sdcount/estimators.hpp"
#include "sdcount/harness.hpp"
#include "sdcount/ica.hpp"
#include "sdcount/simkit.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sdcount;

namespace {

// 1-D arrays are one row of samples; 2-D arrays are dims x samples.
Matrix as_rows(py::array_t<double, py::array::forcecast> const &a)
{
  if (a.ndim() == 1)
  {
    Matrix m(1, a.shape(0));
    auto r = a.unchecked<1>();
    for (py::ssize_t t = 0; t < a.shape(0); ++t)
    {
      m(0, t) = r(t);
    }
    return m;
  }
  if (a.ndim() == 2)
  {
    Matrix m(a.shape(0), a.shape(1));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
    {
      for (py::ssize_t j = 0; j < a.shape(1); ++j)
      {
        m(i, j) = r(i, j);
      }
    }
    return m;
  }
  throw DimensionError("expected a 1-D or 2-D array");
}

Method method_from(std::string const &name)
{
  auto const m = parse_method(name);
  if (!m)
  {
    throw DomainError("unknown method '" + name + "'");
  }
  return *m;
}

EigenSpectrum spectrum_from(Vector const &eigenvalues, Eigen::Index samples)
{
  return EigenSpectrum{eigenvalues, samples};
}

py::dict estimate_dict(OrderEstimate const &e)
{
  py::dict d;
  d["method"]      = std::string(method_name(e.method));
  d["m_hat"]       = e.m_hat;
  d["diagnostics"] = e.diagnostics;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sdcount, m)
{
  m.doc() = "Source-count estimation from distance correlation of separated sources";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ComputationError>(m, "ComputationError", base.ptr());

  m.def("dcov_sq", [](py::array_t<double, py::array::forcecast> const &x,
                      py::array_t<double, py::array::forcecast> const &y) {
    return dcov_sq(SampleSet(as_rows(x)), SampleSet(as_rows(y)));
  }, py::arg("x"), py::arg("y"));
  m.def("dvar_sq", [](py::array_t<double, py::array::forcecast> const &x) {
    return dvar_sq(SampleSet(as_rows(x)));
  }, py::arg("x"));
  m.def("dcor", [](py::array_t<double, py::array::forcecast> const &x,
                   py::array_t<double, py::array::forcecast> const &y) {
    return dcor(SampleSet(as_rows(x)), SampleSet(as_rows(y)));
  }, py::arg("x"), py::arg("y"), "Empirical distance correlation (squared form) in [0, 1].");

  m.def("separate", [](Matrix const &x, Eigen::Index n) {
    SeparationResult const r = ica::separate(x, n);
    py::dict d;
    d["unmixing"]  = r.unmixing;
    d["sources"]   = r.sources;
    d["sort_keys"] = r.sort_keys;
    return d;
  }, py::arg("x"), py::arg("n"));
  m.def("amari_index", &ica::amari_index, py::arg("g"));

  m.def("sdc_curve", [](Matrix const &x) { return estimators::sdc_curve(x).values; },
        py::arg("x"));
  m.def("sdc_estimate", [](Matrix const &x) { return estimators::sdc_estimate(x).m_hat; },
        py::arg("x"));
  m.def("covariance_spectrum", [](Matrix const &x) {
    auto const s = estimators::covariance_spectrum(x);
    return py::make_tuple(s.eigenvalues, s.sample_count);
  }, py::arg("x"));
  m.def("mdl_estimate", [](Vector const &eig, Eigen::Index samples) {
    return estimate_dict(estimators::mdl_estimate(spectrum_from(eig, samples)));
  }, py::arg("eigenvalues"), py::arg("samples"));
  m.def("sorte_estimate", [](Vector const &eig, Eigen::Index samples) {
    return estimate_dict(estimators::sorte_estimate(spectrum_from(eig, samples)));
  }, py::arg("eigenvalues"), py::arg("samples"));
  m.def("rmt_estimate", [](Vector const &eig, Eigen::Index samples, double alpha) {
    return estimate_dict(estimators::rmt_estimate(spectrum_from(eig, samples), alpha));
  }, py::arg("eigenvalues"), py::arg("samples"), py::arg("alpha") = 0.1);
  m.def("estimate", [](Matrix const &x, std::string const &method, double alpha) {
    switch (method_from(method))
    {
    case Method::Sdc:
      return estimate_dict(estimators::sdc_estimate(x));
    case Method::Mdl:
      return estimate_dict(estimators::mdl_estimate(estimators::covariance_spectrum(x)));
    case Method::Sorte:
      return estimate_dict(estimators::sorte_estimate(estimators::covariance_spectrum(x)));
    case Method::Rmt:
      break;
    }
    return estimate_dict(estimators::rmt_estimate(estimators::covariance_spectrum(x), alpha));
  }, py::arg("x"), py::arg("method") = "sdc", py::arg("alpha") = 0.1);

  m.def("mix64", &simkit::mix64, py::arg("x"));
  m.def("derive_seed", [](std::uint64_t base, std::vector<std::uint64_t> const &parts) {
    std::uint64_t state = simkit::mix64(base);
    for (auto p : parts)
    {
      state = simkit::mix64(state ^ simkit::mix64(p));
    }
    return state;
  }, py::arg("base"), py::arg("parts"));
  m.def("draw_sources", [](std::vector<std::string> const &laws, Eigen::Index samples,
                           std::uint64_t seed) {
    std::vector<SourceSpec> specs;
    for (auto const &name : laws)
    {
      auto const law = parse_source_law(name);
      if (!law)
      {
        throw DomainError("unknown source law '" + name + "'");
      }
      specs.push_back({*law, 1.0});
    }
    return simkit::draw_sources(specs, samples, seed);
  }, py::arg("laws"), py::arg("samples"), py::arg("seed"));
  m.def("draw_mixing", [](Eigen::Index sensors, Eigen::Index sources, std::string const &law,
                          std::uint64_t seed) {
    auto const parsed = parse_mixing_law(law);
    if (!parsed)
    {
      throw DomainError("unknown mixing law '" + law + "'");
    }
    return simkit::draw_mixing(sensors, sources, *parsed, seed);
  }, py::arg("sensors"), py::arg("sources"), py::arg("law") = "gaussian", py::arg("seed") = 1);
  m.def("synthesize", &simkit::synthesize, py::arg("mixing"), py::arg("sources"),
        py::arg("noise_cov"), py::arg("seed"));
  m.def("db_to_linear", &db_to_linear, py::arg("db"));

  m.def("simulate", [](std::string const &config, std::string const &out_dir,
                       std::optional<int> trials, std::optional<std::uint64_t> seed,
                       std::optional<std::string> methods) {
    harness::SimulateOptions opts;
    opts.config  = config;
    opts.out_dir = out_dir;
    opts.trials  = trials;
    opts.seed    = seed;
    opts.methods = methods;
    opts.threads = 1;
    std::ostringstream out, err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = harness::cmd_simulate(opts, out, err);
    }
    if (code == 2)
    {
      throw InputError(err.str());
    }
    if (code != 0)
    {
      throw ComputationError(err.str());
    }
    return out.str();
  }, py::arg("config"), py::arg("out_dir"), py::arg("trials") = py::none(),
     py::arg("seed") = py::none(), py::arg("methods") = py::none());

  m.attr("__version__") = harness::kToolVersion;
}
