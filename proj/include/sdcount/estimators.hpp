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

#pragma once

#include "sdcount/ica.hpp"
#include "sdcount/numerics.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdcount {

enum class Method
{
  Sdc,
  Mdl,
  Sorte,
  Rmt,
};

std::string_view method_name(Method method);
/// Accepts lower-case names: sdc, mdl, sorte, rmt.
std::optional<Method> parse_method(std::string_view name);

/// SDC(N) for N = 2 .. L-1.
struct SdcCurve
{
  Eigen::Index sensor_count = 0;
  std::map<Eigen::Index, double> values;
};

struct OrderEstimate
{
  Method method = Method::Sdc;
  Eigen::Index m_hat = 0;
  /// Criterion value per candidate order, keyed by the candidate.
  std::map<Eigen::Index, double> diagnostics;
};

/// Descending eigenvalues of the sample covariance.
struct EigenSpectrum
{
  Vector eigenvalues;
  Eigen::Index sample_count = 0;
};

namespace estimators {

/// Computes SDC(N) from separations under every hypothesis N = 2 .. L.
SdcCurve sdc_curve(Matrix const &x);

/// Same curve from precomputed separations; `separations[k]` must hold the
/// (k + 2)-hypothesis result.
SdcCurve sdc_curve(std::vector<SeparationResult> const &separations, Eigen::Index sensor_count);

/// argmin of the curve, ties to the smallest N.
OrderEstimate sdc_from_curve(SdcCurve const &curve);
OrderEstimate sdc_estimate(Matrix const &x);

EigenSpectrum covariance_spectrum(Matrix const &x);

/// Wax-Kailath minimum description length.
OrderEstimate mdl_estimate(EigenSpectrum const &spectrum);

/// Second-order statistic of eigenvalue gaps; candidates 1 .. L-3.
OrderEstimate sorte_estimate(EigenSpectrum const &spectrum);

/// Tracy-Widom (real case) quantile used by the RMT test at significance
/// alpha; alpha must be one of 0.5, 0.1, 0.05, 0.01.
double tracy_widom_quantile(double alpha);

/// Kritchman-Nadler noise variance estimate assuming k signals.
double rmt_noise_variance(EigenSpectrum const &spectrum, Eigen::Index k);

/// Kritchman-Nadler sequential test on the sample eigenvalues.
OrderEstimate rmt_estimate(EigenSpectrum const &spectrum, double alpha = 0.1);

}  // namespace estimators
}  // namespace sdcount
