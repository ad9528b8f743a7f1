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

#include "sdcount/estimators.hpp"

#include "sdcount/dcor.hpp"
#include "sdcount/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sdcount {

std::string_view method_name(Method method)
{
  switch (method)
  {
  case Method::Sdc:
    return "sdc";
  case Method::Mdl:
    return "mdl";
  case Method::Sorte:
    return "sorte";
  case Method::Rmt:
    return "rmt";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name)
{
  for (Method m : {Method::Sdc, Method::Mdl, Method::Sorte, Method::Rmt})
  {
    if (method_name(m) == name)
    {
      return m;
    }
  }
  return std::nullopt;
}

namespace estimators {

namespace {

// Population variance of v[first..]; v.size() - first must be positive.
double tail_variance(Vector const &v, Eigen::Index first)
{
  auto const tail = v.tail(v.size() - first);
  double const mean = tail.mean();
  return (tail.array() - mean).square().sum() / static_cast<double>(tail.size());
}

void require_positive(EigenSpectrum const &spectrum, char const *who)
{
  if (spectrum.eigenvalues.size() == 0)
  {
    throw DimensionError(std::string(who) + ": empty spectrum");
  }
  if (!(spectrum.eigenvalues.minCoeff() > 0.0) || !spectrum.eigenvalues.allFinite())
  {
    throw DomainError(std::string(who) + ": eigenvalues must be positive and finite");
  }
}

}  // namespace

SdcCurve sdc_curve(std::vector<SeparationResult> const &separations, Eigen::Index sensor_count)
{
  if (sensor_count < 3)
  {
    throw HypothesisRangeError("sdc_curve: need L >= 3 sensors, got " +
                               std::to_string(sensor_count));
  }
  if (static_cast<Eigen::Index>(separations.size()) != sensor_count - 1)
  {
    throw DimensionError("sdc_curve: expected separations for N = 2.." +
                         std::to_string(sensor_count));
  }

  SdcCurve curve;
  curve.sensor_count = sensor_count;
  for (Eigen::Index n = 2; n < sensor_count; ++n)
  {
    SeparationResult const &current = separations[static_cast<std::size_t>(n - 2)];
    SeparationResult const &next    = separations[static_cast<std::size_t>(n - 1)];
    DistanceProfile const newest(SampleSet::scalar(next.sources.row(n).transpose()));

    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
      DistanceProfile const estimate(SampleSet::scalar(current.sources.row(i).transpose()));
      worst = std::max(worst, dcor(estimate, newest));
    }
    curve.values[n] = worst;
  }
  return curve;
}

SdcCurve sdc_curve(Matrix const &x)
{
  Eigen::Index const l = x.rows();
  if (l < 3)
  {
    throw HypothesisRangeError("sdc_curve: need L >= 3 sensors, got " + std::to_string(l));
  }
  if (x.cols() <= 10 * l)
  {
    throw SampleSizeError("sdc_curve: need T > 10 L");
  }
  ica::Separator const separator(x);
  std::vector<SeparationResult> separations;
  separations.reserve(static_cast<std::size_t>(l - 1));
  for (Eigen::Index n = 2; n <= l; ++n)
  {
    separations.push_back(separator.separate(n));
  }
  return sdc_curve(separations, l);
}

OrderEstimate sdc_from_curve(SdcCurve const &curve)
{
  if (curve.values.empty())
  {
    throw HypothesisRangeError("sdc: empty curve");
  }
  OrderEstimate out;
  out.method      = Method::Sdc;
  out.diagnostics = curve.values;
  double best     = std::numeric_limits<double>::infinity();
  // std::map iterates in ascending N, so strict < keeps the smallest on ties.
  for (auto const &[n, value] : curve.values)
  {
    if (value < best)
    {
      best      = value;
      out.m_hat = n;
    }
  }
  return out;
}

OrderEstimate sdc_estimate(Matrix const &x)
{
  return sdc_from_curve(sdc_curve(x));
}

EigenSpectrum covariance_spectrum(Matrix const &x)
{
  if (x.cols() <= x.rows())
  {
    throw SampleSizeError("covariance_spectrum: need T > L");
  }
  return EigenSpectrum{numerics::sym_eig(numerics::sample_covariance(x)).values, x.cols()};
}

OrderEstimate mdl_estimate(EigenSpectrum const &spectrum)
{
  require_positive(spectrum, "mdl_estimate");
  Vector const &lambda  = spectrum.eigenvalues;
  Eigen::Index const l  = lambda.size();
  double const t        = static_cast<double>(spectrum.sample_count);
  double const log_t    = std::log(t);

  OrderEstimate out;
  out.method  = Method::Mdl;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < l; ++k)
  {
    auto const tail           = lambda.tail(l - k);
    double const count        = static_cast<double>(l - k);
    double const log_geo_mean = tail.array().log().sum() / count;
    double const arith_mean   = tail.sum() / count;
    double const fit          = -t * count * (log_geo_mean - std::log(arith_mean));
    double const penalty      = 0.5 * static_cast<double>(k * (2 * l - k)) * log_t;
    double const score        = fit + penalty;
    out.diagnostics[k]        = score;
    if (score < best)
    {
      best      = score;
      out.m_hat = k;
    }
  }
  return out;
}

OrderEstimate sorte_estimate(EigenSpectrum const &spectrum)
{
  Vector const &lambda = spectrum.eigenvalues;
  Eigen::Index const l = lambda.size();
  if (l < 4)
  {
    throw HypothesisRangeError("sorte_estimate: need at least 4 eigenvalues, got " +
                               std::to_string(l));
  }
  Vector const gaps = lambda.head(l - 1) - lambda.tail(l - 1);

  OrderEstimate out;
  out.method  = Method::Sorte;
  out.m_hat   = 1;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 1; k <= l - 3; ++k)
  {
    // Gap i (1-based) lives at gaps[i - 1].
    double const denom = tail_variance(gaps, k - 1);
    double const score = denom > 0.0 ? tail_variance(gaps, k) / denom
                                     : std::numeric_limits<double>::infinity();
    out.diagnostics[k] = score;
    if (score < best)
    {
      best      = score;
      out.m_hat = k;
    }
  }
  return out;
}

double tracy_widom_quantile(double alpha)
{
  // Upper quantiles of the real (beta = 1) Tracy-Widom law, from numerical
  // solution of Painleve II.
  struct Entry
  {
    double alpha;
    double quantile;
  };
  static constexpr Entry table[] = {
      {0.5, -1.2686},
      {0.1, 0.4501},
      {0.05, 0.9793},
      {0.01, 2.0233},
  };
  for (auto const &e : table)
  {
    if (std::abs(e.alpha - alpha) < 1e-12)
    {
      return e.quantile;
    }
  }
  throw DomainError("tracy_widom_quantile: alpha must be one of 0.5, 0.1, 0.05, 0.01");
}

double rmt_noise_variance(EigenSpectrum const &spectrum, Eigen::Index k)
{
  Vector const &lambda = spectrum.eigenvalues;
  Eigen::Index const l = lambda.size();
  if (k < 0 || k >= l)
  {
    throw HypothesisRangeError("rmt_noise_variance: k outside 0..L-1");
  }
  double const n        = static_cast<double>(spectrum.sample_count);
  double const rest     = static_cast<double>(l - k);
  double const tail_sum = lambda.tail(l - k).sum();

  double sigma = tail_sum / rest;
  for (int iter = 0; iter < 30; ++iter)
  {
    double bias = 0.0;
    bool real   = true;
    for (Eigen::Index j = 0; j < k; ++j)
    {
      double const b    = lambda[j] + sigma - sigma * rest / n;
      double const disc = b * b - 4.0 * lambda[j] * sigma;
      if (disc < 0.0)
      {
        real = false;
        break;
      }
      bias += lambda[j] - 0.5 * (b + std::sqrt(disc));
    }
    if (!real)
    {
      break;
    }
    double const next = (tail_sum + bias) / rest;
    bool const done   = std::abs(next - sigma) / sigma < 1e-5;
    sigma             = next;
    if (done)
    {
      break;
    }
  }
  return sigma;
}

OrderEstimate rmt_estimate(EigenSpectrum const &spectrum, double alpha)
{
  double const s_alpha = tracy_widom_quantile(alpha);
  Vector const &lambda = spectrum.eigenvalues;
  Eigen::Index const l = lambda.size();

  OrderEstimate out;
  out.method = Method::Rmt;
  out.m_hat  = 0;
  if (l < 2 || !lambda.allFinite() || !(lambda.minCoeff() > 0.0) ||
      spectrum.sample_count <= l)
  {
    return out;
  }

  double const n       = static_cast<double>(spectrum.sample_count);
  double const root_n  = std::sqrt(n - 0.5);
  Eigen::Index m_hat   = l - 1;
  for (Eigen::Index k = 1; k < l; ++k)
  {
    double const root_p = std::sqrt(static_cast<double>(l - k) - 0.5);
    double const mu     = (root_n + root_p) * (root_n + root_p);
    double const scale  = std::sqrt(mu) * std::cbrt(1.0 / root_n + 1.0 / root_p);
    double const sigma2 = rmt_noise_variance(spectrum, k);
    double const bound  = sigma2 * (mu + s_alpha * scale);
    out.diagnostics[k]  = n * lambda[k - 1] / bound;
    if (!(n * lambda[k - 1] > bound))
    {
      m_hat = k - 1;
      break;
    }
  }
  out.m_hat = m_hat;
  return out;
}

}  // namespace estimators
}  // namespace sdcount
