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

#include "sdcount/errors.hpp"
#include "sdcount/estimators.hpp"
#include "sdcount/simkit.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sdcount {
namespace {

using testing::random_matrix;
using testing::random_orthogonal;

EigenSpectrum spectrum_of(std::vector<double> values, Eigen::Index samples)
{
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    v[static_cast<Eigen::Index>(i)] = values[i];
  }
  return EigenSpectrum{v, samples};
}

// Spiked spectrum: a few large values above a jittered floor, descending.
EigenSpectrum random_spectrum(std::mt19937_64 &rng)
{
  std::uniform_int_distribution<int> size(4, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int const l      = size(rng);
  int const spikes = std::uniform_int_distribution<int>(0, l - 1)(rng);
  std::vector<double> v;
  for (int i = 0; i < l; ++i)
  {
    double const floor = 1.0 + 0.3 * unit(rng);
    v.push_back(i < spikes ? floor * std::pow(10.0, 3.0 * unit(rng)) : floor);
  }
  std::sort(v.rbegin(), v.rend());
  Eigen::Index const t = std::uniform_int_distribution<Eigen::Index>(50, 5000)(rng);
  return spectrum_of(v, t);
}

// Independent MDL: long double, ratio of means written through the log of
// the product.
Eigen::Index mdl_oracle(EigenSpectrum const &s)
{
  Eigen::Index const l = s.eigenvalues.size();
  long double const t  = static_cast<long double>(s.sample_count);
  Eigen::Index best_k  = 0;
  long double best     = std::numeric_limits<long double>::infinity();
  for (Eigen::Index k = 0; k < l; ++k)
  {
    long double log_prod = 0.0L;
    long double sum      = 0.0L;
    for (Eigen::Index i = k; i < l; ++i)
    {
      log_prod += std::log(static_cast<long double>(s.eigenvalues[i]));
      sum += s.eigenvalues[i];
    }
    long double const p = static_cast<long double>(l - k);
    long double const score =
        t * p * (std::log(sum / p) - log_prod / p) + 0.5L * k * (2 * l - k) * std::log(t);
    if (score < best)
    {
      best   = score;
      best_k = k;
    }
  }
  return best_k;
}

long double population_variance(std::vector<long double> const &v)
{
  long double mean = 0.0L;
  for (auto x : v)
  {
    mean += x;
  }
  mean /= static_cast<long double>(v.size());
  long double acc = 0.0L;
  for (auto x : v)
  {
    acc += (x - mean) * (x - mean);
  }
  return acc / static_cast<long double>(v.size());
}

Eigen::Index sorte_oracle(EigenSpectrum const &s)
{
  Eigen::Index const l = s.eigenvalues.size();
  std::vector<long double> gaps;
  for (Eigen::Index i = 0; i + 1 < l; ++i)
  {
    gaps.push_back(static_cast<long double>(s.eigenvalues[i]) - s.eigenvalues[i + 1]);
  }
  Eigen::Index best_k = 1;
  long double best    = std::numeric_limits<long double>::infinity();
  for (Eigen::Index k = 1; k <= l - 3; ++k)
  {
    std::vector<long double> const from_k(gaps.begin() + k, gaps.end());
    std::vector<long double> const from_km1(gaps.begin() + (k - 1), gaps.end());
    long double const den   = population_variance(from_km1);
    long double const score = den > 0.0L ? population_variance(from_k) / den
                                          : std::numeric_limits<long double>::infinity();
    if (score < best)
    {
      best   = score;
      best_k = k;
    }
  }
  return best_k;
}

Matrix mixture(Eigen::Index l, std::vector<SourceLaw> const &laws, Eigen::Index t,
               double noise_db, std::uint64_t seed)
{
  std::vector<SourceSpec> specs;
  for (auto law : laws)
  {
    specs.push_back({law, 1.0});
  }
  auto const m   = static_cast<Eigen::Index>(laws.size());
  Matrix const a = simkit::draw_mixing(l, m, MixingLaw::StdGaussian, seed);
  Matrix const s = simkit::draw_sources(specs, t, seed + 1);
  Matrix const r = db_to_linear(noise_db) * Matrix::Identity(l, l);
  return simkit::synthesize(a, s, r, seed + 2);
}

TEST(Mdl, FrozenBaselines)
{
  EXPECT_EQ(estimators::mdl_estimate(spectrum_of({100, 100, 1, 1, 1, 1}, 1000)).m_hat, 2);
  auto const est = estimators::mdl_estimate(spectrum_of({5, 1, 1}, 500));
  EXPECT_EQ(est.m_hat, 1);
  EXPECT_NEAR(est.diagnostics.at(0), 466.22783436375533, 1e-9);
  EXPECT_NEAR(est.diagnostics.at(1), 15.536520246055478, 1e-9);
  EXPECT_NEAR(est.diagnostics.at(2), 24.858432393688766, 1e-9);
}

TEST(Mdl, FlatSpectrumGivesZero)
{
  EXPECT_EQ(estimators::mdl_estimate(spectrum_of({2, 2, 2, 2}, 100)).m_hat, 0);
}

TEST(Mdl, MatchesBruteForceProperty)
{
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i)
  {
    auto const s = random_spectrum(rng);
    EXPECT_EQ(estimators::mdl_estimate(s).m_hat, mdl_oracle(s)) << "instance " << i;
  }
}

TEST(Mdl, RejectsNonPositiveEigenvalues)
{
  EXPECT_THROW(estimators::mdl_estimate(spectrum_of({3, 1, 0}, 100)), DomainError);
  EXPECT_THROW(estimators::mdl_estimate(spectrum_of({3, 1, -1}, 100)), DomainError);
}

TEST(Sorte, FrozenBaselines)
{
  auto const a = estimators::sorte_estimate(spectrum_of({10, 1, 1, 1, 1}, 100));
  EXPECT_EQ(a.m_hat, 1);
  EXPECT_EQ(a.diagnostics.at(1), 0.0);
  EXPECT_TRUE(std::isinf(a.diagnostics.at(2)));

  auto const b = estimators::sorte_estimate(spectrum_of({10, 9, 1, 1, 1, 1}, 100));
  EXPECT_EQ(b.m_hat, 2);
  EXPECT_NEAR(b.diagnostics.at(1), 1.2295081967213113, 1e-12);

  // Equal gaps leave every denominator at zero; ties go to the smallest k.
  auto const c = estimators::sorte_estimate(spectrum_of({5, 4, 3, 2, 1}, 100));
  EXPECT_EQ(c.m_hat, 1);
  EXPECT_TRUE(std::isinf(c.diagnostics.at(1)));
}

TEST(Sorte, MatchesBruteForceProperty)
{
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i)
  {
    auto const s = random_spectrum(rng);
    EXPECT_EQ(estimators::sorte_estimate(s).m_hat, sorte_oracle(s)) << "instance " << i;
  }
}

TEST(Sorte, NeedsFourEigenvalues)
{
  EXPECT_THROW(estimators::sorte_estimate(spectrum_of({3, 2, 1}, 100)), HypothesisRangeError);
}

TEST(Rmt, TracyWidomTable)
{
  EXPECT_DOUBLE_EQ(estimators::tracy_widom_quantile(0.1), 0.4501);
  EXPECT_DOUBLE_EQ(estimators::tracy_widom_quantile(0.05), 0.9793);
  EXPECT_DOUBLE_EQ(estimators::tracy_widom_quantile(0.01), 2.0233);
  EXPECT_DOUBLE_EQ(estimators::tracy_widom_quantile(0.5), -1.2686);
  EXPECT_THROW(estimators::tracy_widom_quantile(0.2), DomainError);
}

TEST(Rmt, FrozenBaselines)
{
  EXPECT_EQ(estimators::rmt_estimate(spectrum_of({100, 100, 1, 1, 1, 1, 1}, 2000)).m_hat, 2);
  EXPECT_EQ(estimators::rmt_estimate(spectrum_of({1000, 1, 1, 1, 1, 1, 1}, 2000)).m_hat, 1);
  EXPECT_EQ(estimators::rmt_estimate(spectrum_of({1, 1, 1, 1, 1, 1, 1}, 2000)).m_hat, 0);
}

TEST(Rmt, DegenerateInputGivesZero)
{
  EXPECT_EQ(estimators::rmt_estimate(spectrum_of({1, 0, 0}, 100)).m_hat, 0);
  EXPECT_EQ(estimators::rmt_estimate(spectrum_of({5}, 100)).m_hat, 0);
}

TEST(Rmt, NoiseVarianceWithoutSignalIsTheMean)
{
  auto const s = spectrum_of({4, 3, 2, 1}, 1000);
  EXPECT_DOUBLE_EQ(estimators::rmt_noise_variance(s, 0), 2.5);
  // Removing a strong spike leaves roughly the floor.
  auto const spiked = spectrum_of({1000, 1, 1, 1, 1}, 5000);
  EXPECT_NEAR(estimators::rmt_noise_variance(spiked, 1), 1.0, 0.01);
}

TEST(CovarianceSpectrum, DescendingWithSampleCount)
{
  std::mt19937_64 rng(33);
  Matrix const x = random_matrix(5, 400, rng);
  auto const s   = estimators::covariance_spectrum(x);
  EXPECT_EQ(s.sample_count, 400);
  ASSERT_EQ(s.eigenvalues.size(), 5);
  for (Eigen::Index i = 1; i < 5; ++i)
  {
    EXPECT_GE(s.eigenvalues[i - 1], s.eigenvalues[i]);
  }
  Matrix const c = numerics::sample_covariance(x);
  EXPECT_NEAR(s.eigenvalues.sum(), c.trace(), 1e-12 * c.trace());
  EXPECT_THROW(estimators::covariance_spectrum(random_matrix(5, 5, rng)), SampleSizeError);
}

TEST(Baselines, DependOnlyOnTheSpectrum)
{
  Matrix const x = mixture(6, {SourceLaw::Uniform, SourceLaw::Uniform, SourceLaw::Uniform}, 2000,
                           -10.0, 34);
  std::mt19937_64 rng(35);
  Matrix const rotated = random_orthogonal(6, rng) * x;
  auto const a = estimators::covariance_spectrum(x);
  auto const b = estimators::covariance_spectrum(rotated);
  EXPECT_EQ(estimators::mdl_estimate(a).m_hat, estimators::mdl_estimate(b).m_hat);
  EXPECT_EQ(estimators::sorte_estimate(a).m_hat, estimators::sorte_estimate(b).m_hat);
  EXPECT_EQ(estimators::rmt_estimate(a).m_hat, estimators::rmt_estimate(b).m_hat);
  EXPECT_EQ(estimators::mdl_estimate(a).m_hat, 3);
  EXPECT_EQ(estimators::rmt_estimate(a).m_hat, 3);
}

TEST(Sdc, TiesGoToTheSmallestOrder)
{
  SdcCurve curve;
  curve.sensor_count = 6;
  curve.values = {{2, 0.3}, {3, 0.1}, {4, 0.1}, {5, 0.4}};
  auto const est = estimators::sdc_from_curve(curve);
  EXPECT_EQ(est.m_hat, 3);
  EXPECT_EQ(est.diagnostics, curve.values);
  EXPECT_THROW(estimators::sdc_from_curve(SdcCurve{}), HypothesisRangeError);
}

TEST(Sdc, ThreeSensorsAlwaysGiveTwo)
{
  Matrix const x = mixture(3, {SourceLaw::Laplace, SourceLaw::Uniform}, 1000, -20.0, 36);
  auto const curve = estimators::sdc_curve(x);
  ASSERT_EQ(curve.values.size(), 1u);
  EXPECT_EQ(curve.values.begin()->first, 2);
  EXPECT_EQ(estimators::sdc_from_curve(curve).m_hat, 2);
}

TEST(Sdc, CurveShapeAndRange)
{
  Matrix const x = mixture(5, {SourceLaw::Laplace, SourceLaw::Uniform}, 1500, -20.0, 37);
  auto const curve = estimators::sdc_curve(x);
  EXPECT_EQ(curve.sensor_count, 5);
  ASSERT_EQ(curve.values.size(), 3u);
  Eigen::Index expected = 2;
  for (auto const &[n, v] : curve.values)
  {
    EXPECT_EQ(n, expected++);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Sdc, InputChecks)
{
  std::mt19937_64 rng(38);
  EXPECT_THROW(estimators::sdc_curve(random_matrix(2, 500, rng)), HypothesisRangeError);
  EXPECT_THROW(estimators::sdc_curve(random_matrix(4, 40, rng)), SampleSizeError);
}

TEST(Sdc, ScaleInvariant)
{
  Matrix const x = mixture(5, {SourceLaw::Laplace, SourceLaw::Uniform, SourceLaw::Rademacher},
                           1500, -25.0, 39);
  auto const a = estimators::sdc_curve(x);
  auto const b = estimators::sdc_curve(7.5 * x);
  EXPECT_EQ(estimators::sdc_from_curve(a).m_hat, estimators::sdc_from_curve(b).m_hat);
  for (auto const &[n, v] : a.values)
  {
    EXPECT_NEAR(b.values.at(n), v, 1e-9);
  }
}

TEST(Sdc, TrueOrderBeatsTheOverestimate)
{
  // Two Rademacher sources at high SNR: the third separated row is noise that
  // is independent of the first two.
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    Matrix const x = mixture(4, {SourceLaw::Rademacher, SourceLaw::Rademacher}, 2000, -30.0,
                             100 * seed + 40);
    auto const curve = estimators::sdc_curve(x);
    good += curve.values.at(2) < curve.values.at(3) ? 1 : 0;
  }
  EXPECT_GE(good, 9);
}

TEST(Sdc, EstimatesTheOrderAtHighSnr)
{
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    Matrix const x = mixture(6, {SourceLaw::Laplace, SourceLaw::Uniform, SourceLaw::Rademacher},
                             3000, -30.0, 100 * seed + 41);
    good += estimators::sdc_estimate(x).m_hat == 3 ? 1 : 0;
  }
  EXPECT_GE(good, 9);
}

TEST(Methods, NamesRoundTrip)
{
  for (Method m : {Method::Sdc, Method::Mdl, Method::Sorte, Method::Rmt})
  {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  EXPECT_FALSE(parse_method("aic").has_value());
}

}  // namespace
}  // namespace sdcount
