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

#include "sdcount/numerics.hpp"

#include <utility>

namespace sdcount {

/// Samples beyond this count are rejected; the distance statistics are O(T^2).
inline constexpr Eigen::Index kDefaultMaxSamples = 20000;

/// T observations of a D-dimensional variable, one observation per column.
class SampleSet
{
public:
  explicit SampleSet(Matrix values);

  /// A 1 x T sample set from a row or vector of scalar observations.
  static SampleSet scalar(Eigen::Ref<Vector const> const &values);

  Eigen::Index dim() const noexcept
  {
    return values_.rows();
  }
  Eigen::Index count() const noexcept
  {
    return values_.cols();
  }
  Matrix const &values() const noexcept
  {
    return values_;
  }

private:
  Matrix values_;
};

/// T x T matrix of Euclidean distances between observations.
class DistanceMatrix
{
public:
  explicit DistanceMatrix(Matrix entries)
    : entries_(std::move(entries))
  {}

  Eigen::Index size() const noexcept
  {
    return entries_.rows();
  }
  Matrix const &entries() const noexcept
  {
    return entries_;
  }

  /// Row mean minus column mean plus grand mean removed; equals P D P with
  /// P = I - (1/T) 1 1^T.
  Matrix double_centered() const;

private:
  Matrix entries_;
};

/// Row means and grand mean of a sample set's distance matrix, kept so that
/// the centred distances can be regenerated pair by pair without storing the
/// T x T matrix. Reusable across many dcov evaluations against one sample.
class DistanceProfile
{
public:
  explicit DistanceProfile(SampleSet samples,
                           Eigen::Index max_samples = kDefaultMaxSamples);

  SampleSet const &samples() const noexcept
  {
    return samples_;
  }
  Vector const &row_means() const noexcept
  {
    return row_means_;
  }
  double grand_mean() const noexcept
  {
    return grand_mean_;
  }
  /// dvar_sq of the underlying samples.
  double variance() const noexcept
  {
    return variance_;
  }
  /// True when the distance variance is below 1e-14 * grand_mean^2.
  bool degenerate() const noexcept;

  double distance(Eigen::Index t, Eigen::Index tau) const;

private:
  SampleSet samples_;
  Vector row_means_;
  double grand_mean_ = 0.0;
  double variance_   = 0.0;
};

DistanceMatrix pairwise_distances(SampleSet const &x,
                                  Eigen::Index max_samples = kDefaultMaxSamples);

/// Biased empirical distance covariance (squared form):
/// (1/T^2) Tr(P Dx P Dy), clamped below at zero.
double dcov_sq(SampleSet const &x, SampleSet const &y);
double dcov_sq(DistanceProfile const &x, DistanceProfile const &y);

double dvar_sq(SampleSet const &x);

/// dcov_sq(x, y) / sqrt(dvar_sq(x) dvar_sq(y)) in [0, 1]; exactly 0 when
/// either distance variance is numerically zero.
double dcor(SampleSet const &x, SampleSet const &y);
double dcor(DistanceProfile const &x, DistanceProfile const &y);

}  // namespace sdcount
