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

#include <algorithm>
#include <cmath>
#include <string>

namespace sdcount {

namespace {

void require_sample_count(Eigen::Index count, Eigen::Index max_samples)
{
  if (count < 2)
  {
    throw SampleSizeError("distance statistics need at least 2 samples, got " +
                          std::to_string(count));
  }
  if (count > max_samples)
  {
    throw SampleSizeError("sample count " + std::to_string(count) + " exceeds the cap of " +
                          std::to_string(max_samples));
  }
}

void require_same_count(SampleSet const &x, SampleSet const &y)
{
  if (x.count() != y.count())
  {
    throw DimensionError("sample counts differ: " + std::to_string(x.count()) + " vs " +
                         std::to_string(y.count()));
  }
}

// Visits every unordered pair t < tau once, in a fixed order, handing the
// distance to `fn(t, tau, d)`. Scalar samples take the branch-free abs path.
template <typename Fn>
void for_each_pair(Matrix const &v, Fn &&fn)
{
  Eigen::Index const n = v.cols();
  if (v.rows() == 1)
  {
    double const *p = v.data();
    for (Eigen::Index t = 0; t < n; ++t)
    {
      double const xt = p[t];
      for (Eigen::Index tau = t + 1; tau < n; ++tau)
      {
        fn(t, tau, std::abs(xt - p[tau]));
      }
    }
    return;
  }
  for (Eigen::Index t = 0; t < n; ++t)
  {
    for (Eigen::Index tau = t + 1; tau < n; ++tau)
    {
      fn(t, tau, (v.col(t) - v.col(tau)).norm());
    }
  }
}

// Sums of products of double-centred distances over all (t, tau), including
// the diagonal where the raw distance is zero.
double centred_products(DistanceProfile const &x, DistanceProfile const &y)
{
  Matrix const &xv    = x.samples().values();
  Matrix const &yv    = y.samples().values();
  Vector const &xr    = x.row_means();
  Vector const &yr    = y.row_means();
  double const xg     = x.grand_mean();
  double const yg     = y.grand_mean();
  Eigen::Index const n = xv.cols();

  double diag = 0.0;
  for (Eigen::Index t = 0; t < n; ++t)
  {
    diag += (xg - 2.0 * xr[t]) * (yg - 2.0 * yr[t]);
  }

  double off = 0.0;

  if (xv.rows() == 1 && yv.rows() == 1)
  {
    double const *px = xv.data();
    double const *py = yv.data();
    double const *rx = xr.data();
    double const *ry = yr.data();
    for (Eigen::Index t = 0; t < n; ++t)
    {
      double const xt  = px[t];
      double const yt  = py[t];
      double const cxt = xg - rx[t];
      double const cyt = yg - ry[t];
      double row = 0.0;
      for (Eigen::Index tau = t + 1; tau < n; ++tau)
      {
        double const a = std::abs(xt - px[tau]) + cxt - rx[tau];
        double const b = std::abs(yt - py[tau]) + cyt - ry[tau];
        row += a * b;
      }
      off += row;
    }
  }
  else
  {
    for (Eigen::Index t = 0; t < n; ++t)
    {
      for (Eigen::Index tau = t + 1; tau < n; ++tau)
      {
        double const a = x.distance(t, tau) - xr[t] - xr[tau] + xg;
        double const b = y.distance(t, tau) - yr[t] - yr[tau] + yg;
        off += a * b;
      }
    }
  }

  return diag + 2.0 * off;
}

double normalise(double sum, Eigen::Index n)
{
  double const t = static_cast<double>(n);
  // The biased estimator is a trace of a PSD product; negatives are round-off.
  return std::max(sum / (t * t), 0.0);
}

double ratio(double cov, double var_x, double var_y, bool degenerate)
{
  if (degenerate)
  {
    return 0.0;
  }
  double const denom = std::sqrt(var_x * var_y);
  if (!(denom > 0.0))
  {
    return 0.0;
  }
  return std::clamp(cov / denom, 0.0, 1.0);
}

}  // namespace

SampleSet::SampleSet(Matrix values)
  : values_(std::move(values))
{
  if (values_.rows() < 1)
  {
    throw DimensionError("sample set needs at least one dimension");
  }
  if (!values_.allFinite())
  {
    throw DomainError("sample set has non-finite entries");
  }
}

SampleSet SampleSet::scalar(Eigen::Ref<Vector const> const &values)
{
  return SampleSet(Matrix(values.transpose()));
}

Matrix DistanceMatrix::double_centered() const
{
  Vector const row  = entries_.rowwise().mean();
  Vector const col  = entries_.colwise().mean().transpose();
  double const mean = entries_.mean();
  Matrix out        = entries_;
  out.colwise() -= row;
  out.rowwise() -= col.transpose();
  out.array() += mean;
  return out;
}

DistanceProfile::DistanceProfile(SampleSet samples, Eigen::Index max_samples)
  : samples_(std::move(samples))
{
  Eigen::Index const n = samples_.count();
  require_sample_count(n, max_samples);

  row_means_ = Vector::Zero(n);
  for_each_pair(samples_.values(), [this](Eigen::Index t, Eigen::Index tau, double d) {
    row_means_[t] += d;
    row_means_[tau] += d;
  });
  row_means_ /= static_cast<double>(n);
  grand_mean_ = row_means_.mean();

  variance_ = normalise(centred_products(*this, *this), n);
}

bool DistanceProfile::degenerate() const noexcept
{
  return variance_ <= 1e-14 * grand_mean_ * grand_mean_;
}

double DistanceProfile::distance(Eigen::Index t, Eigen::Index tau) const
{
  Matrix const &v = samples_.values();
  if (v.rows() == 1)
  {
    return std::abs(v(0, t) - v(0, tau));
  }
  return (v.col(t) - v.col(tau)).norm();
}

DistanceMatrix pairwise_distances(SampleSet const &x, Eigen::Index max_samples)
{
  Eigen::Index const n = x.count();
  require_sample_count(n, max_samples);
  Matrix d = Matrix::Zero(n, n);
  for_each_pair(x.values(), [&d](Eigen::Index t, Eigen::Index tau, double dist) {
    d(t, tau) = dist;
    d(tau, t) = dist;
  });
  return DistanceMatrix(std::move(d));
}

double dcov_sq(DistanceProfile const &x, DistanceProfile const &y)
{
  require_same_count(x.samples(), y.samples());
  return normalise(centred_products(x, y), x.samples().count());
}

double dcov_sq(SampleSet const &x, SampleSet const &y)
{
  require_same_count(x, y);
  return dcov_sq(DistanceProfile(x), DistanceProfile(y));
}

double dvar_sq(SampleSet const &x)
{
  return DistanceProfile(x).variance();
}

double dcor(DistanceProfile const &x, DistanceProfile const &y)
{
  require_same_count(x.samples(), y.samples());
  double const cov = dcov_sq(x, y);
  return ratio(cov, x.variance(), y.variance(), x.degenerate() || y.degenerate());
}

double dcor(SampleSet const &x, SampleSet const &y)
{
  require_same_count(x, y);
  return dcor(DistanceProfile(x), DistanceProfile(y));
}

}  // namespace sdcount
