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

#include "sdcount/ica.hpp"

#include "sdcount/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace sdcount::ica {

namespace {

void rotate_pair(Matrix &m, Eigen::Index p, Eigen::Index q, double c, double s)
{
  // m <- G^T m G with G the Givens rotation [[c, -s], [s, c]] on (p, q).
  Vector const row_p = m.row(p);
  m.row(p)           = c * row_p.transpose() + s * m.row(q);
  m.row(q)           = -s * row_p.transpose() + c * m.row(q);
  Vector const col_p = m.col(p);
  m.col(p)           = c * col_p + s * m.col(q);
  m.col(q)           = -s * col_p + c * m.col(q);
}

}  // namespace

double jacobi_threshold(Eigen::Index sample_count)
{
  return 1.0 / (100.0 * std::sqrt(static_cast<double>(sample_count)));
}

std::vector<Matrix> cumulant_matrices(Matrix const &z)
{
  Eigen::Index const n = z.rows();
  Eigen::Index const t = z.cols();
  if (n < 1 || t < 2)
  {
    throw DimensionError("cumulant_matrices: need at least one row and two samples");
  }
  double const inv_t = 1.0 / static_cast<double>(t);
  Matrix const r     = (z * z.transpose()) * inv_t;

  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = i; j < n; ++j)
    {
      Vector const w = z.row(i).cwiseProduct(z.row(j)).transpose();
      Matrix q       = (z * w.asDiagonal() * z.transpose()) * inv_t;
      q -= r(i, j) * r;
      q -= r.col(i) * r.row(j);
      q -= r.col(j) * r.row(i);
      out.push_back(0.5 * (q + q.transpose()));
    }
  }
  return out;
}

double off_diagonal_energy(std::vector<Matrix> const &matrices)
{
  double total = 0.0;
  for (auto const &m : matrices)
  {
    total += m.squaredNorm() - m.diagonal().squaredNorm();
  }
  return total;
}

JointDiagonalization joint_diagonalize(std::vector<Matrix> matrices,
                                       JointDiagonalizerOptions const &options)
{
  if (matrices.empty())
  {
    throw DimensionError("joint_diagonalize: empty matrix set");
  }
  Eigen::Index const n = matrices.front().rows();
  for (auto const &m : matrices)
  {
    if (m.rows() != n || m.cols() != n)
    {
      throw DimensionError("joint_diagonalize: matrices must share one square size");
    }
    if ((m - m.transpose()).norm() > 1e-10 * std::max(m.norm(), 1.0))
    {
      throw SymmetryError("joint_diagonalize: matrix is not symmetric");
    }
  }

  JointDiagonalization out;
  out.rotation = Matrix::Identity(n, n);
  out.off_diagonal_energy.push_back(off_diagonal_energy(matrices));

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep)
  {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p)
    {
      for (Eigen::Index q = p + 1; q < n; ++q)
      {
        double g00 = 0.0;
        double g01 = 0.0;
        double g11 = 0.0;
        for (auto const &m : matrices)
        {
          double const h0 = m(p, p) - m(q, q);
          double const h1 = m(p, q) + m(q, p);
          g00 += h0 * h0;
          g01 += h0 * h1;
          g11 += h1 * h1;
        }
        double const ton   = g00 - g11;
        double const toff  = 2.0 * g01;
        double const theta = 0.5 * std::atan2(toff, ton + std::sqrt(ton * ton + toff * toff));
        double const c     = std::cos(theta);
        double const s     = std::sin(theta);
        if (std::abs(s) <= options.threshold)
        {
          continue;
        }
        rotated = true;

        Vector const vp    = out.rotation.col(p);
        out.rotation.col(p) = c * vp + s * out.rotation.col(q);
        out.rotation.col(q) = -s * vp + c * out.rotation.col(q);
        for (auto &m : matrices)
        {
          rotate_pair(m, p, q, c, s);
        }
      }
    }
    out.sweeps = sweep + 1;
    out.off_diagonal_energy.push_back(off_diagonal_energy(matrices));
    if (!rotated)
    {
      out.converged = true;
      break;
    }
  }
  return out;
}

double excess_kurtosis(Eigen::Ref<Vector const> const &row)
{
  Vector const c  = row.array() - row.mean();
  double const m2 = c.squaredNorm() / static_cast<double>(c.size());
  if (!(m2 > 0.0))
  {
    return 0.0;
  }
  double const m4 = c.array().square().square().sum() / static_cast<double>(c.size());
  return m4 / (m2 * m2) - 3.0;
}

double amari_index(Matrix const &g)
{
  Eigen::Index const n = g.rows();
  if (n != g.cols() || n < 2)
  {
    throw DimensionError("amari_index: need a square matrix of size >= 2");
  }
  Matrix const a = g.cwiseAbs();
  double total   = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    total += a.row(i).sum() / a.row(i).maxCoeff() - 1.0;
    total += a.col(i).sum() / a.col(i).maxCoeff() - 1.0;
  }
  return total / (2.0 * static_cast<double>(n) * static_cast<double>(n - 1));
}

Separator::Separator(Matrix x)
  : x_(std::move(x))
{
  if (x_.rows() < 1 || x_.cols() <= x_.rows())
  {
    throw SampleSizeError("separator: need T > L, got L=" + std::to_string(x_.rows()) +
                          " T=" + std::to_string(x_.cols()));
  }
  if (!x_.allFinite())
  {
    throw DomainError("separator: non-finite input");
  }
  centered_   = x_.colwise() - x_.rowwise().mean();
  Matrix cov  = (centered_ * centered_.transpose()) / static_cast<double>(x_.cols());
  covariance_ = numerics::sym_eig(0.5 * (cov + cov.transpose()));
}

WhiteningResult Separator::whiten(Eigen::Index n) const
{
  Eigen::Index const l = x_.rows();
  if (n < 1 || n > l)
  {
    throw HypothesisRangeError("whiten: N=" + std::to_string(n) + " outside 1.." +
                               std::to_string(l));
  }
  Vector const &values = covariance_.values;
  if (!(values[n - 1] > 1e-12 * values[0]))
  {
    throw RankDeficiencyError("whiten: covariance eigenvalue " + std::to_string(n) +
                              " is numerically zero");
  }

  WhiteningResult out;
  out.retained_eigenvalues = values.head(n);
  out.projector = out.retained_eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
                  covariance_.vectors.leftCols(n).transpose();
  out.whitened = out.projector * centered_;
  return out;
}

SeparationResult Separator::separate(Eigen::Index n) const
{
  Eigen::Index const l = x_.rows();
  if (n < 2 || n > l)
  {
    throw HypothesisRangeError("separate: N=" + std::to_string(n) + " outside 2.." +
                               std::to_string(l));
  }
  if (x_.cols() <= 10 * l)
  {
    throw SampleSizeError("separate: need T > 10 L");
  }

  WhiteningResult const white = whiten(n);

  // Off-diagonal pairs stand in for both Q_ij and Q_ji.
  std::vector<Matrix> cumulants = cumulant_matrices(white.whitened);
  std::size_t k                 = 0;
  double const root2            = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = i; j < n; ++j, ++k)
    {
      if (i != j)
      {
        cumulants[k] *= root2;
      }
    }
  }

  JointDiagonalizerOptions options;
  options.threshold = jacobi_threshold(x_.cols());
  JointDiagonalization const jd = joint_diagonalize(std::move(cumulants), options);

  Matrix const unmixing = jd.rotation.transpose() * white.projector;
  Matrix const sources  = unmixing * x_;

  Vector kurt(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    kurt[i] = std::abs(excess_kurtosis(sources.row(i).transpose()));
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&kurt](Eigen::Index a, Eigen::Index b) { return kurt[a] > kurt[b]; });

  SeparationResult out;
  out.hypothesis = n;
  out.unmixing.resize(n, l);
  out.sort_keys.resize(n);
  for (Eigen::Index r = 0; r < n; ++r)
  {
    Eigen::Index const src = order[static_cast<std::size_t>(r)];
    Eigen::Index peak      = 0;
    sources.row(src).cwiseAbs().maxCoeff(&peak);
    double const sign = sources(src, peak) < 0.0 ? -1.0 : 1.0;
    out.unmixing.row(r) = sign * unmixing.row(src);
    out.sort_keys[r]    = kurt[src];
  }
  out.sources = out.unmixing * x_;
  return out;
}

WhiteningResult whiten(Matrix const &x, Eigen::Index n)
{
  return Separator(x).whiten(n);
}

SeparationResult separate(Matrix const &x, Eigen::Index n)
{
  return Separator(x).separate(n);
}

}  // namespace sdcount::ica
