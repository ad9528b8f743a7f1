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

#include <vector>

namespace sdcount {

/// PCA whitening to N components.
struct WhiteningResult
{
  Matrix projector;             // N x L, Lambda_N^{-1/2} Q_N^T
  Matrix whitened;              // N x T, projector applied to mean-removed X
  Vector retained_eigenvalues;  // top N covariance eigenvalues, descending
};

/// Output of the separator run under an N-source hypothesis.
///
/// `sources` equals `unmixing * X` for the X that was separated. Rows are
/// ordered by descending absolute excess kurtosis so the most Gaussian
/// estimates come last, and each row is signed so that its largest-magnitude
/// sample is positive.
struct SeparationResult
{
  Eigen::Index hypothesis = 0;
  Matrix unmixing;  // N x L
  Matrix sources;   // N x T
  Vector sort_keys; // |excess kurtosis| per row, descending
};

struct JointDiagonalizerOptions
{
  /// A full sweep with every |sin(theta)| below this ends the iteration.
  double threshold = 1e-12;
  int max_sweeps   = 100;
};

struct JointDiagonalization
{
  Matrix rotation;  // orthogonal V; V^T M V is as diagonal as possible
  int sweeps     = 0;
  bool converged = false;
  /// Sum over matrices of squared off-diagonal entries, before the first
  /// sweep and after each sweep.
  std::vector<double> off_diagonal_energy;
};

namespace ica {

/// 1 / (100 sqrt(T)), the usual JADE rotation threshold.
double jacobi_threshold(Eigen::Index sample_count);

WhiteningResult whiten(Matrix const &x, Eigen::Index n);

/// Fourth-order cumulant matrices Q_ij[k, l] = cum(z_i, z_j, z_k, z_l) for
/// i <= j, in row-major pair order (0,0), (0,1), ..., (N-1,N-1).
std::vector<Matrix> cumulant_matrices(Matrix const &z);

/// Orthogonal joint diagonalization by Jacobi sweeps with the closed-form
/// Givens angle for each index pair.
JointDiagonalization joint_diagonalize(std::vector<Matrix> matrices,
                                       JointDiagonalizerOptions const &options = {});

double off_diagonal_energy(std::vector<Matrix> const &matrices);

/// Sample excess kurtosis m4 / m2^2 - 3 of a row, mean removed.
double excess_kurtosis(Eigen::Ref<Vector const> const &row);

/// Normalised Amari index of a square mixing-unmixing product G; 0 when G is
/// a scaled permutation, at most 1.
double amari_index(Matrix const &g);

/// Runs JADE on one data matrix for any number of hypotheses, sharing the
/// covariance eigendecomposition between them.
class Separator
{
public:
  explicit Separator(Matrix x);

  Eigen::Index sensor_count() const noexcept
  {
    return x_.rows();
  }
  Eigen::Index sample_count() const noexcept
  {
    return x_.cols();
  }

  WhiteningResult whiten(Eigen::Index n) const;
  SeparationResult separate(Eigen::Index n) const;

private:
  Matrix x_;
  Matrix centered_;
  SymEig covariance_;
};

/// JADE separation under the N-hypothesis; requires 2 <= N <= L, T > 10 L.
SeparationResult separate(Matrix const &x, Eigen::Index n);

}  // namespace ica
}  // namespace sdcount
