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

#include <Eigen/Dense>

namespace sdcount {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric eigendecomposition A = Q diag(values) Q^T, values descending.
struct SymEig
{
  Vector values;
  Matrix vectors;  // columns are eigenvectors, matched to `values`
};

/// Thin SVD A = U diag(singular) V^T, singular values descending.
struct Svd
{
  Matrix u;
  Vector singular;
  Matrix v;
};

namespace numerics {

/// Throws SymmetryError unless A is square and symmetric to 1e-10 relative.
/// The decomposition runs on (A + A^T) / 2.
SymEig sym_eig(Matrix const &a);

Svd svd(Matrix const &a);

/// Symmetric square root of a PSD matrix. Eigenvalues down to
/// -1e-10 * ||A||_2 are clamped to zero, anything more negative is a
/// NotPsdError.
Matrix psd_sqrt(Matrix const &a);

/// (1/T) X X^T after removing each row's mean.
Matrix sample_covariance(Matrix const &x);

bool all_finite(Matrix const &a);

}  // namespace numerics
}  // namespace sdcount
