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

#include "sdcount/numerics.hpp"

#include "sdcount/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sdcount::numerics {

namespace {

void require_finite(Matrix const &a, char const *what)
{
  if (a.size() == 0)
  {
    throw DimensionError(std::string(what) + ": empty matrix");
  }
  if (!all_finite(a))
  {
    throw DomainError(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

bool all_finite(Matrix const &a)
{
  return a.allFinite();
}

SymEig sym_eig(Matrix const &a)
{
  require_finite(a, "sym_eig");
  if (a.rows() != a.cols())
  {
    throw DimensionError("sym_eig: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
  double const scale = a.norm();
  if ((a - a.transpose()).norm() > 1e-10 * scale)
  {
    throw SymmetryError("sym_eig: matrix is not symmetric");
  }

  Matrix const sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
  {
    throw ComputationError("sym_eig: eigensolver did not converge");
  }

  // Eigen returns ascending order.
  SymEig out;
  out.values  = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Svd svd(Matrix const &a)
{
  require_finite(a, "svd");
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Svd{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Matrix psd_sqrt(Matrix const &a)
{
  SymEig const eig = sym_eig(a);
  double const scale = eig.values.cwiseAbs().maxCoeff();
  Vector root(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
  {
    double const lambda = eig.values[i];
    if (lambda < -1e-10 * scale)
    {
      throw NotPsdError("psd_sqrt: eigenvalue " + std::to_string(lambda) +
                        " is significantly negative");
    }
    root[i] = std::sqrt(std::max(lambda, 0.0));
  }
  Matrix s = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (s + s.transpose());
}

Matrix sample_covariance(Matrix const &x)
{
  require_finite(x, "sample_covariance");
  Matrix const centered = x.colwise() - x.rowwise().mean();
  Matrix cov = (centered * centered.transpose()) / static_cast<double>(x.cols());
  return 0.5 * (cov + cov.transpose());
}

}  // namespace sdcount::numerics
