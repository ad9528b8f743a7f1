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

#include "sdcount/estimators.hpp"
#include "sdcount/numerics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdcount {

enum class SourceLaw
{
  Laplace,
  Uniform,
  Rademacher,
  Pam4,
};

struct SourceSpec
{
  SourceLaw law   = SourceLaw::Laplace;
  double variance = 1.0;
};

enum class MixingLaw
{
  StdGaussian,
  StdUniform01,
};

enum class NoiseKind
{
  White,              // variance * I
  PerturbedDiagonal,  // diag 10^((variance_db + N(0, eps^2)) / 10)
  UniformDiagonal,    // diag 10^(U(variance_db, variance_db + spread) / 10)
  Tridiagonal,        // variance on the diagonal, correlation * variance next to it
};

/// Spatial noise covariance law. `variance` is linear; `spread_db` is the
/// dB-domain width (epsilon for PerturbedDiagonal, Delta for UniformDiagonal).
struct NoiseModel
{
  NoiseKind kind     = NoiseKind::White;
  double variance    = 1.0;
  double spread_db   = 0.0;
  double correlation = 0.1;

  static NoiseModel white(double variance);
  static NoiseModel perturbed_diagonal(double variance, double epsilon_db);
  static NoiseModel uniform_diagonal(double base_variance, double delta_db);
  static NoiseModel tridiagonal(double variance, double correlation = 0.1);
};

double db_to_linear(double db);
double linear_to_db(double linear);

std::string_view source_law_name(SourceLaw law);
std::optional<SourceLaw> parse_source_law(std::string_view name);
std::string_view mixing_law_name(MixingLaw law);
std::optional<MixingLaw> parse_mixing_law(std::string_view name);
std::string_view noise_kind_name(NoiseKind kind);
std::optional<NoiseKind> parse_noise_kind(std::string_view name);

namespace simkit {

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Folds each part into the running state with mix64; order matters.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// Seed streams used inside one trial.
enum class Stream : std::uint64_t
{
  Mixing  = 1,
  Sources = 2,
  NoiseCovariance = 3,
  Noise   = 4,
};

Matrix draw_sources(std::vector<SourceSpec> const &specs, Eigen::Index samples,
                    std::uint64_t seed);

Matrix draw_mixing(Eigen::Index sensors, Eigen::Index sources, MixingLaw law,
                   std::uint64_t seed);

/// Replaces the smallest singular value, keeping the singular subspaces.
Matrix set_smallest_singular(Matrix const &a, double value);

Matrix build_noise_cov(NoiseModel const &model, Eigen::Index sensors, std::uint64_t seed);

/// X = A S + R_v^{1/2} W with W standard normal.
Matrix synthesize(Matrix const &mixing, Matrix const &sources, Matrix const &noise_cov,
                  std::uint64_t seed);

}  // namespace simkit

/// One point on a sweep's x-axis and the parameters that vary with it.
struct GridPoint
{
  double value         = 0.0;
  Eigen::Index samples = 0;
  double noise_db      = 0.0;  // sigma^2 (or sigma_0^2) in dB
  double spread_db     = 0.0;  // epsilon or Delta, in dB
};

struct ScenarioConfig
{
  int scenario_id = 1;
  std::string name = "scenario";
  Eigen::Index sensors = 0;
  std::vector<Eigen::Index> source_counts;  // one entry, or the M-range to average over
  std::vector<SourceLaw> source_laws;       // cycled to fill M sources
  std::optional<double> dominant_source_db; // variance of source 1, in dB
  MixingLaw mixing = MixingLaw::StdGaussian;
  std::optional<double> smallest_singular;  // engineered (D_A)_{M,M}
  NoiseKind noise = NoiseKind::White;
  double noise_correlation = 0.1;
  std::string grid_label = "grid";
  std::vector<GridPoint> grid;
  int trials = 100;
  std::uint64_t base_seed = 1;
  std::vector<Method> methods = {Method::Sdc, Method::Mdl, Method::Sorte, Method::Rmt};
  double alpha = 0.1;

  /// Throws ConfigError on any violated constraint.
  void validate() const;

  std::vector<SourceSpec> source_specs(Eigen::Index count) const;
  NoiseModel noise_model(GridPoint const &point) const;
};

struct MethodOutcome
{
  int trials   = 0;
  int errors   = 0;  // m_hat != M, failures included
  int failures = 0;  // trials where the estimator threw
  double error_rate() const
  {
    return trials > 0 ? static_cast<double>(errors) / trials : 0.0;
  }
};

struct GridOutcome
{
  GridPoint point;
  std::map<Method, MethodOutcome> methods;
  /// Mean SDC(N) over successful trials, when SDC ran.
  std::map<Eigen::Index, double> mean_sdc_curve;
  std::vector<std::string> failure_messages;
};

struct SweepResult
{
  ScenarioConfig config;
  std::vector<GridOutcome> points;
};

/// Estimates for one synthesised trial.
struct TrialOutcome
{
  Eigen::Index true_sources = 0;
  std::map<Method, std::optional<Eigen::Index>> m_hat;
  std::optional<SdcCurve> sdc;
  std::vector<std::string> failures;
};

namespace simkit {

/// Data matrix for a trial; deterministic in (config, point, M, seed).
Matrix generate_trial_data(ScenarioConfig const &config, GridPoint const &point,
                           Eigen::Index source_count, std::uint64_t trial_seed);

TrialOutcome run_trial(ScenarioConfig const &config, GridPoint const &point,
                       Eigen::Index source_count, std::uint64_t trial_seed,
                       std::vector<Method> const &methods);

std::uint64_t trial_seed(ScenarioConfig const &config, std::size_t grid_index,
                         Eigen::Index source_count, int trial_index);

/// Runs every trial of every grid point. `threads` = 0 picks the hardware
/// concurrency; results do not depend on it.
SweepResult run_sweep(ScenarioConfig const &config, std::vector<Method> const &methods,
                      unsigned threads = 0);

}  // namespace simkit
}  // namespace sdcount
