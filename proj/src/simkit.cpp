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

#include "sdcount/simkit.hpp"

#include "sdcount/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>
#include <thread>

namespace sdcount {

NoiseModel NoiseModel::white(double variance)
{
  return NoiseModel{NoiseKind::White, variance, 0.0, 0.0};
}

NoiseModel NoiseModel::perturbed_diagonal(double variance, double epsilon_db)
{
  return NoiseModel{NoiseKind::PerturbedDiagonal, variance, epsilon_db, 0.0};
}

NoiseModel NoiseModel::uniform_diagonal(double base_variance, double delta_db)
{
  return NoiseModel{NoiseKind::UniformDiagonal, base_variance, delta_db, 0.0};
}

NoiseModel NoiseModel::tridiagonal(double variance, double correlation)
{
  return NoiseModel{NoiseKind::Tridiagonal, variance, 0.0, correlation};
}

double db_to_linear(double db)
{
  return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
  return 10.0 * std::log10(linear);
}

std::string_view source_law_name(SourceLaw law)
{
  switch (law)
  {
  case SourceLaw::Laplace:
    return "laplace";
  case SourceLaw::Uniform:
    return "uniform";
  case SourceLaw::Rademacher:
    return "rademacher";
  case SourceLaw::Pam4:
    return "pam4";
  }
  return "unknown";
}

std::optional<SourceLaw> parse_source_law(std::string_view name)
{
  for (auto law : {SourceLaw::Laplace, SourceLaw::Uniform, SourceLaw::Rademacher, SourceLaw::Pam4})
  {
    if (source_law_name(law) == name)
    {
      return law;
    }
  }
  return std::nullopt;
}

std::string_view mixing_law_name(MixingLaw law)
{
  return law == MixingLaw::StdGaussian ? "gaussian" : "uniform01";
}

std::optional<MixingLaw> parse_mixing_law(std::string_view name)
{
  if (name == "gaussian")
  {
    return MixingLaw::StdGaussian;
  }
  if (name == "uniform01")
  {
    return MixingLaw::StdUniform01;
  }
  return std::nullopt;
}

std::string_view noise_kind_name(NoiseKind kind)
{
  switch (kind)
  {
  case NoiseKind::White:
    return "white";
  case NoiseKind::PerturbedDiagonal:
    return "perturbed_diagonal";
  case NoiseKind::UniformDiagonal:
    return "uniform_diagonal";
  case NoiseKind::Tridiagonal:
    return "tridiagonal";
  }
  return "unknown";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view name)
{
  for (auto kind : {NoiseKind::White, NoiseKind::PerturbedDiagonal, NoiseKind::UniformDiagonal,
                    NoiseKind::Tridiagonal})
  {
    if (noise_kind_name(kind) == name)
    {
      return kind;
    }
  }
  return std::nullopt;
}

void ScenarioConfig::validate() const
{
  auto fail = [this](std::string const &what) {
    throw ConfigError("scenario '" + name + "': " + what);
  };
  if (scenario_id < 1 || scenario_id > 4)
  {
    fail("id must be 1..4");
  }
  if (sensors < 3)
  {
    fail("sensors must be at least 3");
  }
  if (source_counts.empty())
  {
    fail("no source count given");
  }
  for (auto m : source_counts)
  {
    if (m <= 1 || m >= sensors)
    {
      fail("source count " + std::to_string(m) + " violates 1 < M < L");
    }
  }
  if (source_laws.empty())
  {
    fail("no source law given");
  }
  if (grid.empty())
  {
    fail("empty grid");
  }
  for (auto const &p : grid)
  {
    if (p.samples <= 10 * sensors)
    {
      fail("samples " + std::to_string(p.samples) + " must exceed 10 L");
    }
    if (!std::isfinite(p.noise_db) || !std::isfinite(p.spread_db) || p.spread_db < 0.0)
    {
      fail("invalid noise parameters");
    }
  }
  if (trials < 1)
  {
    fail("trials must be at least 1");
  }
  if (smallest_singular && !(*smallest_singular > 0.0))
  {
    fail("smallest singular value must be positive");
  }
  if (methods.empty())
  {
    fail("no methods selected");
  }
  if (noise == NoiseKind::Tridiagonal && !(std::abs(noise_correlation) < 0.5))
  {
    fail("tridiagonal correlation must satisfy |rho| < 0.5");
  }
  if (std::find(methods.begin(), methods.end(), Method::Rmt) != methods.end())
  {
    try
    {
      estimators::tracy_widom_quantile(alpha);
    }
    catch (DomainError const &)
    {
      fail("alpha must be one of 0.5, 0.1, 0.05, 0.01");
    }
  }
}

std::vector<SourceSpec> ScenarioConfig::source_specs(Eigen::Index count) const
{
  std::vector<SourceSpec> specs;
  specs.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index m = 0; m < count; ++m)
  {
    specs.push_back({source_laws[static_cast<std::size_t>(m) % source_laws.size()], 1.0});
  }
  if (dominant_source_db && !specs.empty())
  {
    specs.front().variance = db_to_linear(*dominant_source_db);
  }
  return specs;
}

NoiseModel ScenarioConfig::noise_model(GridPoint const &point) const
{
  double const variance = db_to_linear(point.noise_db);
  switch (noise)
  {
  case NoiseKind::White:
    return NoiseModel::white(variance);
  case NoiseKind::PerturbedDiagonal:
    return NoiseModel::perturbed_diagonal(variance, point.spread_db);
  case NoiseKind::UniformDiagonal:
    return NoiseModel::uniform_diagonal(variance, point.spread_db);
  case NoiseKind::Tridiagonal:
    return NoiseModel::tridiagonal(variance, noise_correlation);
  }
  return NoiseModel::white(variance);
}

namespace simkit {

namespace {

using Engine = std::mt19937_64;

// Uniform on the open interval (0, 1) from the top 53 bits.
double open_unit(Engine &engine)
{
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

double draw_one(SourceLaw law, Engine &engine)
{
  switch (law)
  {
  case SourceLaw::Laplace:
  {
    // Inverse CDF, scale 1/sqrt(2) for unit variance.
    double const u = open_unit(engine) - 0.5;
    double const b = 1.0 / std::sqrt(2.0);
    return (u < 0.0 ? b : -b) * std::log(1.0 - 2.0 * std::abs(u));
  }
  case SourceLaw::Uniform:
    return std::sqrt(3.0) * (2.0 * open_unit(engine) - 1.0);
  case SourceLaw::Rademacher:
    return (engine() >> 63) != 0 ? 1.0 : -1.0;
  case SourceLaw::Pam4:
  {
    static constexpr double levels[] = {-3.0, -1.0, 1.0, 3.0};
    return levels[engine() >> 62] / std::sqrt(5.0);
  }
  }
  return 0.0;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts)
{
  std::uint64_t state = mix64(base);
  for (auto p : parts)
  {
    state = mix64(state ^ mix64(p));
  }
  return state;
}

Matrix draw_sources(std::vector<SourceSpec> const &specs, Eigen::Index samples,
                    std::uint64_t seed)
{
  if (samples < 1)
  {
    throw SampleSizeError("draw_sources: need at least one sample");
  }
  Matrix s(static_cast<Eigen::Index>(specs.size()), samples);
  for (std::size_t m = 0; m < specs.size(); ++m)
  {
    if (!(specs[m].variance > 0.0))
    {
      throw DomainError("draw_sources: variance must be positive");
    }
    Engine engine(derive_seed(seed, {static_cast<std::uint64_t>(m)}));
    double const scale = std::sqrt(specs[m].variance);
    for (Eigen::Index t = 0; t < samples; ++t)
    {
      s(static_cast<Eigen::Index>(m), t) = scale * draw_one(specs[m].law, engine);
    }
  }
  return s;
}

Matrix draw_mixing(Eigen::Index sensors, Eigen::Index sources, MixingLaw law,
                   std::uint64_t seed)
{
  if (sources < 2 || sensors <= sources)
  {
    throw DimensionError("draw_mixing: need L > M >= 2");
  }
  Engine engine(seed);
  for (int attempt = 0; attempt < 10; ++attempt)
  {
    Matrix a(sensors, sources);
    if (law == MixingLaw::StdGaussian)
    {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index j = 0; j < sources; ++j)
      {
        for (Eigen::Index i = 0; i < sensors; ++i)
        {
          a(i, j) = normal(engine);
        }
      }
    }
    else
    {
      for (Eigen::Index j = 0; j < sources; ++j)
      {
        for (Eigen::Index i = 0; i < sensors; ++i)
        {
          a(i, j) = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        }
      }
    }
    if (numerics::svd(a).singular.minCoeff() > 1e-10)
    {
      return a;
    }
  }
  throw ComputationError("draw_mixing: no full-rank draw in 10 attempts");
}

Matrix set_smallest_singular(Matrix const &a, double value)
{
  if (!(value > 0.0))
  {
    throw DomainError("set_smallest_singular: value must be positive");
  }
  Svd const dec = numerics::svd(a);
  Eigen::Index const k = dec.singular.size();
  if (!(dec.singular[k - 1] > 1e-10 * std::max(dec.singular[0], 1.0)))
  {
    throw RankDeficiencyError("set_smallest_singular: input is rank deficient");
  }
  Vector singular = dec.singular;
  singular[k - 1] = value;
  return dec.u * singular.asDiagonal() * dec.v.transpose();
}

Matrix build_noise_cov(NoiseModel const &model, Eigen::Index sensors, std::uint64_t seed)
{
  if (sensors < 1)
  {
    throw DimensionError("build_noise_cov: need at least one sensor");
  }
  if (!(model.variance > 0.0))
  {
    throw DomainError("build_noise_cov: variance must be positive");
  }
  Matrix r = Matrix::Zero(sensors, sensors);
  Engine engine(seed);
  double const base_db = linear_to_db(model.variance);
  switch (model.kind)
  {
  case NoiseKind::White:
    r.diagonal().setConstant(model.variance);
    break;
  case NoiseKind::PerturbedDiagonal:
  {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index l = 0; l < sensors; ++l)
    {
      r(l, l) = db_to_linear(base_db + model.spread_db * normal(engine));
    }
    break;
  }
  case NoiseKind::UniformDiagonal:
    for (Eigen::Index l = 0; l < sensors; ++l)
    {
      double const u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
      r(l, l)        = db_to_linear(base_db + model.spread_db * u);
    }
    break;
  case NoiseKind::Tridiagonal:
    r.diagonal().setConstant(model.variance);
    for (Eigen::Index l = 0; l + 1 < sensors; ++l)
    {
      r(l, l + 1) = model.correlation * model.variance;
      r(l + 1, l) = model.correlation * model.variance;
    }
    break;
  }
  if (!(numerics::sym_eig(r).values.minCoeff() > 0.0))
  {
    throw NotPsdError("build_noise_cov: covariance is not positive definite");
  }
  return r;
}

Matrix synthesize(Matrix const &mixing, Matrix const &sources, Matrix const &noise_cov,
                  std::uint64_t seed)
{
  Eigen::Index const l = mixing.rows();
  if (mixing.cols() != sources.rows() || noise_cov.rows() != l || noise_cov.cols() != l)
  {
    throw DimensionError("synthesize: A is " + std::to_string(l) + "x" +
                         std::to_string(mixing.cols()) + ", S has " +
                         std::to_string(sources.rows()) + " rows, R_v is " +
                         std::to_string(noise_cov.rows()) + "x" +
                         std::to_string(noise_cov.cols()));
  }
  Eigen::Index const t = sources.cols();
  Matrix w(l, t);
  Engine engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index col = 0; col < t; ++col)
  {
    for (Eigen::Index row = 0; row < l; ++row)
    {
      w(row, col) = normal(engine);
    }
  }
  return mixing * sources + numerics::psd_sqrt(noise_cov) * w;
}

std::uint64_t trial_seed(ScenarioConfig const &config, std::size_t grid_index,
                         Eigen::Index source_count, int trial_index)
{
  return derive_seed(config.base_seed,
                     {static_cast<std::uint64_t>(config.scenario_id),
                      static_cast<std::uint64_t>(grid_index),
                      static_cast<std::uint64_t>(source_count),
                      static_cast<std::uint64_t>(trial_index)});
}

Matrix generate_trial_data(ScenarioConfig const &config, GridPoint const &point,
                           Eigen::Index source_count, std::uint64_t seed)
{
  auto stream = [seed](Stream s) {
    return derive_seed(seed, {static_cast<std::uint64_t>(s)});
  };
  Matrix a = draw_mixing(config.sensors, source_count, config.mixing, stream(Stream::Mixing));
  if (config.smallest_singular)
  {
    a = set_smallest_singular(a, *config.smallest_singular);
  }
  Matrix const s =
      draw_sources(config.source_specs(source_count), point.samples, stream(Stream::Sources));
  Matrix const r =
      build_noise_cov(config.noise_model(point), config.sensors, stream(Stream::NoiseCovariance));
  return synthesize(a, s, r, stream(Stream::Noise));
}

TrialOutcome run_trial(ScenarioConfig const &config, GridPoint const &point,
                       Eigen::Index source_count, std::uint64_t seed,
                       std::vector<Method> const &methods)
{
  TrialOutcome out;
  out.true_sources = source_count;
  Matrix x;
  try
  {
    x = generate_trial_data(config, point, source_count, seed);
  }
  catch (Error const &e)
  {
    for (auto m : methods)
    {
      out.m_hat[m] = std::nullopt;
    }
    out.failures.push_back(std::string("generate: ") + e.what());
    return out;
  }

  std::optional<EigenSpectrum> spectrum;
  for (auto method : methods)
  {
    try
    {
      if (method == Method::Sdc)
      {
        out.sdc          = estimators::sdc_curve(x);
        out.m_hat[method] = estimators::sdc_from_curve(*out.sdc).m_hat;
        continue;
      }
      if (!spectrum)
      {
        spectrum = estimators::covariance_spectrum(x);
      }
      switch (method)
      {
      case Method::Mdl:
        out.m_hat[method] = estimators::mdl_estimate(*spectrum).m_hat;
        break;
      case Method::Sorte:
        out.m_hat[method] = estimators::sorte_estimate(*spectrum).m_hat;
        break;
      case Method::Rmt:
        out.m_hat[method] = estimators::rmt_estimate(*spectrum, config.alpha).m_hat;
        break;
      case Method::Sdc:
        break;
      }
    }
    catch (Error const &e)
    {
      out.m_hat[method] = std::nullopt;
      out.failures.push_back(std::string(method_name(method)) + ": " + e.what());
    }
  }
  return out;
}

SweepResult run_sweep(ScenarioConfig const &config, std::vector<Method> const &methods,
                      unsigned threads)
{
  config.validate();
  if (methods.empty())
  {
    throw ConfigError("run_sweep: no methods selected");
  }

  struct Job
  {
    std::size_t grid_index;
    Eigen::Index source_count;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t g = 0; g < config.grid.size(); ++g)
  {
    for (auto m : config.source_counts)
    {
      for (int t = 0; t < config.trials; ++t)
      {
        jobs.push_back({g, m, t});
      }
    }
  }

  std::vector<TrialOutcome> outcomes(jobs.size());
  auto run_job = [&](std::size_t i) {
    Job const &job = jobs[i];
    // SORTE cannot report more than L - 3 sources.
    std::vector<Method> active;
    for (auto m : methods)
    {
      if (m == Method::Sorte && job.source_count > config.sensors - 3)
      {
        continue;
      }
      active.push_back(m);
    }
    outcomes[i] = run_trial(config, config.grid[job.grid_index], job.source_count,
                            trial_seed(config, job.grid_index, job.source_count, job.trial),
                            active);
  };

  if (threads == 0)
  {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  if (threads <= 1)
  {
    for (std::size_t i = 0; i < jobs.size(); ++i)
    {
      run_job(i);
    }
  }
  else
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
    {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
        {
          run_job(i);
        }
      });
    }
    for (auto &th : pool)
    {
      th.join();
    }
  }

  // Aggregate in job order so the result does not depend on scheduling.
  SweepResult result;
  result.config = config;
  result.points.resize(config.grid.size());
  std::vector<int> curve_counts(config.grid.size(), 0);
  for (std::size_t g = 0; g < config.grid.size(); ++g)
  {
    result.points[g].point = config.grid[g];
  }
  for (std::size_t i = 0; i < jobs.size(); ++i)
  {
    Job const &job          = jobs[i];
    TrialOutcome const &out = outcomes[i];
    GridOutcome &point      = result.points[job.grid_index];
    for (auto const &[method, m_hat] : out.m_hat)
    {
      MethodOutcome &mo = point.methods[method];
      ++mo.trials;
      if (!m_hat)
      {
        ++mo.failures;
        ++mo.errors;
      }
      else if (*m_hat != job.source_count)
      {
        ++mo.errors;
      }
    }
    for (auto const &msg : out.failures)
    {
      point.failure_messages.push_back("M=" + std::to_string(job.source_count) + " trial " +
                                       std::to_string(job.trial) + ": " + msg);
    }
    if (out.sdc)
    {
      for (auto const &[n, v] : out.sdc->values)
      {
        point.mean_sdc_curve[n] += v;
      }
      ++curve_counts[job.grid_index];
    }
  }
  for (std::size_t g = 0; g < result.points.size(); ++g)
  {
    for (auto &[n, v] : result.points[g].mean_sdc_curve)
    {
      v /= static_cast<double>(curve_counts[g]);
    }
  }
  return result;
}

}  // namespace simkit
}  // namespace sdcount
